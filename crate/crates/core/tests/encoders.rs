// Copyright 2026 The zh-rewrite Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use num_rational::Rational64;
use proptest::prelude::*;
use zh_core::encoders::*;
use zh_core::normalform::normalize;
use zh_core::{eval, tensor_equal, Scalar, Tensor};

/// Bit `j` of an `n`-bit index, slot 0 being the most significant.
fn bit(idx: usize, n: usize, j: usize) -> bool {
    (idx >> (n - 1 - j)) & 1 == 1
}

/// Matrix of a classical map `f` on `m` input bits.
fn classical(m: usize, n: usize, f: impl Fn(&[bool]) -> Vec<bool>) -> Tensor {
    let mut e = vec![Scalar::zero(); 1 << (m + n)];
    for x in 0..1usize << m {
        let xs: Vec<bool> = (0..m).map(|j| bit(x, m, j)).collect();
        let y = f(&xs).iter().fold(0usize, |acc, &b| 2 * acc + b as usize);
        e[(y << m) | x] = Scalar::one();
    }
    Tensor::from_entries(m, n, e).unwrap()
}

/// Diagonal `n`-qubit matrix with entries `d(b)`.
fn diagonal(n: usize, d: impl Fn(&[bool]) -> Scalar) -> Tensor {
    let mut e = vec![Scalar::zero(); 1 << (2 * n)];
    for x in 0..1usize << n {
        let xs: Vec<bool> = (0..n).map(|j| bit(x, n, j)).collect();
        e[(x << n) | x] = d(&xs);
    }
    Tensor::from_entries(n, n, e).unwrap()
}

fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::int(x)).collect()
}

fn inv_sqrt2() -> Scalar {
    &Scalar::sqrt2().unwrap() * &Scalar::frac(1, 2)
}

fn pi(p: i64, q: i64) -> Rational64 {
    Rational64::new(p, q)
}

#[test]
fn hadamard_is_normalised() {
    let t = eval(&zx_generator(ZxGenerator::Hadamard)).unwrap();
    let want = Tensor::from_entries(1, 1, ints(&[1, 1, 1, -1])).unwrap().scale(&inv_sqrt2());
    assert_eq!(t, want);
    let id = Tensor::from_entries(1, 1, ints(&[1, 0, 0, 1])).unwrap();
    assert_eq!(t.then(&t).unwrap(), id);
}

#[test]
fn green_spiders() {
    let id = eval(&zx_generator(ZxGenerator::Green { m: 1, n: 1, phase: pi(0, 1) })).unwrap();
    assert_eq!(id.entries(), ints(&[1, 0, 0, 1]).as_slice());
    let s = eval(&zx_generator(ZxGenerator::Green { m: 1, n: 1, phase: pi(1, 2) })).unwrap();
    assert_eq!(s, diagonal(1, |b| if b[0] { Scalar::i() } else { Scalar::one() }));
    let bell = eval(&zx_generator(ZxGenerator::Green { m: 0, n: 2, phase: pi(1, 1) })).unwrap();
    assert_eq!(bell.entries(), ints(&[1, 0, 0, -1]).as_slice());
}

#[test]
fn red_spiders() {
    let x = eval(&zx_generator(ZxGenerator::Red { m: 1, n: 1, phase: pi(1, 1) })).unwrap();
    assert_eq!(x.entries(), ints(&[0, 1, 1, 0]).as_slice());
    let id = eval(&zx_generator(ZxGenerator::Red { m: 1, n: 1, phase: pi(0, 1) })).unwrap();
    assert_eq!(id.entries(), ints(&[1, 0, 0, 1]).as_slice());
    // |+⟩ + |−⟩ = √2 |0⟩
    let zero = eval(&zx_generator(ZxGenerator::Red { m: 0, n: 1, phase: pi(0, 1) })).unwrap();
    assert_eq!(zero.entries(), &[Scalar::sqrt2().unwrap(), Scalar::zero()]);
}

#[test]
fn red_spider_is_green_conjugated_by_hadamards() {
    let h = eval(&zx_generator(ZxGenerator::Hadamard)).unwrap();
    for phase in [pi(0, 1), pi(1, 4), pi(-1, 2)] {
        let g = eval(&zx_generator(ZxGenerator::Green { m: 1, n: 2, phase })).unwrap();
        let want = h.then(&g).unwrap().then(&h.kron(&h)).unwrap();
        let red = eval(&zx_generator(ZxGenerator::Red { m: 1, n: 2, phase })).unwrap();
        assert_eq!(red, want);
    }
}

#[test]
fn boolean_gates() {
    let cases = [
        (Gate::And, classical(2, 1, |b| vec![b[0] && b[1]])),
        (Gate::Not, classical(1, 1, |b| vec![!b[0]])),
        (Gate::Xor, classical(2, 1, |b| vec![b[0] ^ b[1]])),
        (Gate::Toffoli, classical(3, 3, |b| vec![b[0], b[1], b[2] ^ (b[0] && b[1])])),
    ];
    for (g, want) in cases {
        assert_eq!(eval(&logic_gate(g).unwrap()).unwrap(), want, "{g}");
    }
}

#[test]
fn and_truth_table_rows() {
    let t = eval(&logic_gate(Gate::And).unwrap()).unwrap();
    assert_eq!(t.entries(), ints(&[1, 1, 1, 0, 0, 0, 0, 1]).as_slice());
    // two generators plus the scalar box
    assert_eq!(logic_gate(Gate::And).unwrap().num_vertices(), 3);
}

#[test]
fn controlled_z_gates() {
    for n in 1..=4 {
        let want = diagonal(n, |b| Scalar::int(if b.iter().all(|&x| x) { -1 } else { 1 }));
        assert_eq!(eval(&logic_gate(Gate::Cnz(n)).unwrap()).unwrap(), want, "CNZ({n})");
    }
    assert_eq!(eval(&logic_gate(Gate::Ccz).unwrap()).unwrap(), eval(&logic_gate(Gate::Cnz(3)).unwrap()).unwrap());
}

#[test]
fn gates_normalise_to_their_truth_tables() {
    for g in [Gate::And, Gate::Not, Gate::Xor, Gate::Ccz, Gate::Toffoli] {
        let d = logic_gate(g).unwrap();
        let (nf, _) = normalize(&d).unwrap();
        assert_eq!(nf.coeffs(), eval(&d).unwrap().bend_to_state().entries(), "{g}");
        assert!(nf.coeffs().iter().all(|c| c.is_zero() || c.is_one() || *c == Scalar::int(-1)));
    }
}

fn brute_signs(n: usize, edges: &[Vec<usize>]) -> Vec<Scalar> {
    (0..1usize << n)
        .map(|x| {
            let odd = edges.iter().filter(|e| e.iter().all(|&v| bit(x, n, v))).count() % 2 == 1;
            Scalar::int(if odd { -1 } else { 1 })
        })
        .collect()
}

/// Every nonempty subset of `0..n`, as sorted lists.
fn subsets(n: usize) -> Vec<Vec<usize>> {
    (1..1usize << n).map(|s| (0..n).filter(|&v| s >> v & 1 == 1).collect()).collect()
}

#[test]
fn hypergraph_examples() {
    let cz = hypergraph_state(&Hypergraph::new(2, [vec![0, 1]]).unwrap());
    assert_eq!(eval(&cz).unwrap().entries(), ints(&[1, 1, 1, -1]).as_slice());
    let plus = hypergraph_state(&Hypergraph::new(1, []).unwrap());
    assert_eq!(eval(&plus).unwrap().entries(), ints(&[1, 1]).as_slice());
    let edges = [vec![0, 1], vec![0, 1, 2]];
    let h = hypergraph_state(&Hypergraph::new(3, edges.clone()).unwrap());
    assert_eq!(eval(&h).unwrap().entries(), brute_signs(3, &edges).as_slice());
}

#[test]
fn all_hypergraphs_on_three_vertices() {
    for n in 1..=3 {
        let all = subsets(n);
        for mask in 0..1usize << all.len() {
            let edges: Vec<Vec<usize>> =
                all.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, e)| e.clone()).collect();
            let d = hypergraph_state(&Hypergraph::new(n, edges.clone()).unwrap());
            assert_eq!(eval(&d).unwrap().entries(), brute_signs(n, &edges).as_slice(), "{edges:?}");
        }
    }
}

#[test]
fn hypergraph_rejects_bad_edges() {
    assert!(Hypergraph::new(2, [vec![0, 2]]).is_err());
    assert!(Hypergraph::new(2, [vec![]]).is_err());
    assert!(Hypergraph::new(2, [vec![0, 1], vec![1, 0]]).is_err());
}

/// `ω^k` for `ω = exp(iπ/2^m)`.
fn omega_pow(m: u32, k: usize) -> Scalar {
    Scalar::omega(m).unwrap().pow(k as u32)
}

fn phi_value(terms: &[Vec<usize>], b: &[bool]) -> usize {
    terms.iter().filter(|t| t.iter().all(|&v| b[v])).count()
}

#[test]
fn phase_polynomial_example() {
    let terms = vec![vec![0, 1], vec![0, 1, 2], vec![2, 3]];
    for m in [1, 2] {
        let p = PhasePolynomial::parse("b1b2 + b1b2b3 + b3b4", m, None).unwrap();
        let t = eval(&phase_poly_unitary(&p).unwrap()).unwrap();
        assert_eq!(t, diagonal(4, |b| omega_pow(m, phi_value(&terms, b))), "m = {m}");
    }
}

#[test]
fn t_gate_and_identity() {
    let t = PhasePolynomial::parse("b1", 2, None).unwrap();
    let w = Scalar::omega(2).unwrap();
    assert_eq!(
        eval(&phase_poly_unitary(&t).unwrap()).unwrap(),
        diagonal(1, |b| if b[0] { w.clone() } else { Scalar::one() })
    );
    let empty = PhasePolynomial::parse("", 1, Some(2)).unwrap();
    assert_eq!(eval(&phase_poly_unitary(&empty).unwrap()).unwrap(), diagonal(2, |_| Scalar::one()));
}

#[test]
fn phase_order_beyond_the_field() {
    let p = PhasePolynomial::parse("b1", 5, None).unwrap();
    assert!(matches!(phase_poly_unitary(&p), Err(zh_core::Error::UnrepresentableLabel { .. })));
    let d = phase_poly_unitary_with(&p, Exactness::AllowApprox).unwrap();
    let t = eval(&d).unwrap();
    let w = std::f64::consts::PI / 32.0;
    assert!(t.get(1, 1).eq_tol(&Scalar::approx(w.cos(), w.sin()), 1e-12));
}

#[test]
fn local_complementation_examples() {
    let triangle = Hypergraph::new(3, [vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
    let r = verify_hyper_lc_instance(&triangle, 0).unwrap();
    assert!(r.holds);
    assert_eq!(r.toggled, vec![vec![1, 2]]);
    let lonely = Hypergraph::new(3, [vec![1, 2]]).unwrap();
    let r = verify_hyper_lc_instance(&lonely, 0).unwrap();
    assert!(r.holds && r.toggled.is_empty());
    let hyper = Hypergraph::new(4, [vec![0, 1, 2], vec![0, 3]]).unwrap();
    let r = verify_hyper_lc_instance(&hyper, 0).unwrap();
    assert!(r.holds);
    assert_eq!(r.toggled, vec![vec![1, 2, 3]]);
    assert!(verify_hyper_lc_instance(&hyper, 4).is_err());
}

fn hypergraph_strategy() -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
    (1usize..=4).prop_flat_map(|n| {
        let all = subsets(n);
        let k = all.len();
        (Just(n), proptest::collection::vec(any::<bool>(), k))
            .prop_map(move |(n, pick)| (n, all.iter().zip(pick).filter(|(_, p)| *p).map(|(e, _)| e.clone()).collect()))
    })
}

fn poly_strategy() -> impl Strategy<Value = (usize, Vec<Vec<usize>>, u32)> {
    (hypergraph_strategy(), 1u32..=2).prop_map(|((n, t), m)| (n, t, m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hypergraph_signs((n, edges) in hypergraph_strategy()) {
        let d = hypergraph_state(&Hypergraph::new(n, edges.clone()).unwrap());
        let got = eval(&d).unwrap().into_entries();
        prop_assert_eq!(got, brute_signs(n, &edges));
    }

    #[test]
    fn local_complementation_holds((n, edges) in hypergraph_strategy(), v in 0usize..4) {
        let h = Hypergraph::new(n, edges).unwrap();
        let r = verify_hyper_lc_instance(&h, v % n).unwrap();
        prop_assert!(r.holds);
    }

    #[test]
    fn phase_polynomials_are_diagonal_roots_of_unity((n, terms, m) in poly_strategy()) {
        let p = PhasePolynomial::new(n, terms.clone(), m).unwrap();
        let t = eval(&phase_poly_unitary(&p).unwrap()).unwrap();
        prop_assert_eq!(t, diagonal(n, |b| omega_pow(m, phi_value(&terms, b))));
    }

    #[test]
    fn phase_polynomials_compose_by_adding_exponents(
        (n, t1, m) in poly_strategy(),
        pick in proptest::collection::vec(any::<bool>(), 15),
    ) {
        let t2: Vec<Vec<usize>> = subsets(n).into_iter().zip(pick).filter(|(_, p)| *p).map(|(e, _)| e).collect();
        let u1 = phase_poly_unitary(&PhasePolynomial::new(n, t1.clone(), m).unwrap()).unwrap();
        let u2 = phase_poly_unitary(&PhasePolynomial::new(n, t2.clone(), m).unwrap()).unwrap();
        let both = eval(&u1.compose(&u2).unwrap()).unwrap();
        let want = diagonal(n, |b| omega_pow(m, phi_value(&t1, b) + phi_value(&t2, b)));
        prop_assert!(tensor_equal(&both, &want, false).unwrap());
    }
}
