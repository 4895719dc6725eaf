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

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zh_core::diagram::{
    expand_derived, parse_diagram, print_diagram, random_diagram, to_dot, to_tikz, DerivedGenerator, RandomShape,
};
use zh_core::rewrite::{instantiate, Params, RuleId, RuleSchema};
use zh_core::semantics::{eval_with, EvalLimits};
use zh_core::{eval, tensor_equal, Diagram, End, Error, Kind, Scalar, Tensor};

fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::int(x)).collect()
}

fn same(a: &Tensor, b: &Tensor) -> bool {
    tensor_equal(a, b, false).unwrap()
}

fn small_shape() -> RandomShape {
    RandomShape { max_generators: 5, max_inner_wires: 5, ..RandomShape::default() }
}

fn random(seed: u64) -> Diagram {
    random_diagram(&mut ChaCha8Rng::seed_from_u64(seed), &small_shape())
}

/// A random diagram with exactly `m` inputs and `n` outputs.
fn random_with(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Diagram {
    let shape = RandomShape { max_boundary: m + n, ..small_shape() };
    loop {
        let d = random_diagram(rng, &shape);
        if d.n_inputs() == m && d.n_outputs() == n {
            return d;
        }
    }
}

/// The same diagram with fresh vertex ids, shuffled wires and swapped ends.
fn reencode(d: &Diagram, rng: &mut ChaCha8Rng) -> Diagram {
    let mut out = Diagram::new(d.n_inputs(), d.n_outputs());
    let mut vs: Vec<(usize, Kind)> = d.vertices().map(|(v, k)| (v, k.clone())).collect();
    vs.shuffle(rng);
    let rename = |v: usize| 1000 + 7 * v;
    for (v, k) in vs {
        out.insert_vertex(rename(v), k).unwrap();
    }
    let map = |e: End| match e {
        End::Vertex(v) => End::Vertex(rename(v)),
        e => e,
    };
    let mut ws: Vec<(End, End)> = d.wires().map(|(_, a, b)| (map(a), map(b))).collect();
    ws.shuffle(rng);
    for (a, b) in ws {
        if rng.gen_bool(0.5) {
            out.add_wire(a, b);
        } else {
            out.add_wire(b, a);
        }
    }
    out
}

#[test]
fn identity_composes_to_identity() {
    let id = Diagram::identity(1);
    let d = id.compose(&id).unwrap();
    assert_eq!((d.n_inputs(), d.n_outputs()), (1, 1));
    assert!(same(&eval(&d).unwrap(), &eval(&id).unwrap()));
}

#[test]
fn snake_is_identity() {
    let left = Diagram::identity(1).tensor(&Diagram::cup());
    let right = Diagram::cap().tensor(&Diagram::identity(1));
    let snake = left.compose(&right).unwrap();
    assert_eq!((snake.n_inputs(), snake.n_outputs()), (1, 1));
    assert!(same(&eval(&snake).unwrap(), &Tensor::from_entries(1, 1, ints(&[1, 0, 0, 1])).unwrap()));
}

#[test]
fn two_hadamard_boxes_give_twice_identity() {
    let h = Diagram::h_box(1, 1, Scalar::int(-1));
    let t = eval(&h.compose(&h).unwrap()).unwrap();
    assert!(same(&t, &Tensor::from_entries(1, 1, ints(&[2, 0, 0, 2])).unwrap()));
}

#[test]
fn compose_arity_mismatch() {
    let r = Diagram::z_spider(1, 2).compose(&Diagram::identity(1));
    assert!(matches!(r, Err(Error::BoundaryMismatch(_))));
}

#[test]
fn tensor_bookkeeping() {
    let d = Diagram::h_box(1, 2, Scalar::i());
    assert!(Diagram::empty().tensor(&d).structurally_equal(&d));
    let two = Diagram::z_spider(0, 1).tensor(&Diagram::z_spider(0, 1));
    assert_eq!((two.n_inputs(), two.n_outputs()), (0, 2));
    let scalars = Diagram::scalar(Scalar::int(3)).tensor(&Diagram::scalar(Scalar::frac(-1, 2)));
    assert_eq!(eval(&scalars).unwrap().entries(), &[Scalar::frac(-3, 2)]);
}

#[test]
fn bending() {
    let cup = eval(&Diagram::identity(1).bend_to_state()).unwrap();
    assert_eq!((cup.n_inputs(), cup.n_outputs()), (0, 2));
    assert_eq!(cup.entries(), ints(&[1, 0, 0, 1]).as_slice());
    let state = Diagram::h_box(0, 2, Scalar::int(5));
    assert!(state.bend_to_state().structurally_equal(&state));
}

#[test]
fn bent_and_gate_is_reshaped_truth_table() {
    let and = zh_core::encoders::logic_gate(zh_core::encoders::Gate::And).unwrap();
    let t = eval(&and.bend_to_state()).unwrap();
    assert_eq!(t.n_outputs(), 3);
    // Outputs of the bent state: input 1, input 0, output.
    let want: Vec<Scalar> = (0..8usize)
        .map(|x| {
            let (i1, i0, o) = (x >> 2 & 1, x >> 1 & 1, x & 1);
            Scalar::int(i64::from((i0 & i1) == o))
        })
        .collect();
    assert_eq!(t.entries(), want.as_slice());
}

#[test]
fn derived_generators() {
    let not = eval(&expand_derived(DerivedGenerator::Not)).unwrap();
    assert!(same(&not, &Tensor::from_entries(1, 1, ints(&[0, 1, 1, 0])).unwrap()));
    let xor = eval(&expand_derived(DerivedGenerator::GreySpider(2, 1))).unwrap();
    assert!(same(&xor, &Tensor::from_entries(2, 1, ints(&[1, 0, 0, 1, 0, 1, 1, 0])).unwrap()));
    let id = eval(&expand_derived(DerivedGenerator::GreySpider(1, 1))).unwrap();
    assert!(same(&id, &Tensor::from_entries(1, 1, ints(&[1, 0, 0, 1])).unwrap()));
    for d in [expand_derived(DerivedGenerator::Not), expand_derived(DerivedGenerator::GreySpider(3, 2))] {
        assert!(d.vertices().all(|(_, k)| matches!(k, Kind::Z | Kind::H(_))));
    }
}

#[test]
fn canonical_hash_examples() {
    let d = parse_diagram("z a\nh b 2\nh c\nwire in:0 a\nwire a b\nwire a c\nwire b c\nwire c out:0\n").unwrap();
    let renamed = parse_diagram("z q\nh p 2\nh r\nwire in:0 q\nwire q p\nwire q r\nwire p r\nwire r out:0\n").unwrap();
    let swapped = parse_diagram("z a\nh b 2\nh c\nwire a in:0\nwire b a\nwire c a\nwire c b\nwire out:0 c\n").unwrap();
    let relabelled =
        parse_diagram("z a\nh b 3\nh c\nwire in:0 a\nwire a b\nwire a c\nwire b c\nwire c out:0\n").unwrap();
    assert_eq!(d.canonical_hash(), renamed.canonical_hash());
    assert_eq!(d.canonical_hash(), swapped.canonical_hash());
    assert_ne!(d.canonical_hash(), relabelled.canonical_hash());
}

#[test]
fn generator_interpretations() {
    assert_eq!(eval(&Diagram::z_spider(1, 1)).unwrap().entries(), ints(&[1, 0, 0, 1]).as_slice());
    assert_eq!(eval(&Diagram::z_spider(0, 3)).unwrap().entries(), ints(&[1, 0, 0, 0, 0, 0, 0, 1]).as_slice());
    assert_eq!(eval(&Diagram::h_box(0, 2, Scalar::int(-1))).unwrap().entries(), ints(&[1, 1, 1, -1]).as_slice());
    assert_eq!(eval(&Diagram::cup()).unwrap().entries(), ints(&[1, 0, 0, 1]).as_slice());
    assert_eq!(eval(&Diagram::empty()).unwrap().entries(), &[Scalar::one()]);
    let h = eval(&Diagram::h_box(2, 1, Scalar::i())).unwrap();
    assert_eq!(*h.get(1, 3), Scalar::i());
    assert_eq!(*h.get(0, 3), Scalar::one());
}

#[test]
fn self_loops_are_traced() {
    let d = parse_diagram("z a\nwire in:0 a\nwire a out:0\nwire a a\n").unwrap();
    assert_eq!(eval(&d).unwrap().entries(), ints(&[1, 0, 0, 1]).as_slice());
    // Tr of a 2-ary H(a) box over both legs: 1 + a.
    let h = parse_diagram("h x 5\nwire x x\n").unwrap();
    assert_eq!(eval(&h).unwrap().entries(), &[Scalar::int(6)]);
}

#[test]
fn tensor_equality_modes() {
    let t = Tensor::state(ints(&[1, 1, 1, -1])).unwrap();
    let t2 = Tensor::state(ints(&[2, 2, 2, -2])).unwrap();
    assert!(tensor_equal(&t, &t, false).unwrap());
    assert!(!tensor_equal(&t, &t2, false).unwrap());
    assert!(tensor_equal(&t, &t2, true).unwrap());
    let other = Tensor::state(ints(&[1, 0])).unwrap();
    assert!(matches!(tensor_equal(&t, &other, false), Err(Error::ShapeMismatch(_))));
}

#[test]
fn bialgebra_sides_agree_at_two_two() {
    let rule = instantiate(&RuleSchema::new(RuleId::BA1, Params::mn(2, 2))).unwrap();
    assert!(same(&eval(&rule.lhs).unwrap(), &eval(&rule.rhs).unwrap()));
}

#[test]
fn size_limits() {
    assert!(matches!(eval(&Diagram::z_spider(0, 13)), Err(Error::TooLarge(_))));
    let limits = EvalLimits { max_boundary: 2, ..EvalLimits::default() };
    assert!(matches!(eval_with(&Diagram::z_spider(0, 3), limits), Err(Error::TooLarge(_))));
}

#[test]
fn approximate_labels_flag_the_tensor() {
    let t = eval(&Diagram::h_box(0, 1, Scalar::approx(0.3, 0.1))).unwrap();
    assert!(t.is_approx());
    assert!(!eval(&Diagram::h_box(0, 1, Scalar::i())).unwrap().is_approx());
}

#[test]
fn tensor_json_has_shape_and_row_major_entries() {
    let v = eval(&Diagram::h_box(1, 1, Scalar::frac(1, 2))).unwrap().to_json();
    assert_eq!(v["inputs"], 1);
    assert_eq!(v["outputs"], 1);
    assert_eq!(v["entries"], serde_json::json!(["1", "1", "1", "1/2"]));
}

#[test]
fn parser_rejects_dangling_and_duplicate_slots() {
    assert!(parse_diagram("outputs 2\nz a\nwire a out:0\n").is_err());
    assert!(parse_diagram("z a\nwire a out:0\nwire a out:0\n").is_err());
    assert!(parse_diagram("wire nowhere out:0\n").is_err());
    let e = parse_diagram("z a\nh b ???\n").unwrap_err();
    assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
}

#[test]
fn renderers_mention_every_generator() {
    let d = parse_diagram("z a\nh b 2\nwire a b\nwire a out:0\nwire b out:1\n").unwrap();
    let dot = to_dot(&d);
    let tikz = to_tikz(&d);
    assert!(dot.contains("graph") && dot.matches("--").count() >= 3, "{dot}");
    assert!(tikz.contains("\\begin{tikzpicture}") && tikz.contains("2"), "{tikz}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let d = random(seed);
        let back = parse_diagram(&print_diagram(&d)).unwrap();
        prop_assert!(back.structurally_equal(&d));
        prop_assert_eq!(back.canonical_hash(), d.canonical_hash());
    }

    #[test]
    fn unbend_inverts_bend(seed in any::<u64>()) {
        let d = random(seed);
        let back = d.bend_to_state().unbend(d.n_inputs()).unwrap();
        prop_assert!(back.structurally_equal(&d));
    }

    #[test]
    fn bending_reshapes_the_tensor(seed in any::<u64>()) {
        let d = random(seed);
        let t = eval(&d).unwrap();
        let s = eval(&d.bend_to_state()).unwrap();
        let (m, n) = (d.n_inputs(), d.n_outputs());
        for x in 0..1usize << (m + n) {
            let (rev_in, out) = (x >> n, x & ((1 << n) - 1));
            let inp = (0..m).fold(0, |acc, j| acc | ((rev_in >> j & 1) << (m - 1 - j)));
            prop_assert_eq!(&s.entries()[x], t.get(out, inp));
        }
    }

    #[test]
    fn compose_is_matrix_product(seed in any::<u64>(), m in 0usize..=2, k in 0usize..=2, n in 0usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d1, d2) = (random_with(&mut rng, m, k), random_with(&mut rng, k, n));
        let want = eval(&d1).unwrap().then(&eval(&d2).unwrap()).unwrap();
        let got = eval(&d1.compose(&d2).unwrap()).unwrap();
        prop_assert_eq!((got.n_inputs(), got.n_outputs()), (m, n));
        prop_assert!(same(&got, &want));
    }

    #[test]
    fn tensor_is_kronecker(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (d1, d2) = (random(s1), random(s2));
        let want = eval(&d1).unwrap().kron(&eval(&d2).unwrap());
        let got = eval(&d1.tensor(&d2)).unwrap();
        prop_assert_eq!(got.n_inputs(), d1.n_inputs() + d2.n_inputs());
        prop_assert_eq!(got.n_outputs(), d1.n_outputs() + d2.n_outputs());
        prop_assert!(same(&got, &want));
    }

    #[test]
    fn reencoding_preserves_hash_and_semantics(seed in any::<u64>()) {
        let d = random(seed);
        let e = reencode(&d, &mut ChaCha8Rng::seed_from_u64(seed ^ 0xabc));
        prop_assert_eq!(e.canonical_hash(), d.canonical_hash());
        prop_assert!(same(&eval(&e).unwrap(), &eval(&d).unwrap()));
    }
}
