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

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use zh_core::scalar::parse_scalar;
use zh_core::{Cyclo, Error, Scalar};

fn cyclo(coeffs: &[(i64, i64)]) -> Scalar {
    let c = coeffs.iter().map(|&(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q))).collect();
    Scalar::Exact(Cyclo::from_coeffs(c).unwrap())
}

fn exact() -> impl Strategy<Value = Scalar> {
    prop::collection::vec((-12i64..=12, 1i64..=8), 4).prop_map(|c| cyclo(&c))
}

fn nonzero() -> impl Strategy<Value = Scalar> {
    exact().prop_filter("nonzero", |x| !x.is_zero())
}

fn close(x: &Scalar, z: Complex64) -> bool {
    (x.to_complex() - z).norm() <= 1e-12 * z.norm().max(1.0)
}

#[test]
fn two_and_a_half_are_inverse() {
    let p = &Scalar::int(2) * &Scalar::frac(1, 2);
    assert!(p.is_exact());
    assert_eq!(p, Scalar::one());
}

#[test]
fn multiplicative_identity() {
    let x = cyclo(&[(3, 5), (-1, 2), (0, 1), (7, 3)]);
    assert_eq!(&x * &Scalar::one(), x);
}

#[test]
fn sqrt2_squared_is_two() {
    let r = Scalar::sqrt2().unwrap();
    let sq = &r * &r;
    assert!(sq.is_exact());
    assert_eq!(sq, Scalar::int(2));
    assert!((r.to_complex().re - std::f64::consts::SQRT_2).abs() < 1e-15);
}

#[test]
fn named_constants_are_exact() {
    let i = Scalar::i();
    assert_eq!(&i * &i, Scalar::int(-1));
    let w = Scalar::omega(2).unwrap();
    assert_eq!(w.pow(4), Scalar::int(-1));
    assert_eq!(w.pow(2), i);
    assert_eq!(Scalar::omega(1).unwrap(), i);
    assert_eq!(Scalar::omega(0).unwrap(), Scalar::int(-1));
    let z = w.to_complex();
    assert!((z - Complex64::from_polar(1.0, std::f64::consts::PI / 4.0)).norm() < 1e-15);
}

#[test]
fn inverse_of_zero_fails() {
    assert!(matches!(Scalar::zero().inv(), Err(Error::DivisionByZero)));
    assert!(matches!(Scalar::one().div(&Scalar::zero()), Err(Error::DivisionByZero)));
    assert!(matches!(Scalar::approx(0.0, 0.0).inv(), Err(Error::DivisionByZero)));
}

#[test]
fn omega_beyond_default_field_is_unrepresentable() {
    assert!(matches!(Scalar::omega(3), Err(Error::UnrepresentableLabel { m: 3, k: 3 })));
}

#[test]
fn mixed_arithmetic_degrades_to_approx() {
    let x = &Scalar::frac(1, 2) + &Scalar::approx(0.25, 0.0);
    assert!(!x.is_exact());
    assert_eq!(x, Scalar::frac(3, 4));
    assert_eq!(Scalar::approx(0.5 + 1e-11, 0.0), Scalar::frac(1, 2));
    assert_ne!(Scalar::approx(0.5 + 1e-6, 0.0), Scalar::frac(1, 2));
}

#[test]
fn literals() {
    let cases = [
        ("0", Scalar::zero()),
        ("-3/4", Scalar::frac(-3, 4)),
        ("i", Scalar::i()),
        ("-i", -Scalar::i()),
        ("sqrt2/2", Scalar::sqrt2().unwrap().half()),
        ("w[2]", Scalar::omega(2).unwrap()),
        ("~(0.5,-1)", Scalar::approx(0.5, -1.0)),
    ];
    for (text, want) in cases {
        assert_eq!(parse_scalar(text).unwrap(), want, "{text}");
    }
    assert!(parse_scalar("w[5]").is_err());
    assert!(parse_scalar("1/0").is_err());
    assert!(parse_scalar("banana").is_err());
}

#[test]
fn large_rationals_do_not_overflow() {
    let base = cyclo(&[(7, 3), (1, 1), (0, 1), (-2, 5)]);
    let mut x = base.clone();
    for _ in 0..6 {
        x = &x * &x;
    }
    assert_eq!(x, base.pow(64));
    assert!(x.as_exact().unwrap().coeffs().iter().any(|c| c.numer().bits() > 64));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms(x in exact(), y in exact(), z in exact()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x - &x, Scalar::zero());
        prop_assert_eq!(&x + &Scalar::zero(), x.clone());
    }

    #[test]
    fn inverses(x in nonzero(), y in nonzero()) {
        let xi = x.inv().unwrap();
        prop_assert!((&x * &xi).is_one());
        prop_assert_eq!(xi.inv().unwrap(), x.clone());
        prop_assert_eq!(x.div(&y).unwrap().div(&x).unwrap(), y.inv().unwrap());
    }

    #[test]
    fn products_agree_with_floats(x in exact(), y in exact()) {
        prop_assert!(close(&(&x * &y), x.to_complex() * y.to_complex()));
        prop_assert!(close(&(&x + &y), x.to_complex() + y.to_complex()));
        if !y.is_zero() {
            prop_assert!(close(&x.div(&y).unwrap(), x.to_complex() / y.to_complex()));
        }
    }

    #[test]
    fn approx_conversion_agrees(x in exact()) {
        prop_assert!(close(&x.to_approx(), x.to_complex()));
        prop_assert_eq!(x.to_approx(), x.clone());
    }

    #[test]
    fn equality_is_an_equivalence(x in exact(), y in exact()) {
        let x2 = &(&x + &y) - &y;
        prop_assert_eq!(&x, &x);
        prop_assert_eq!(&x2, &x);
        prop_assert_eq!(&x, &x2);
        prop_assert_eq!(x == y, y == x);
    }

    #[test]
    fn exact_literals_round_trip(x in exact()) {
        let text = x.to_string();
        let back = parse_scalar(&text).unwrap();
        prop_assert!(back.is_exact());
        prop_assert_eq!(back.as_exact(), x.as_exact(), "{}", text);
    }
}
