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

//! Exact cyclotomic scalars with an approximate complex fallback.
//!
//! Exact values live in `Q(ζ)` with `ζ = exp(iπ/N)`, `N = 2^(k-1)`, stored as
//! a rational polynomial in `ζ` reduced modulo `ζ^N + 1`. Every value is
//! kept at the smallest order `k ≥ 2` that holds it, so structural equality
//! is field equality. Values of different orders are lifted on demand.

mod literal;

pub use literal::parse_scalar;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default order: `Q(ζ_8)`, which holds `i`, `√2` and `exp(iπ/4)`.
pub const DEFAULT_FIELD_ORDER: u32 = 3;
/// Largest order accepted by [`set_field_order`].
pub const MAX_FIELD_ORDER: u32 = 12;
/// Tolerance used when comparing values that involve an approximate scalar.
pub const APPROX_TOL: f64 = 1e-9;

static FIELD_ORDER: AtomicU32 = AtomicU32::new(DEFAULT_FIELD_ORDER);

/// The configured field order `k`. Labels `w[m]` are accepted for `m ≤ k - 1`.
pub fn field_order() -> u32 {
    FIELD_ORDER.load(Ordering::Relaxed)
}

pub fn set_field_order(k: u32) -> Result<()> {
    if !(2..=MAX_FIELD_ORDER).contains(&k) {
        return Err(Error::BadParams(format!("field order must lie in 2..={MAX_FIELD_ORDER}, got {k}")));
    }
    FIELD_ORDER.store(k, Ordering::Relaxed);
    Ok(())
}

/// An element of the cyclotomic field `Q(exp(iπ/2^(order-1)))`.
#[derive(Clone, Debug, Eq)]
pub struct Cyclo {
    order: u32,
    coeffs: Vec<BigRational>,
}

// Coefficients are kept in lowest terms, so equality is structural; this
// skips the cross-multiplication `Ratio` does when comparing.
impl PartialEq for Cyclo {
    fn eq(&self, other: &Cyclo) -> bool {
        self.order == other.order
            && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.numer() == b.numer() && a.denom() == b.denom())
    }
}

impl std::hash::Hash for Cyclo {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.order.hash(state);
        for c in &self.coeffs {
            c.numer().hash(state);
            c.denom().hash(state);
        }
    }
}

fn degree(order: u32) -> usize {
    1usize << (order - 1)
}

impl Cyclo {
    pub fn rational(q: BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); 2];
        coeffs[0] = q;
        Cyclo { order: 2, coeffs }
    }

    pub fn from_int(v: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// `ζ^j` in the field of the given order.
    pub fn zeta_pow(order: u32, j: i64) -> Self {
        let order = order.max(2);
        let n = degree(order) as i64;
        let j = j.rem_euclid(2 * n);
        let mut coeffs = vec![BigRational::zero(); n as usize];
        if j < n {
            coeffs[j as usize] = BigRational::one();
        } else {
            coeffs[(j - n) as usize] = -BigRational::one();
        }
        Cyclo { order, coeffs }.normalize()
    }

    /// Build from raw coefficients; the length must be a power of two `≥ 2`.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Result<Self> {
        let len = coeffs.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::BadShape(len));
        }
        let order = len.trailing_zeros() + 1;
        Ok(Cyclo { order, coeffs }.normalize())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn normalize(mut self) -> Self {
        while self.order > 2 && self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero) {
            self.coeffs = self.coeffs.into_iter().step_by(2).collect();
            self.order -= 1;
        }
        self
    }

    fn lift(&self, order: u32) -> Vec<BigRational> {
        if order == self.order {
            return self.coeffs.clone();
        }
        let stride = 1usize << (order - self.order);
        let mut out = vec![BigRational::zero(); degree(order)];
        for (j, c) in self.coeffs.iter().enumerate() {
            out[j * stride] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(One::is_one)
    }

    pub fn add(&self, other: &Cyclo) -> Cyclo {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let order = self.order.max(other.order);
        let mut a = self.lift(order);
        let b = other.lift(order);
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        Cyclo { order, coeffs: a }.normalize()
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    fn scale(&self, q: &BigRational) -> Cyclo {
        if q.is_zero() {
            return Cyclo::rational(BigRational::zero());
        }
        if q.is_one() {
            return self.clone();
        }
        Cyclo { order: self.order, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn mul(&self, other: &Cyclo) -> Cyclo {
        if let Some(q) = self.as_rational() {
            return other.scale(q);
        }
        if let Some(q) = other.as_rational() {
            return self.scale(q);
        }
        let order = self.order.max(other.order);
        let n = degree(order);
        let a = self.lift(order);
        let b = other.lift(order);
        let mut out = vec![BigRational::zero(); n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let p = x * y;
                if i + j < n {
                    out[i + j] += p;
                } else {
                    out[i + j - n] -= p;
                }
            }
        }
        Cyclo { order, coeffs: out }.normalize()
    }

    /// Multiplicative inverse, found by solving `self · y = 1` over `Q`.
    pub fn inv(&self) -> Result<Cyclo> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Cyclo::rational(q.recip()));
        }
        let n = degree(self.order);
        // Column j of the multiplication matrix holds self · ζ^j.
        let mut m = vec![vec![BigRational::zero(); n + 1]; n];
        for j in 0..n {
            for (i, c) in self.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if i + j < n {
                    m[i + j][j] += c;
                } else {
                    m[i + j - n][j] -= c;
                }
            }
        }
        m[0][n] = BigRational::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::DivisionByZero)?;
            m.swap(col, pivot);
            let p = m[col][col].clone();
            for x in m[col].iter_mut() {
                *x /= &p;
            }
            let pivot_row = m[col].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != col && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                        *x -= p * &f;
                    }
                }
            }
        }
        let coeffs = m.into_iter().map(|row| row[n].clone()).collect();
        Ok(Cyclo { order: self.order, coeffs }.normalize())
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = degree(self.order) as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| {
                let theta = std::f64::consts::PI * j as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), theta)
            })
            .sum()
    }
}

/// H-box labels, tensor entries and normal-form coefficients.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Cyclo),
    Approx(Complex64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Cyclo::from_int(0))
    }

    pub fn one() -> Self {
        Scalar::Exact(Cyclo::from_int(1))
    }

    pub fn int(v: i64) -> Self {
        Scalar::Exact(Cyclo::from_int(v))
    }

    /// `p/q`; panics if `q == 0`.
    pub fn frac(p: i64, q: i64) -> Self {
        Scalar::Exact(Cyclo::rational(BigRational::new(p.into(), q.into())))
    }

    pub fn rational(q: BigRational) -> Self {
        Scalar::Exact(Cyclo::rational(q))
    }

    pub fn i() -> Self {
        Scalar::Exact(Cyclo::zeta_pow(2, 1))
    }

    /// `ω = exp(iπ/2^m)`, checked against the configured field order.
    pub fn omega(m: u32) -> Result<Self> {
        let k = field_order();
        if m + 1 > k {
            return Err(Error::UnrepresentableLabel { m, k });
        }
        Ok(Self::omega_unchecked(m))
    }

    pub(crate) fn omega_unchecked(m: u32) -> Self {
        match m {
            0 => Scalar::int(-1),
            _ => Scalar::Exact(Cyclo::zeta_pow(m + 1, 1)),
        }
    }

    /// `√2 = ζ_8 + ζ_8^{-1}`; needs field order at least 3.
    pub fn sqrt2() -> Result<Self> {
        let k = field_order();
        if k < 3 {
            return Err(Error::UnrepresentableLabel { m: 2, k });
        }
        Ok(Scalar::Exact(Cyclo::zeta_pow(3, 1).add(&Cyclo::zeta_pow(3, -1))))
    }

    pub fn approx(re: f64, im: f64) -> Self {
        Scalar::Approx(Complex64::new(re, im))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Cyclo> {
        match self {
            Scalar::Exact(c) => Some(c),
            Scalar::Approx(_) => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(c) => c.to_complex(),
            Scalar::Approx(z) => *z,
        }
    }

    pub fn to_approx(&self) -> Scalar {
        Scalar::Approx(self.to_complex())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(c) => c.is_zero(),
            Scalar::Approx(z) => z.norm() <= APPROX_TOL,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Exact(c) => c.is_one(),
            Scalar::Approx(z) => (z - 1.0).norm() <= APPROX_TOL,
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Exact(c) => c.inv().map(Scalar::Exact),
            Scalar::Approx(z) => {
                if z.norm() == 0.0 {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Approx(z.inv()))
                }
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `x / 2`, exactly when possible.
    pub fn half(&self) -> Scalar {
        self * &Scalar::frac(1, 2)
    }

    /// Equality within `tol` when either side is approximate, exact otherwise.
    pub fn eq_tol(&self, other: &Scalar, tol: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => (self.to_complex() - other.to_complex()).norm() <= tol,
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        self.eq_tol(other, APPROX_TOL)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.add(b)),
            _ => Scalar::Approx(self.to_complex() + rhs.to_complex()),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.mul(b)),
            _ => Scalar::Approx(self.to_complex() * rhs.to_complex()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(a.neg()),
            Scalar::Approx(z) => Scalar::Approx(-z),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Mul, mul);
forward_owned!(Sub, sub);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&literal::format_scalar(self))
    }
}

impl std::str::FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Scalar> {
        parse_scalar(s)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let text = String::deserialize(d)?;
        parse_scalar(&text).map_err(serde::de::Error::custom)
    }
}

fn _assert_send_sync() {
    fn check<T: Send + Sync>() {}
    check::<Scalar>();
}

pub(crate) fn rational_is_negative(q: &BigRational) -> bool {
    q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx_eq(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn two_times_half_is_one() {
        assert_eq!(Scalar::int(2) * Scalar::frac(1, 2), Scalar::one());
        assert!((Scalar::int(2) * Scalar::frac(1, 2)).is_one());
    }

    #[test]
    fn one_is_multiplicative_identity() {
        let x = Scalar::frac(3, 7) + Scalar::i();
        assert_eq!(&x * &Scalar::one(), x);
    }

    #[test]
    fn sqrt2_squared_is_two() {
        let r = Scalar::sqrt2().unwrap();
        let sq = &r * &r;
        // float oracle for the ζ_8 product
        assert!(approx_eq(r.to_complex() * r.to_complex(), Complex64::new(2.0, 0.0)));
        assert!(matches!(&sq, Scalar::Exact(c) if c.as_rational().is_some()));
        assert_eq!(sq, Scalar::int(2));
    }

    #[test]
    fn omega_values() {
        assert_eq!(Scalar::omega(0).unwrap(), Scalar::int(-1));
        assert_eq!(Scalar::omega(1).unwrap(), Scalar::i());
        let w = Scalar::omega(2).unwrap();
        assert!(approx_eq(w.to_complex(), Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)));
        assert_eq!(w.pow(8), Scalar::one());
        assert_eq!(w.pow(4), Scalar::int(-1));
    }

    #[test]
    fn omega_beyond_field_is_rejected() {
        assert!(matches!(Scalar::omega(field_order()), Err(Error::UnrepresentableLabel { .. })));
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(Scalar::zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(Scalar::approx(0.0, 0.0).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn inverse_of_cyclotomic_element() {
        let x = Scalar::int(1) + Scalar::omega(2).unwrap() * Scalar::int(3);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert_eq!(y.inv().unwrap(), x);
    }

    #[test]
    fn mixed_arithmetic_degrades_to_approx() {
        let x = Scalar::approx(0.5, 0.0) + Scalar::frac(1, 2);
        assert!(!x.is_exact());
        assert_eq!(x, Scalar::one());
    }

    #[test]
    fn different_orders_compare_equal() {
        let i8 = Scalar::omega(2).unwrap().pow(2);
        assert_eq!(i8, Scalar::i());
        assert!(matches!(i8, Scalar::Exact(ref c) if c.order() == 2));
    }
}
