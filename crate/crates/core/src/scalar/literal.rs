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

//! Text literals for scalars.
//!
//! Grammar: sums and products of integers, decimals, fractions `p/q`, `i`,
//! `w[m]` (= exp(iπ/2^m)), `sqrt2`, parenthesised groups and `^` powers.
//! Approximate values are written `~(re,im)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{degree, rational_is_negative, Cyclo, Scalar};
use crate::error::{Error, Result};

pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing characters in scalar literal"));
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(1, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.power()?;
            } else if self.eat(b'/') {
                let d = self.power()?;
                acc = acc.div(&d).map_err(|_| self.err("division by zero in literal"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Scalar> {
        if self.eat(b'-') {
            return Ok(-self.power()?);
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.uint()?;
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().map_err(|_| self.err("integer out of range"))
    }

    fn float(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len()
            && (self.s[self.pos].is_ascii_alphanumeric() || b"+-.".contains(&self.s[self.pos]))
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(1, start + 1, "bad floating-point number"))
    }

    fn atom(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(b'~') => {
                self.pos += 1;
                self.expect(b'(')?;
                let re = self.float()?;
                self.expect(b',')?;
                let im = self.float()?;
                self.expect(b')')?;
                Ok(Scalar::approx(re, im))
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(b'i') => {
                self.pos += 1;
                Ok(Scalar::i())
            }
            Some(b'w') => {
                self.pos += 1;
                self.expect(b'[')?;
                let m = self.uint()?;
                self.expect(b']')?;
                Scalar::omega(m as u32)
            }
            Some(b's') if self.s[self.pos..].starts_with(b"sqrt2") => {
                self.pos += 5;
                Scalar::sqrt2()
            }
            _ => Err(self.err("expected a scalar")),
        }
    }

    fn number(&mut self) -> Result<Scalar> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let int_part: BigInt = std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap();
        let mut value = BigRational::from_integer(int_part);
        if self.pos < self.s.len() && self.s[self.pos] == b'.' {
            self.pos += 1;
            let fstart = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if fstart == self.pos {
                return Err(self.err("expected digits after '.'"));
            }
            let digits = &self.s[fstart..self.pos];
            let num: BigInt = std::str::from_utf8(digits).unwrap().parse().unwrap();
            let den = num_traits::pow(BigInt::from(10), digits.len());
            value += BigRational::new(num, den);
        }
        Ok(Scalar::rational(value))
    }
}

fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn format_exact(c: &Cyclo) -> String {
    if c.is_zero() {
        return "0".into();
    }
    let n = degree(c.order());
    let mut out = String::new();
    for (j, q) in c.coeffs().iter().enumerate() {
        if q.is_zero() {
            continue;
        }
        let base = match (c.order(), j) {
            (_, 0) => String::new(),
            (2, _) => "i".to_string(),
            (k, 1) => format!("w[{}]", k - 1),
            (k, j) => format!("w[{}]^{}", k - 1, j),
        };
        debug_assert!(j < n);
        let neg = rational_is_negative(q);
        let mag = q.abs();
        let body = if base.is_empty() {
            format_rational(&mag)
        } else if mag.is_one() {
            base
        } else {
            format!("{}*{}", format_rational(&mag), base)
        };
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        out.push_str(&body);
    }
    out
}

pub(super) fn format_scalar(s: &Scalar) -> String {
    match s {
        Scalar::Exact(c) => format_exact(c),
        Scalar::Approx(z) => format!("~({:?},{:?})", z.re, z.im),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_literals() {
        assert_eq!(parse_scalar("-1").unwrap(), Scalar::int(-1));
        assert_eq!(parse_scalar("1/2").unwrap(), Scalar::frac(1, 2));
        assert_eq!(parse_scalar("0.25").unwrap(), Scalar::frac(1, 4));
        assert_eq!(parse_scalar("(1+i)/2").unwrap(), Scalar::frac(1, 2) + Scalar::frac(1, 2) * Scalar::i());
        assert_eq!(parse_scalar("w[1]").unwrap(), Scalar::i());
        assert_eq!(parse_scalar("w[2]^2").unwrap(), Scalar::i());
        assert_eq!(parse_scalar("sqrt2/2 * sqrt2").unwrap(), Scalar::one());
        assert_eq!(parse_scalar("2*-i").unwrap(), Scalar::int(-2) * Scalar::i());
    }

    #[test]
    fn approx_literal() {
        let s = parse_scalar("~(0.5,-1e-3)").unwrap();
        assert!(!s.is_exact());
        assert_eq!(format_scalar(&s), "~(0.5,-0.001)");
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(Scalar::int(-1).to_string(), "-1");
        assert_eq!((Scalar::one() + Scalar::i()).to_string(), "1+i");
        assert_eq!(Scalar::frac(-1, 2).to_string(), "-1/2");
        let t = Scalar::omega(2).unwrap() * Scalar::frac(-3, 2);
        assert_eq!(t.to_string(), "-3/2*w[2]");
        assert_eq!(Scalar::sqrt2().unwrap().to_string(), "w[2]-w[2]^3");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_scalar("").is_err());
        assert!(parse_scalar("1+").is_err());
        assert!(parse_scalar("x").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("w[9]").is_err());
    }
}
