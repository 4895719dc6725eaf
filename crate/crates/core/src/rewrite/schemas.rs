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

//! Concrete left and right sides for every schema.

use super::{Params, Rule, RuleId};
use crate::diagram::{add_grey, add_not, add_not_bare, Diagram, End, NotGadget, VertexId};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn slot(i: usize) -> End {
    End::Output(i)
}

fn v(x: VertexId) -> End {
    End::Vertex(x)
}

fn bit(b: usize, j: usize, n: usize) -> bool {
    (b >> (n - 1 - j)) & 1 == 1
}

struct Side {
    d: Diagram,
    halves: Vec<VertexId>,
}

impl Side {
    fn new(slots: usize) -> Side {
        Side { d: Diagram::new(0, slots), halves: Vec::new() }
    }

    fn z(&mut self) -> VertexId {
        self.d.add_z()
    }

    fn h(&mut self, a: Scalar) -> VertexId {
        self.d.add_h(a)
    }

    fn hm(&mut self) -> VertexId {
        self.d.add_h(Scalar::int(-1))
    }

    fn w(&mut self, a: End, b: End) {
        self.d.add_wire(a, b);
    }

    fn not(&mut self, a: End, b: End) -> NotGadget {
        let g = add_not(&mut self.d, a, b);
        self.halves.extend(g.scalar);
        g
    }

    fn not_bare(&mut self, a: End, b: End) -> NotGadget {
        add_not_bare(&mut self.d, a, b)
    }

    /// `a` and `b` joined directly, or through a NOT when `negated`.
    fn link(&mut self, a: End, b: End, negated: bool) {
        if negated {
            self.not(a, b);
        } else {
            self.w(a, b);
        }
    }

    fn scalar(&mut self, c: Scalar) -> VertexId {
        self.d.add_h(c)
    }
}

fn rule(lhs: Side, rhs: Side, keep: Vec<(VertexId, VertexId)>) -> Rule {
    Rule { lhs: lhs.d, rhs: rhs.d, keep, lhs_halves: lhs.halves, rhs_halves: rhs.halves }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::BadParams(msg.into())
}

/// Vertices of a normal-form picture built by [`nf_picture`].
#[derive(Clone, Debug)]
pub(crate) struct NfPicture {
    pub spiders: Vec<VertexId>,
    /// Indexed by bitstring, output 0 most significant.
    pub boxes: Vec<VertexId>,
    pub halves: Vec<VertexId>,
}

/// Add the normal-form picture for `labels` to `d`. Output spider `j` gets
/// an external leg to `ext(j)` when that is `Some`.
pub(crate) fn nf_picture(
    d: &mut Diagram,
    n: usize,
    labels: &[Scalar],
    ext: &dyn Fn(usize) -> Option<End>,
) -> NfPicture {
    assert_eq!(labels.len(), 1 << n);
    let spiders: Vec<VertexId> = (0..n).map(|_| d.add_z()).collect();
    for (j, &s) in spiders.iter().enumerate() {
        if let Some(e) = ext(j) {
            d.add_wire(v(s), e);
        }
    }
    let mut boxes = Vec::with_capacity(labels.len());
    let mut halves = Vec::new();
    for (b, a) in labels.iter().enumerate() {
        let h = d.add_h(a.clone());
        for (j, &s) in spiders.iter().enumerate() {
            if bit(b, j, n) {
                d.add_wire(v(h), v(s));
            } else {
                halves.extend(add_not(d, v(h), v(s)).scalar);
            }
        }
        boxes.push(h);
    }
    NfPicture { spiders, boxes, halves }
}

pub(super) fn build(id: RuleId, p: &Params) -> Result<Rule> {
    match id {
        RuleId::ZS1 => Ok(zs1(p.m, p.n)),
        RuleId::ZS2 => Ok(zs2()),
        RuleId::HS1 => Ok(hs1(p.m, p.n, &p.a)),
        RuleId::HS2 => Ok(hs2()),
        RuleId::BA1 => Ok(ba1(p.m, p.n)),
        RuleId::BA2 => Ok(ba2(p.m, p.n)),
        RuleId::M => Ok(mbang(1, &p.a, &p.b)),
        RuleId::Mbang => Ok(mbang(p.k, &p.a, &p.b)),
        RuleId::U => Ok(ubang(1)),
        RuleId::Ubang => Ok(ubang(p.k)),
        RuleId::A => Ok(abang(1, &p.a, &p.b)),
        RuleId::Abang => Ok(abang(p.k, &p.a, &p.b)),
        RuleId::I => Ok(ibang(0, &p.a)),
        RuleId::Ibang => Ok(ibang(p.k, &p.a)),
        RuleId::O => Ok(ortho(p.m, p.n, &p.a, &p.b)),
        RuleId::XCOPY => Ok(iotacopy(&[false], p.k)),
        RuleId::IOTACOPY => Ok(iotacopy(&p.bits, p.k)),
        RuleId::CONViota => Ok(conv_iota(&p.bits, &p.a, &p.b)),
        RuleId::HALFx2 => Ok(half_twice()),
        RuleId::DISC4 => {
            if p.labels.len() != 4 {
                return Err(bad(format!("DISC4 takes 4 labels, got {}", p.labels.len())));
            }
            Ok(disconnect(2, &p.labels))
        }
        RuleId::DISCONNECT => {
            if p.n == 0 {
                return Err(bad("DISCONNECT needs n ≥ 1"));
            }
            if p.n > 16 || p.labels.len() != 1 << p.n {
                return Err(bad(format!("DISCONNECT with n={} takes 2^n labels, got {}", p.n, p.labels.len())));
            }
            Ok(disconnect(p.n, &p.labels))
        }
        RuleId::DISCSTEP => {
            let arms = p.labels.len();
            if arms == 0 || p.flags.len() != arms || p.bits.len() != arms {
                return Err(bad("DISCSTEP needs one flag, one bit and one label per arm"));
            }
            Ok(disc_step(p.k, &p.flags, &p.bits, &p.labels))
        }
    }
}

/// `Z_{m+1}` joined to `Z_{n+1}` fuses to `Z_{m+n}`.
fn zs1(m: usize, n: usize) -> Rule {
    let mut l = Side::new(m + n);
    let (z0, z1) = (l.z(), l.z());
    l.w(v(z0), v(z1));
    for i in 0..m {
        l.w(v(z0), slot(i));
    }
    for j in 0..n {
        l.w(v(z1), slot(m + j));
    }
    let mut r = Side::new(m + n);
    let z = r.z();
    for i in 0..m + n {
        r.w(v(z), slot(i));
    }
    rule(l, r, vec![(z0, z)])
}

fn zs2() -> Rule {
    let mut l = Side::new(2);
    let z = l.z();
    l.w(v(z), slot(0));
    l.w(v(z), slot(1));
    let mut r = Side::new(2);
    r.w(slot(0), slot(1));
    rule(l, r, vec![])
}

/// `H_{m+1}(a) - H_2 - H_{n+1}` with a scalar `1/2` fuses to `H_{m+n}(a)`.
fn hs1(m: usize, n: usize, a: &Scalar) -> Rule {
    let mut l = Side::new(m + n);
    let h1 = l.h(a.clone());
    let mid = l.hm();
    let h2 = l.hm();
    l.w(v(h1), v(mid));
    l.w(v(mid), v(h2));
    for i in 0..m {
        l.w(v(h1), slot(i));
    }
    for j in 0..n {
        l.w(v(h2), slot(m + j));
    }
    l.scalar(Scalar::frac(1, 2));
    let mut r = Side::new(m + n);
    let h = r.h(a.clone());
    for i in 0..m + n {
        r.w(v(h), slot(i));
    }
    rule(l, r, vec![(h1, h)])
}

fn hs2() -> Rule {
    let mut l = Side::new(2);
    let (h1, h2) = (l.hm(), l.hm());
    l.w(slot(0), v(h1));
    l.w(v(h1), v(h2));
    l.w(v(h2), slot(1));
    l.scalar(Scalar::frac(1, 2));
    let mut r = Side::new(2);
    r.w(slot(0), slot(1));
    rule(l, r, vec![])
}

/// Z-spider with `m` slots against a grey spider with `n` slots.
fn ba1(m: usize, n: usize) -> Rule {
    let mut l = Side::new(m + n);
    let z = l.z();
    for i in 0..m {
        l.w(v(z), slot(i));
    }
    let mut legs = vec![v(z)];
    legs.extend((0..n).map(|j| slot(m + j)));
    add_grey(&mut l.d, &legs);
    let mut r = Side::new(m + n);
    let zs: Vec<VertexId> = (0..n).map(|_| r.z()).collect();
    for (j, &z) in zs.iter().enumerate() {
        r.w(v(z), slot(m + j));
    }
    for i in 0..m {
        let mut legs = vec![slot(i)];
        legs.extend(zs.iter().map(|&z| v(z)));
        add_grey(&mut r.d, &legs);
    }
    rule(l, r, vec![])
}

/// `H_{m+1}` with `m` slots against a grey spider with `n` slots.
fn ba2(m: usize, n: usize) -> Rule {
    let mut l = Side::new(m + n);
    let h = l.hm();
    for i in 0..m {
        l.w(v(h), slot(i));
    }
    let mut legs = vec![v(h)];
    legs.extend((0..n).map(|j| slot(m + j)));
    add_grey(&mut l.d, &legs);
    let mut r = Side::new(m + n);
    let zs: Vec<VertexId> = (0..m).map(|_| r.z()).collect();
    for (i, &z) in zs.iter().enumerate() {
        r.w(v(z), slot(i));
    }
    for j in 0..n {
        let h = r.hm();
        r.w(v(h), slot(m + j));
        for &z in &zs {
            r.w(v(z), v(h));
        }
    }
    rule(l, r, vec![])
}

/// `H_k(a)` and `H_k(b)` sharing `k` spiders become `H_k(ab)`.
fn mbang(k: usize, a: &Scalar, b: &Scalar) -> Rule {
    let mut l = Side::new(k);
    let ts: Vec<VertexId> = (0..k).map(|_| l.z()).collect();
    let (h1, h2) = (l.h(a.clone()), l.h(b.clone()));
    for (j, &t) in ts.iter().enumerate() {
        l.w(v(t), slot(j));
        l.w(v(t), v(h1));
        l.w(v(t), v(h2));
    }
    let mut r = Side::new(k);
    let h = r.h(a * b);
    for j in 0..k {
        r.w(v(h), slot(j));
    }
    rule(l, r, vec![(h1, h)])
}

/// `H_k(1)` splits into `k` unit spiders.
fn ubang(k: usize) -> Rule {
    let mut l = Side::new(k);
    let h = l.h(Scalar::one());
    for j in 0..k {
        l.w(v(h), slot(j));
    }
    let mut r = Side::new(k);
    for j in 0..k {
        let z = r.z();
        r.w(v(z), slot(j));
    }
    rule(l, r, vec![])
}

/// `H_{k+1}(a)` and `H_{k+1}(b)` sharing `k` spiders, their last legs joined
/// through a NOT, average to `H_k((a+b)/2)` times `2`.
fn abang(k: usize, a: &Scalar, b: &Scalar) -> Rule {
    let mut l = Side::new(k);
    let ts: Vec<VertexId> = (0..k).map(|_| l.z()).collect();
    let (h0, h1) = (l.h(a.clone()), l.h(b.clone()));
    for (j, &t) in ts.iter().enumerate() {
        l.w(v(t), slot(j));
        l.w(v(t), v(h0));
        l.w(v(t), v(h1));
    }
    l.not(v(h0), v(h1));
    let mut r = Side::new(k);
    let h = r.h((a + b).half());
    for j in 0..k {
        r.w(v(h), slot(j));
    }
    r.scalar(Scalar::int(2));
    rule(l, r, vec![(h0, h)])
}

/// `H_k(a)` next to a unit spider gains a leg: two copies of
/// `H_{k+1}(a)` on the shared spiders, one of them reached through a NOT.
fn ibang(k: usize, a: &Scalar) -> Rule {
    let mut l = Side::new(k + 1);
    let h = l.h(a.clone());
    for j in 0..k {
        l.w(v(h), slot(j));
    }
    let dot = l.z();
    l.w(v(dot), slot(k));
    let mut r = Side::new(k + 1);
    let ts: Vec<VertexId> = (0..k).map(|_| r.z()).collect();
    let d = r.z();
    let (b0, b1) = (r.h(a.clone()), r.h(a.clone()));
    for (j, &t) in ts.iter().enumerate() {
        r.w(v(t), slot(j));
        r.w(v(t), v(b0));
        r.w(v(t), v(b1));
    }
    r.w(v(d), slot(k));
    r.w(v(d), v(b1));
    r.not(v(d), v(b0));
    rule(l, r, vec![(h, b1), (dot, d)])
}

/// Two H-boxes tied to one spider, one through a NOT, need not also be
/// tied to each other.
fn ortho(m: usize, n: usize, a: &Scalar, b: &Scalar) -> Rule {
    let build = |cut: bool| {
        let mut s = Side::new(1 + m + n);
        let x = s.z();
        s.w(v(x), slot(0));
        let ha = s.h(a.clone());
        let hb = s.h(b.clone());
        let g = s.not_bare(v(x), v(ha));
        s.w(v(x), v(hb));
        for i in 0..m {
            s.w(v(ha), slot(1 + i));
        }
        for j in 0..n {
            s.w(v(hb), slot(1 + m + j));
        }
        if cut {
            let (da, db) = (s.z(), s.z());
            s.w(v(ha), v(da));
            s.w(v(hb), v(db));
            s.scalar(Scalar::frac(1, 2));
        } else {
            s.w(v(ha), v(hb));
        }
        (s, [x, ha, hb, g.near, g.centre, g.phase, g.far])
    };
    let (l, lv) = build(false);
    let (r, rv) = build(true);
    rule(l, r, lv.into_iter().zip(rv).collect())
}

/// Spider `j` has an input slot and `fanout` output slots; when `bits[j]`
/// is 0 a NOT on the input moves onto every output.
fn iotacopy(bits: &[bool], fanout: usize) -> Rule {
    let n = bits.len();
    let slots = n * (fanout + 1);
    let build = |after: bool| {
        let mut s = Side::new(slots);
        let mut ts = Vec::new();
        for (j, &b) in bits.iter().enumerate() {
            let t = s.z();
            let base = j * (fanout + 1);
            s.link(slot(base), v(t), !b && !after);
            for o in 0..fanout {
                s.link(v(t), slot(base + 1 + o), !b && after);
            }
            ts.push(t);
        }
        (s, ts)
    };
    let (l, lt) = build(false);
    let (r, rt) = build(true);
    rule(l, r, lt.into_iter().zip(rt).collect())
}

/// Schur product of `ι_b ∘ H_n(x)` and `ι_b ∘ H_n(y)` is `ι_b ∘ H_n(xy)`.
fn conv_iota(bits: &[bool], x: &Scalar, y: &Scalar) -> Rule {
    let n = bits.len();
    let mut l = Side::new(n);
    let (h1, h2) = (l.h(x.clone()), l.h(y.clone()));
    for (j, &b) in bits.iter().enumerate() {
        let t = l.z();
        l.w(v(t), slot(j));
        l.link(v(h1), v(t), !b);
        l.link(v(h2), v(t), !b);
    }
    let mut r = Side::new(n);
    let h = r.h(x * y);
    for (j, &b) in bits.iter().enumerate() {
        r.link(v(h), slot(j), !b);
    }
    rule(l, r, vec![(h1, h)])
}

fn half_twice() -> Rule {
    let mut l = Side::new(0);
    l.scalar(Scalar::int(2));
    l.scalar(Scalar::frac(1, 2));
    rule(l, Side::new(0), vec![])
}

/// A normal form whose last output is capped by the counit becomes
/// `2^{n-1}` cups, each joining the two boxes that differ only in the last
/// bit, times `2^{-(2^{n-1}-1)}`.
fn disconnect(n: usize, labels: &[Scalar]) -> Rule {
    let mut l = Side::new(n - 1);
    let pic = nf_picture(&mut l.d, n, labels, &|j| (j + 1 < n).then_some(slot(j)));
    l.halves = pic.halves;
    let mut r = Side::new(n - 1);
    let spiders: Vec<VertexId> = (0..n - 1).map(|_| r.z()).collect();
    for (j, &s) in spiders.iter().enumerate() {
        r.w(v(s), slot(j));
    }
    let boxes: Vec<VertexId> = labels.iter().map(|a| r.h(a.clone())).collect();
    for (b, &h) in boxes.iter().enumerate() {
        for (j, &s) in spiders.iter().enumerate() {
            r.link(v(h), v(s), !bit(b, j, n));
        }
    }
    for pair in boxes.chunks(2) {
        r.not(v(pair[0]), v(pair[1]));
    }
    let pairs = 1u32 << (n - 1);
    if pairs > 1 {
        r.scalar(Scalar::frac(1, 1i64 << (pairs - 1)));
    }
    rule(l, r, vec![])
}

/// One level of the disconnect recursion.
///
/// Spider `A` reaches arm `i` directly when `flags[i]` is set and through
/// a NOT otherwise; spider `X` (slot 0) reaches it directly when
/// `bits[i]` is set. Each arm is a box with `free` further slots. `A`
/// splits in two along `bits`, at the price of a scalar `1/2`.
fn disc_step(free: usize, flags: &[bool], bits: &[bool], labels: &[Scalar]) -> Rule {
    let arms = labels.len();
    let build = |split: bool| {
        let mut s = Side::new(1 + arms * free);
        let a0 = s.z();
        let a1 = if split { Some(s.z()) } else { None };
        let x = s.z();
        s.w(v(x), slot(0));
        let mut kept = vec![a0, x];
        for i in 0..arms {
            let h = s.h(labels[i].clone());
            kept.push(h);
            for t in 0..free {
                s.w(v(h), slot(1 + i * free + t));
            }
            let a = match a1 {
                Some(a1) if bits[i] => a1,
                _ => a0,
            };
            for (end, direct) in [(a, flags[i]), (x, bits[i])] {
                if direct {
                    s.w(v(end), v(h));
                } else {
                    let g = s.not_bare(v(end), v(h));
                    kept.extend([g.near, g.centre, g.phase, g.far]);
                }
            }
        }
        if split {
            s.scalar(Scalar::frac(1, 2));
        }
        (s, kept)
    };
    let (l, lk) = build(false);
    let (r, rk) = build(true);
    rule(l, r, lk.into_iter().zip(rk).collect())
}
