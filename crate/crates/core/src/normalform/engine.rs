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

//! The normalisation strategy, run as recorded rewrites on one diagram.
//!
//! A *region* is a normal-form picture embedded in the working diagram:
//! spiders `S_0..S_{n-1}`, each with one leg leaving the region, and one
//! H-box per bitstring, tied to `S_j` directly when bit `j` is 1 and
//! through a NOT otherwise.

use std::collections::{BTreeMap, BTreeSet};

use crate::diagram::{Diagram, Digest, End, Kind, VertexId, WireId};
use crate::error::{Error, Result};
use crate::rewrite::{embeddings_within, Applied, Params, Pins, Recorder, RuleId, RuleInstance, RuleSchema, Trace};
use crate::scalar::Scalar;

#[derive(Clone, Debug, Default)]
pub(crate) struct Region {
    pub spiders: Vec<VertexId>,
    /// Indexed by bitstring over `spiders`, first spider most significant.
    pub boxes: Vec<VertexId>,
}

impl Region {
    fn n(&self) -> usize {
        self.spiders.len()
    }
}

fn bit(b: usize, j: usize, n: usize) -> bool {
    (b >> (n - 1 - j)) & 1 == 1
}

/// A NOT gadget seen from one side: the H next to the start, the centre,
/// the phase box and the H next to the far end.
#[derive(Clone, Copy, Debug)]
struct Gadget {
    first: VertexId,
    last: VertexId,
}

#[derive(Clone, Copy, Debug)]
struct Link {
    end: End,
    /// The wire touching `end`.
    wire: WireId,
    gadget: Option<Gadget>,
}

/// Every match the strategy asks for is pinned enough to be found quickly.
const SEARCH_BUDGET: usize = 200_000;

pub(crate) struct Engine {
    rec: Recorder,
    protected: BTreeSet<VertexId>,
    /// Degree-0 H-boxes labelled 1/2.
    halves: BTreeSet<VertexId>,
    half: Kind,
    pub max_width: usize,
}

impl Engine {
    pub fn new(d: Diagram, initial: Digest, bent: bool) -> Engine {
        let half = Kind::H(Scalar::frac(1, 2));
        let halves =
            d.vertices().filter(|&(v, k)| *k == half && d.degree(End::Vertex(v)) == 0).map(|(v, _)| v).collect();
        Engine { rec: Recorder::new(d, initial, bent), protected: BTreeSet::new(), halves, half, max_width: 14 }
    }

    pub fn d(&self) -> &Diagram {
        &self.rec.d
    }

    pub fn finish(self) -> (Diagram, Trace) {
        (self.rec.d, self.rec.trace)
    }

    fn deg(&self, v: VertexId) -> usize {
        self.d().degree(End::Vertex(v))
    }

    fn label(&self, v: VertexId) -> Scalar {
        match self.d().kind(v) {
            Some(Kind::H(a)) => a.clone(),
            _ => Scalar::one(),
        }
    }

    fn is_minus_h(&self, v: VertexId, deg: usize) -> bool {
        matches!(self.d().kind(v), Some(Kind::H(a)) if *a == Scalar::int(-1)) && self.deg(v) == deg
    }

    fn run(&mut self, schema: RuleSchema, mut pins: Pins) -> Result<Applied> {
        let rule = schema.instantiate()?;
        if !rule.lhs_halves.is_empty() {
            let taken: BTreeSet<VertexId> = pins.vertices.values().copied().collect();
            let mut free = self.halves.iter().copied().filter(|v| !self.protected.contains(v) && !taken.contains(v));
            for &p in &rule.lhs_halves {
                if let std::collections::btree_map::Entry::Vacant(e) = pins.vertices.entry(p) {
                    let h = free.next().ok_or_else(|| Error::InvalidMatch(format!("{schema}: no spare scalar 1/2")))?;
                    e.insert(h);
                }
            }
        }
        let embedding = embeddings_within(self.d(), &rule.lhs, &pins, 1, SEARCH_BUDGET)
            .ok_or_else(|| Error::InvalidMatch(format!("{schema}: search budget exhausted")))?
            .pop()
            .ok_or_else(|| Error::InvalidMatch(format!("{schema} does not match where expected")))?;
        let name = schema.to_string();
        let ch = self
            .rec
            .step(RuleInstance { schema, embedding }, &rule)
            .map_err(|e| Error::InvalidMatch(format!("{name}: {e}")))?;
        for (v, _) in &ch.removed_vertices {
            self.halves.remove(v);
        }
        for &v in ch.vertex_map.iter().map(|(_, h)| h).chain(ch.added_vertices.iter().map(|(v, _)| v)) {
            if self.d().kind(v) == Some(&self.half) && self.deg(v) == 0 {
                self.halves.insert(v);
            } else {
                self.halves.remove(&v);
            }
        }
        Ok(ch)
    }

    /// A region without spiders is a bare scalar box, which must not be
    /// mistaken for a spare 1/2.
    fn hold(&mut self, r: Region) -> Region {
        if r.spiders.is_empty() {
            self.protected.extend(r.boxes.iter().copied());
        }
        r
    }

    fn host(ch: &Applied, rhs: VertexId) -> VertexId {
        ch.host(rhs).expect("right-hand vertex was placed")
    }

    // ---- local moves -------------------------------------------------

    /// Fuse spider `other` into its neighbour `keep`.
    pub fn fuse(&mut self, keep: VertexId, other: VertexId) -> Result<()> {
        let (m, n) = (self.deg(keep) - 1, self.deg(other) - 1);
        self.run(RuleSchema::new(RuleId::ZS1, Params::mn(m, n)), Pins::none().vertex(0, keep).vertex(1, other))?;
        Ok(())
    }

    /// Split off a new spider from `s` carrying `legs`; returns it.
    fn unfuse(&mut self, s: VertexId, legs: &[WireId]) -> Result<VertexId> {
        let n = legs.len();
        let m = self.deg(s) - n;
        let mut pins = Pins::none().vertex(0, s);
        for (i, &w) in legs.iter().enumerate() {
            pins = pins.wire(m + i, w);
        }
        let ch = self.run(RuleSchema::new(RuleId::ZS1, Params::mn(m, n)).reversed(), pins)?;
        Ok(Self::host(&ch, 1))
    }

    fn dot(&mut self, s: VertexId) -> Result<VertexId> {
        self.unfuse(s, &[])
    }

    /// Insert a 2-legged spider on wire `w`.
    fn split_wire(&mut self, w: WireId) -> Result<VertexId> {
        let ch = self.run(RuleSchema::new(RuleId::ZS2, Params::default()).reversed(), Pins::none().wire(0, w))?;
        Ok(Self::host(&ch, 0))
    }

    fn merge_scalars(&mut self, keep: VertexId, other: VertexId) -> Result<()> {
        let (a, b) = (self.label(keep), self.label(other));
        self.run(RuleSchema::new(RuleId::Mbang, Params::ab(a, b)), Pins::none().vertex(0, keep).vertex(1, other))?;
        Ok(())
    }

    /// Where the wire `w` leaving `from` leads, looking through a NOT.
    fn follow(&self, from: VertexId, w: WireId) -> Link {
        let d = self.d();
        let o = d.other_end(w, End::Vertex(from)).expect("wire touches start");
        let direct = Link { end: o, wire: w, gadget: None };
        let End::Vertex(first) = o else { return direct };
        if !self.is_minus_h(first, 2) {
            return direct;
        }
        let w2 = d.incident(o).into_iter().find(|&x| x != w).expect("degree two");
        let End::Vertex(c) = d.other_end(w2, o).unwrap() else { return direct };
        if d.kind(c) != Some(&Kind::Z) || self.deg(c) != 3 {
            return direct;
        }
        let mut phase = None;
        let mut last = None;
        for x in d.incident(End::Vertex(c)) {
            if x == w2 {
                continue;
            }
            if let Some(End::Vertex(v)) = d.other_end(x, End::Vertex(c)) {
                if self.is_minus_h(v, 1) {
                    phase = Some(v);
                } else if self.is_minus_h(v, 2) {
                    last = Some((v, x));
                }
            }
        }
        let (Some(_), Some((last, w3))) = (phase, last) else { return direct };
        let w4 = d.incident(End::Vertex(last)).into_iter().find(|&x| x != w3).expect("degree two");
        let end = d.other_end(w4, End::Vertex(last)).unwrap();
        Link { end, wire: w4, gadget: Some(Gadget { first, last }) }
    }

    /// For box `h`: each spider it reaches, with the wire at that spider.
    fn box_links(&self, h: VertexId) -> BTreeMap<VertexId, Link> {
        let mut out = BTreeMap::new();
        for w in self.d().incident(End::Vertex(h)) {
            let l = self.follow(h, w);
            if let End::Vertex(s) = l.end {
                out.insert(s, l);
            }
        }
        out
    }

    fn link_to(&self, h: VertexId, s: VertexId) -> Result<Link> {
        self.box_links(h).remove(&s).ok_or_else(|| Error::InvalidMatch(format!("box {h} is not tied to spider {s}")))
    }

    /// Move every NOT on the two legs of each spider in `ts` onto its
    /// remaining leg. Each entry lists the spider and the H next to it on
    /// both NOT-ed legs.
    fn merge_nots(&mut self, ts: &[(VertexId, VertexId, VertexId)]) -> Result<()> {
        if ts.is_empty() {
            return Ok(());
        }
        let mut pins = Pins::none();
        for (j, &(t, g1, g2)) in ts.iter().enumerate() {
            pins = pins.vertex(11 * j, t).vertex(11 * j + 1, g1).vertex(11 * j + 6, g2);
        }
        let params = Params::k(2).with_bits(vec![false; ts.len()]);
        self.run(RuleSchema::new(RuleId::IOTACOPY, params).reversed(), pins)?;
        Ok(())
    }

    /// Split each spider `S_s` so that a fresh spider carries exactly its
    /// legs to boxes `h0` and `h1`, with any NOTs moved onto the link back
    /// to `S_s`. Afterwards `h0` and `h1` share the new spiders directly.
    fn share(&mut self, spiders: &[VertexId], h0: VertexId, h1: VertexId) -> Result<()> {
        let mut zeros = Vec::new();
        for &s in spiders {
            let (l0, l1) = (self.link_to(h0, s)?, self.link_to(h1, s)?);
            let t = self.unfuse(s, &[l0.wire, l1.wire])?;
            match (l0.gadget, l1.gadget) {
                (Some(g0), Some(g1)) => zeros.push((t, g0.last, g1.last)),
                (None, None) => {}
                _ => return Err(Error::InvalidMatch("boxes disagree on a bit".into())),
            }
        }
        self.merge_nots(&zeros)
    }

    // ---- regions -----------------------------------------------------

    /// Normal form of an H-box: a spider on every leg, plus a box of
    /// label 1 for every other bitstring.
    pub fn hbox_region(&mut self, h: VertexId) -> Result<Region> {
        let legs = self.d().incident(End::Vertex(h));
        let mut spiders = Vec::with_capacity(legs.len());
        for w in legs {
            spiders.push(self.split_wire(w)?);
        }
        let n = spiders.len();
        let mut boxes = vec![h; 1 << n];
        for (b, slot) in boxes.iter_mut().enumerate().take((1 << n) - 1) {
            let mut dots = Vec::with_capacity(n);
            for (j, &s) in spiders.iter().enumerate() {
                let t = self.dot(s)?;
                if !bit(b, j, n) {
                    self.run(RuleSchema::new(RuleId::XCOPY, Params::k(0)).reversed(), Pins::none().vertex(0, t))?;
                }
                dots.push(t);
            }
            let mut pins = Pins::none();
            for (j, &t) in dots.iter().enumerate() {
                pins = pins.vertex(j, t);
            }
            let ch = self.run(RuleSchema::new(RuleId::Ubang, Params::k(n)).reversed(), pins)?;
            *slot = Self::host(&ch, 0);
        }
        Ok(self.hold(Region { spiders, boxes }))
    }

    /// Add the dot `d0` to `r` as a new last spider on which every
    /// coefficient is constant.
    pub fn extend(&mut self, r: Region, d0: VertexId) -> Result<Region> {
        let n = r.n();
        let mut boxes = vec![0; 2 << n];
        for (b, &h) in r.boxes.iter().enumerate() {
            let t = self.dot(d0)?;
            let label = self.label(h);
            let ch = self.run(
                RuleSchema::new(RuleId::Ibang, Params::k(n).with_a(label)),
                Pins::none().vertex(0, h).vertex(1, t),
            )?;
            let dn = Self::host(&ch, n);
            let b0 = Self::host(&ch, n + 1);
            let b1 = Self::host(&ch, n + 2);
            let mut fuse_into = Vec::with_capacity(n);
            let mut zeros = Vec::new();
            for j in 0..n {
                let tj = Self::host(&ch, j);
                let w = self
                    .d()
                    .incident(End::Vertex(tj))
                    .into_iter()
                    .find(|&w| {
                        let o = self.d().other_end(w, End::Vertex(tj)).unwrap();
                        o != End::Vertex(b0) && o != End::Vertex(b1)
                    })
                    .expect("new spider keeps its outer leg");
                let l = self.follow(tj, w);
                let End::Vertex(s) = l.end else {
                    return Err(Error::InvalidMatch("extension lost a spider".into()));
                };
                if let Some(g) = l.gadget {
                    zeros.push((tj, g.first));
                }
                fuse_into.push((s, tj));
            }
            if !zeros.is_empty() {
                let mut pins = Pins::none();
                for (j, &(tj, g)) in zeros.iter().enumerate() {
                    pins = pins.vertex(6 * j, tj).vertex(6 * j + 4, g);
                }
                let params = Params::k(2).with_bits(vec![false; zeros.len()]);
                self.run(RuleSchema::new(RuleId::IOTACOPY, params), pins)?;
            }
            for (s, tj) in fuse_into {
                self.fuse(s, tj)?;
            }
            self.fuse(d0, dn)?;
            boxes[2 * b] = b0;
            boxes[2 * b + 1] = b1;
        }
        let mut spiders = r.spiders;
        spiders.push(d0);
        Ok(self.hold(Region { spiders, boxes }))
    }

    /// Extend `r` by a dot split off `target`, then merge it back.
    fn extend_towards(&mut self, r: Region, target: VertexId) -> Result<Region> {
        let d0 = self.dot(target)?;
        let mut r = self.extend(r, d0)?;
        self.fuse(target, d0)?;
        *r.spiders.last_mut().unwrap() = target;
        Ok(r)
    }

    /// Combine two regions. `pairs` lists spiders `(i, j)` of `r` and `q`
    /// joined by a wire; those are fused, and contracted when `contract`
    /// is set. The result lists `r`'s spiders, then `q`'s unpaired ones.
    pub fn join(&mut self, r: Region, q: Region, pairs: &[(usize, usize)], contract: bool) -> Result<Region> {
        let mut q_ids = q.spiders.clone();
        for &(i, j) in pairs {
            self.fuse(r.spiders[i], q.spiders[j])?;
            q_ids[j] = r.spiders[i];
        }
        let q = Region { spiders: q_ids, boxes: q.boxes };
        let paired_r: BTreeSet<usize> = pairs.iter().map(|p| p.0).collect();
        let paired_q: BTreeSet<usize> = pairs.iter().map(|p| p.1).collect();
        let r_extra: Vec<VertexId> = (0..r.n()).filter(|i| !paired_r.contains(i)).map(|i| r.spiders[i]).collect();
        let q_extra: Vec<VertexId> = (0..q.n()).filter(|j| !paired_q.contains(j)).map(|j| q.spiders[j]).collect();
        let width = r.n() + q_extra.len();
        if width > self.max_width {
            return Err(Error::TooLarge(format!("intermediate normal form over {width} outputs")));
        }
        let mut q = q;
        for &s in &r_extra {
            q = self.extend_towards(q, s)?;
        }
        let mut r = r;
        for &s in &q_extra {
            r = self.extend_towards(r, s)?;
        }
        let r = self.schur(r, q)?;
        if !contract {
            return Ok(r);
        }
        let mut r = r;
        let fused: Vec<VertexId> = pairs.iter().map(|&(i, _)| r.spiders[i]).collect();
        for s in fused {
            let t = r.spiders.iter().position(|&x| x == s).unwrap();
            r = self.contract(r, t)?;
        }
        Ok(r)
    }

    /// Multiply two regions over the same spiders box by box.
    pub fn schur(&mut self, r: Region, q: Region) -> Result<Region> {
        let n = r.n();
        let pos: BTreeMap<VertexId, usize> = q.spiders.iter().enumerate().map(|(k, &s)| (s, k)).collect();
        for (c, &rb) in r.boxes.iter().enumerate() {
            let mut qc = 0;
            for (j, s) in r.spiders.iter().enumerate() {
                if bit(c, j, n) {
                    qc |= 1 << (n - 1 - pos[s]);
                }
            }
            let qb = q.boxes[qc];
            self.share(&r.spiders, rb, qb)?;
            let (a, b) = (self.label(rb), self.label(qb));
            self.run(
                RuleSchema::new(RuleId::Mbang, Params::ab(a, b).with_k(n)),
                Pins::none().vertex(n, rb).vertex(n + 1, qb),
            )?;
        }
        Ok(r)
    }

    /// Sum out spider `t`, which must have no leg leaving the region.
    pub fn contract(&mut self, r: Region, t: usize) -> Result<Region> {
        let n = r.n();
        let st = r.spiders[t];
        let others: Vec<usize> = (0..n).filter(|&j| j != t).collect();
        let mut groups: Vec<(VertexId, Vec<usize>)> = vec![(st, (0..1 << n).collect())];
        for &s in &others {
            let ss = r.spiders[s];
            let mut next = Vec::with_capacity(groups.len() * 2);
            for (a, arms) in groups {
                let legs: Vec<WireId> =
                    arms.iter().map(|&b| self.link_to(r.boxes[b], ss).map(|l| l.wire)).collect::<Result<_>>()?;
                let x = self.unfuse(ss, &legs)?;
                let flags: Vec<bool> = arms.iter().map(|&b| bit(b, t, n)).collect();
                let bits: Vec<bool> = arms.iter().map(|&b| bit(b, s, n)).collect();
                let labels: Vec<Scalar> = arms.iter().map(|&b| self.label(r.boxes[b])).collect();
                let mut pins = Pins::none().vertex(0, a).vertex(1, x);
                let mut id = 2;
                for (i, &b) in arms.iter().enumerate() {
                    pins = pins.vertex(id, r.boxes[b]);
                    id += 1 + 4 * usize::from(!flags[i]) + 4 * usize::from(!bits[i]);
                }
                let params = Params::k(n - 2).with_flags(flags).with_bits(bits.clone()).with_labels(labels);
                let ch = self.run(RuleSchema::new(RuleId::DISCSTEP, params), pins)?;
                let a1 = Self::host(&ch, 1);
                self.fuse(ss, x)?;
                let (zero, one): (Vec<usize>, Vec<usize>) = arms.iter().partition(|&&b| !bit(b, s, n));
                next.push((a, zero));
                next.push((a1, one));
            }
            groups = next;
        }
        let rest: Vec<VertexId> = others.iter().map(|&j| r.spiders[j]).collect();
        let mut boxes = vec![0; 1 << (n - 1)];
        for (a, arms) in groups {
            let (h0, h1) = match arms[..] {
                [x, y] if !bit(x, t, n) => (r.boxes[x], r.boxes[y]),
                [x, y] => (r.boxes[y], r.boxes[x]),
                _ => unreachable!("each leaf holds one pair"),
            };
            self.run(RuleSchema::new(RuleId::ZS2, Params::default()), Pins::none().vertex(0, a))?;
            self.share(&rest, h0, h1)?;
            let (x, y) = (self.label(h0), self.label(h1));
            let k = n - 1;
            self.run(
                RuleSchema::new(RuleId::Abang, Params::ab(x, y).with_k(k)),
                Pins::none().vertex(k, h0).vertex(k + 1, h1),
            )?;
            let b = arms[0];
            let low = b & ((1 << (n - 1 - t)) - 1);
            let high = b >> (n - t);
            boxes[(high << (n - 1 - t)) | low] = h0;
        }
        Ok(self.hold(Region { spiders: rest, boxes }))
    }

    /// Normal form of a Z-spider; its first leg stays on the spider and
    /// the others move to fresh spiders through cups.
    pub fn z_region(&mut self, z: VertexId) -> Result<Region> {
        let legs = self.d().incident(End::Vertex(z));
        let mut cups = Vec::with_capacity(legs.len().saturating_sub(1));
        for &w in legs.iter().skip(1) {
            cups.push(self.cup_region(w)?);
        }
        let t = self.dot(z)?;
        let ch = self.run(RuleSchema::new(RuleId::Ubang, Params::k(1)).reversed(), Pins::none().vertex(0, t))?;
        let hb = Self::host(&ch, 0);
        let q = self.hbox_region(hb)?;
        self.fuse(z, q.spiders[0])?;
        let mut r = Region { spiders: vec![z], boxes: q.boxes };
        if legs.is_empty() {
            return self.contract(r, 0);
        }
        for c in cups {
            let near = self.pairs(&r, &c);
            r = self.join(r, c, &near, false)?;
        }
        Ok(r)
    }

    /// Normal form of the identity on wire `w`: two spiders, the first at
    /// the wire's first end.
    pub fn cup_region(&mut self, w: WireId) -> Result<Region> {
        let ch = self.run(RuleSchema::new(RuleId::HS2, Params::default()).reversed(), Pins::none().wire(0, w))?;
        let (h1, h2) = (Self::host(&ch, 0), Self::host(&ch, 1));
        let r1 = self.hbox_region(h1)?;
        let r2 = self.hbox_region(h2)?;
        let pairs = self.pairs(&r1, &r2);
        self.join(r1, r2, &pairs, true)
    }

    /// Spider pairs of `r` and `q` joined by a wire.
    pub fn pairs(&self, r: &Region, q: &Region) -> Vec<(usize, usize)> {
        let qpos: BTreeMap<VertexId, usize> = q.spiders.iter().enumerate().map(|(k, &s)| (s, k)).collect();
        let mut out = Vec::new();
        for (i, &s) in r.spiders.iter().enumerate() {
            for o in self.d().neighbours(End::Vertex(s)) {
                if let Some(&j) = o.vertex().and_then(|v| qpos.get(&v)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Turn self-loops into pairs of H-boxes.
    pub fn open_loops(&mut self) -> Result<()> {
        loop {
            let w = self.d().wires().find(|&(_, a, b)| a == b && !a.is_boundary()).map(|(w, _, _)| w);
            let Some(w) = w else { return Ok(()) };
            self.run(RuleSchema::new(RuleId::HS2, Params::default()).reversed(), Pins::none().wire(0, w))?;
        }
    }

    /// Create a box `H_0(1)`.
    pub fn unit(&mut self) -> Result<VertexId> {
        let ch = self.run(RuleSchema::new(RuleId::Ubang, Params::k(0)).reversed(), Pins::none())?;
        Ok(Self::host(&ch, 0))
    }

    /// Gather every stray scalar into the region's labels, leaving exactly
    /// one scalar 1/2 per NOT of the final picture.
    pub fn fold_scalars(&mut self, r: Region) -> Result<Region> {
        let n = r.n();
        let needed = if n == 0 { 0 } else { n << (n - 1) };
        let own: BTreeSet<VertexId> = r.boxes.iter().copied().collect();
        let half = Kind::H(Scalar::frac(1, 2));
        let strays: Vec<VertexId> = self
            .d()
            .vertices()
            .filter(|&(v, k)| matches!(k, Kind::H(_)) && self.deg(v) == 0 && !own.contains(&v))
            .map(|(v, _)| v)
            .collect();
        let halves: Vec<VertexId> = strays.iter().copied().filter(|&v| self.d().kind(v) == Some(&half)).collect();
        let reserved: BTreeSet<VertexId> = halves.iter().copied().take(needed).collect();
        let mut acc: Option<VertexId> = None;
        for v in strays.into_iter().filter(|v| !reserved.contains(v)) {
            match acc {
                None => acc = Some(v),
                Some(a) => self.merge_scalars(a, v)?,
            }
        }
        for _ in reserved.len()..needed {
            let ch = self.run(RuleSchema::new(RuleId::HALFx2, Params::default()).reversed(), Pins::none())?;
            let two = Self::host(&ch, 0);
            match acc {
                None => acc = Some(two),
                Some(a) => self.merge_scalars(a, two)?,
            }
        }
        let Some(acc) = acc else { return Ok(r) };
        if self.label(acc).is_one() {
            self.run(RuleSchema::new(RuleId::Ubang, Params::k(0)), Pins::none().vertex(0, acc))?;
            return Ok(r);
        }
        if n == 0 {
            self.merge_scalars(r.boxes[0], acc)?;
            return Ok(r);
        }
        self.protected.insert(acc);
        let out = self.join(r, Region { spiders: vec![], boxes: vec![acc] }, &[], false);
        self.protected.remove(&acc);
        out
    }

    pub fn labels(&self, r: &Region) -> Vec<Scalar> {
        r.boxes.iter().map(|&b| self.label(b)).collect()
    }
}
