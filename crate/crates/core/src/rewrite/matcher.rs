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

//! Backtracking subgraph search for rule left-hand sides.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{RuleInstance, RuleSchema};
use crate::diagram::{Diagram, End, VertexId, WireId};
use crate::error::Result;

type PatWire = (WireId, End, End);

/// Where a pattern sits in a host diagram.
///
/// `vertices` pairs each pattern vertex with its host image. `wires` pairs
/// each pattern wire with a host wire; `flipped` is set when the pattern
/// wire's first end lands on the host wire's second end.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Embedding {
    pub vertices: Vec<(VertexId, VertexId)>,
    pub wires: Vec<(WireId, WireId, bool)>,
}

impl Embedding {
    pub fn vertex(&self, p: VertexId) -> Option<VertexId> {
        self.vertices.iter().find(|&&(a, _)| a == p).map(|&(_, h)| h)
    }

    pub fn wire(&self, p: WireId) -> Option<WireId> {
        self.wires.iter().find(|&&(a, _, _)| a == p).map(|&(_, h, _)| h)
    }
}

/// Fixed parts of an embedding the search must respect.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pins {
    pub vertices: BTreeMap<VertexId, VertexId>,
    pub wires: BTreeMap<WireId, WireId>,
}

impl Pins {
    pub fn none() -> Pins {
        Pins::default()
    }

    pub fn vertex(mut self, p: VertexId, h: VertexId) -> Pins {
        self.vertices.insert(p, h);
        self
    }

    pub fn wire(mut self, p: WireId, h: WireId) -> Pins {
        self.wires.insert(p, h);
        self
    }
}

/// All embeddings of the schema's left-hand side into `d`, in a fixed order.
pub fn find_matches(d: &Diagram, schema: &RuleSchema) -> Result<Vec<RuleInstance>> {
    find_matches_limited(d, schema, &Pins::none(), usize::MAX)
}

pub fn find_matches_limited(d: &Diagram, schema: &RuleSchema, pins: &Pins, limit: usize) -> Result<Vec<RuleInstance>> {
    let rule = schema.instantiate()?;
    Ok(embeddings(d, &rule.lhs, pins, limit)
        .into_iter()
        .map(|embedding| RuleInstance { schema: schema.clone(), embedding })
        .collect())
}

pub fn find_first(d: &Diagram, schema: &RuleSchema, pins: &Pins) -> Result<Option<RuleInstance>> {
    Ok(find_matches_limited(d, schema, pins, 1)?.into_iter().next())
}

pub(crate) fn embeddings(host: &Diagram, pattern: &Diagram, pins: &Pins, limit: usize) -> Vec<Embedding> {
    let mut s = Search::new(host, pattern, pins, limit);
    s.vertices();
    s.out
}

/// As [`embeddings`], but gives up with `None` after `budget` search nodes.
pub(crate) fn embeddings_within(
    host: &Diagram,
    pattern: &Diagram,
    pins: &Pins,
    limit: usize,
    budget: usize,
) -> Option<Vec<Embedding>> {
    let mut s = Search::new(host, pattern, pins, limit);
    s.budget = budget;
    s.vertices();
    (s.budget > 0).then_some(s.out)
}

struct Search<'a> {
    host: &'a Diagram,
    pat: &'a Diagram,
    pins: &'a Pins,
    limit: usize,
    ids: Vec<VertexId>,
    adj: Vec<Vec<usize>>,
    pinned: Vec<bool>,
    score: Vec<usize>,
    map: BTreeMap<VertexId, VertexId>,
    used: BTreeSet<VertexId>,
    out: Vec<Embedding>,
    budget: usize,
}

impl<'a> Search<'a> {
    fn new(host: &'a Diagram, pat: &'a Diagram, pins: &'a Pins, limit: usize) -> Self {
        let ids = pat.vertex_ids();
        let slot: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj = ids
            .iter()
            .map(|&v| pat.neighbours(End::Vertex(v)).into_iter().filter_map(|e| e.vertex()).map(|u| slot[&u]).collect())
            .collect();
        let pinned = ids.iter().map(|v| pins.vertices.contains_key(v)).collect();
        Search {
            host,
            pat,
            pins,
            limit,
            score: vec![0; ids.len()],
            ids,
            adj,
            pinned,
            map: BTreeMap::new(),
            used: BTreeSet::new(),
            out: Vec::new(),
            budget: usize::MAX,
        }
    }

    /// Next pattern vertex: pinned ones first, then the one with most
    /// assigned neighbours, then the lowest id.
    fn next(&self) -> Option<usize> {
        (0..self.ids.len())
            .filter(|&i| !self.map.contains_key(&self.ids[i]))
            .min_by_key(|&i| (!self.pinned[i], std::cmp::Reverse(self.score[i]), i))
    }

    fn assign(&mut self, i: usize, h: VertexId, on: bool) {
        let p = self.ids[i];
        if on {
            self.map.insert(p, h);
            self.used.insert(h);
        } else {
            self.map.remove(&p);
            self.used.remove(&h);
        }
        for k in 0..self.adj[i].len() {
            let u = self.adj[i][k];
            if u != i {
                if on {
                    self.score[u] += 1;
                } else {
                    self.score[u] -= 1;
                }
            }
        }
    }

    fn done(&self) -> bool {
        self.out.len() >= self.limit || self.budget == 0
    }

    fn candidates(&self, p: VertexId) -> Vec<VertexId> {
        if let Some(&h) = self.pins.vertices.get(&p) {
            return vec![h];
        }
        let pe = End::Vertex(p);
        // Neighbours of the least connected assigned neighbour.
        let anchor = self
            .pat
            .neighbours(pe)
            .into_iter()
            .filter_map(|n| n.vertex().and_then(|u| self.map.get(&u)))
            .min_by_key(|&&hu| (self.host.degree(End::Vertex(hu)), hu));
        if let Some(&hu) = anchor {
            let mut c: Vec<VertexId> =
                self.host.neighbours(End::Vertex(hu)).into_iter().filter_map(End::vertex).collect();
            c.sort_unstable();
            c.dedup();
            return c;
        }
        let kind = self.pat.kind(p);
        if self.pat.degree(pe) == 0 {
            return self
                .host
                .vertices()
                .find(|&(h, k)| Some(k) == kind && self.host.degree(End::Vertex(h)) == 0 && !self.used.contains(&h))
                .map(|(h, _)| h)
                .into_iter()
                .collect();
        }
        self.host.vertex_ids()
    }

    fn fits(&self, p: VertexId, h: VertexId) -> bool {
        if self.used.contains(&h) || self.host.kind(h) != self.pat.kind(p) {
            return false;
        }
        let (pe, he) = (End::Vertex(p), End::Vertex(h));
        if self.pat.degree(pe) != self.host.degree(he) {
            return false;
        }
        // Enough parallel wires towards every assigned neighbour.
        let mut want: BTreeMap<VertexId, usize> = BTreeMap::new();
        for n in self.pat.neighbours(pe) {
            if let Some(u) = n.vertex() {
                if u == p {
                    *want.entry(h).or_default() += 1;
                } else if let Some(&hu) = self.map.get(&u) {
                    *want.entry(hu).or_default() += 1;
                }
            }
        }
        let mut have: BTreeMap<VertexId, usize> = BTreeMap::new();
        for n in self.host.neighbours(he) {
            if let Some(u) = n.vertex() {
                *have.entry(u).or_default() += 1;
            }
        }
        want.iter().all(|(u, c)| have.get(u).copied().unwrap_or(0) >= *c)
    }

    fn vertices(&mut self) {
        if self.done() {
            return;
        }
        self.budget -= 1;
        let Some(i) = self.next() else {
            if let Some(e) = self.wires() {
                self.bare(e);
            }
            return;
        };
        let p = self.ids[i];
        for h in self.candidates(p) {
            if !self.fits(p, h) {
                continue;
            }
            self.assign(i, h, true);
            self.vertices();
            self.assign(i, h, false);
            if self.done() {
                return;
            }
        }
    }

    fn img(&self, e: End) -> End {
        match e {
            End::Vertex(v) => End::Vertex(self.map[&v]),
            e => e,
        }
    }

    /// Images of every wire touching a pattern vertex, or `None` when the
    /// leftover host ends cannot be covered.
    fn wires(&self) -> Option<Embedding> {
        let mut taken: BTreeMap<WireId, usize> = BTreeMap::new();
        let mut wires = Vec::new();
        let mut legs: BTreeMap<VertexId, Vec<(WireId, bool)>> = BTreeMap::new();
        let mut inner: BTreeMap<(VertexId, VertexId), Vec<PatWire>> = BTreeMap::new();
        for (pw, a, b) in self.pat.wires() {
            match (a, b) {
                (End::Vertex(u), End::Vertex(v)) => inner.entry((u.min(v), u.max(v))).or_default().push((pw, a, b)),
                (End::Vertex(u), _) => legs.entry(u).or_default().push((pw, false)),
                (_, End::Vertex(v)) => legs.entry(v).or_default().push((pw, true)),
                _ => {}
            }
        }
        for ((u, v), list) in inner {
            let (hu, hv) = (self.map[&u], self.map[&v]);
            let mut pool: Vec<WireId> = self
                .host
                .incident(End::Vertex(hu))
                .into_iter()
                .filter(|&w| {
                    let (x, y) = self.host.wire(w).unwrap();
                    (x, y) == (End::Vertex(hu), End::Vertex(hv)) || (y, x) == (End::Vertex(hu), End::Vertex(hv))
                })
                .collect();
            pool.dedup();
            // Pinned wires first, then the lowest free ids.
            let mut chosen = Vec::new();
            for &(pw, a, _) in &list {
                let hw = match self.pins.wires.get(&pw) {
                    Some(&hw) => {
                        if !pool.contains(&hw) {
                            return None;
                        }
                        hw
                    }
                    None => 0,
                };
                chosen.push((pw, a, hw, self.pins.wires.contains_key(&pw)));
            }
            for entry in chosen.iter_mut().filter(|c| !c.3) {
                let hw = *pool.iter().find(|w| !taken.contains_key(w) && !self.pins.wires.values().any(|p| p == *w))?;
                entry.2 = hw;
                taken.insert(hw, 2);
            }
            for (pw, a, hw, pinned) in chosen {
                if pinned && taken.insert(hw, 2).is_some() {
                    return None;
                }
                let (x, _) = self.host.wire(hw).unwrap();
                wires.push((pw, hw, x != self.img(a)));
            }
        }
        for (u, mut list) in legs {
            let hu = End::Vertex(self.map[&u]);
            let mut free: Vec<(WireId, bool)> = Vec::new();
            for w in self.host.incident(hu) {
                if taken.get(&w).copied().unwrap_or(0) >= 2 {
                    continue;
                }
                let (x, y) = self.host.wire(w).unwrap();
                if x == hu && y == hu {
                    if taken.contains_key(&w) {
                        continue;
                    }
                    if free.last().map(|f| f.0) == Some(w) {
                        free.push((w, true));
                    } else {
                        free.push((w, false));
                    }
                } else {
                    free.push((w, x != hu));
                }
            }
            if free.len() != list.len() {
                return None;
            }
            list.sort_by_key(|&(pw, _)| (!self.pins.wires.contains_key(&pw), pw));
            for (pw, second) in list {
                let pos = match self.pins.wires.get(&pw) {
                    Some(hw) => free.iter().position(|f| f.0 == *hw)?,
                    None => 0,
                };
                let (hw, flipped) = free.remove(pos);
                *taken.entry(hw).or_default() += 1;
                wires.push((pw, hw, flipped != second));
            }
        }
        let vertices = self.map.iter().map(|(&p, &h)| (p, h)).collect();
        Some(Embedding { vertices, wires })
    }

    /// Extend with images for slot-to-slot pattern wires.
    fn bare(&mut self, mut emb: Embedding) {
        let bare: Vec<WireId> =
            self.pat.wires().filter(|&(_, a, b)| a.is_boundary() && b.is_boundary()).map(|(w, _, _)| w).collect();
        if bare.is_empty() {
            emb.wires.sort_unstable();
            self.out.push(emb);
            return;
        }
        let used: BTreeSet<WireId> = emb.wires.iter().map(|&(_, h, _)| h).collect();
        let mut fixed = Vec::new();
        let mut open = Vec::new();
        for pw in bare {
            match self.pins.wires.get(&pw) {
                Some(&hw) => {
                    if used.contains(&hw) || !self.host.has_wire(hw) || fixed.iter().any(|&(_, h)| h == hw) {
                        return;
                    }
                    fixed.push((pw, hw));
                }
                None => open.push(pw),
            }
        }
        emb.wires.extend(fixed.iter().map(|&(p, h)| (p, h, false)));
        let pinned: BTreeSet<WireId> = self.pins.wires.values().copied().collect();
        let free: Vec<WireId> = if open.is_empty() {
            Vec::new()
        } else {
            self.host.wires().map(|(w, _, _)| w).filter(|w| !used.contains(w) && !pinned.contains(w)).collect()
        };
        let mut pick = Vec::new();
        self.combos(&emb, &open, &free, 0, &mut pick);
    }

    fn combos(&mut self, emb: &Embedding, open: &[WireId], free: &[WireId], from: usize, pick: &mut Vec<WireId>) {
        if self.done() {
            return;
        }
        if pick.len() == open.len() {
            let mut e = emb.clone();
            e.wires.extend(open.iter().zip(pick.iter()).map(|(&p, &h)| (p, h, false)));
            e.wires.sort_unstable();
            self.out.push(e);
            return;
        }
        for i in from..free.len() {
            pick.push(free[i]);
            self.combos(emb, open, free, i + 1, pick);
            pick.pop();
        }
    }
}
