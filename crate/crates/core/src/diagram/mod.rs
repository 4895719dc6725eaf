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

//! Open multigraphs of Z-spiders and H-boxes.
//!
//! Generators are symmetric and undirected, so a vertex only records its
//! kind. Wires are unordered pairs of [`End`]s; a boundary slot is the end
//! of exactly one wire. Parallel wires, self-loops and bare wires between
//! boundary slots are all allowed.

mod derived;
mod hash;
mod random;
mod render;
mod text;

pub(crate) use derived::{add_grey, add_not, add_not_bare};
pub use derived::{expand_derived, grey_spider, not_gate, DerivedGenerator, NotGadget};
pub use hash::Digest;
pub use random::{random_diagram, RandomShape};
pub use render::{to_dot, to_tikz};
pub use text::{parse_diagram, print_diagram};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type VertexId = usize;
pub type WireId = usize;

/// One end of a wire: a generator or a boundary slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Vertex(VertexId),
    Input(usize),
    Output(usize),
}

impl End {
    pub fn vertex(self) -> Option<VertexId> {
        match self {
            End::Vertex(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_boundary(self) -> bool {
        !matches!(self, End::Vertex(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Kind {
    Z,
    /// H-box with its label; the default label is `-1`.
    H(Scalar),
}

impl Kind {
    pub fn is_z(&self) -> bool {
        matches!(self, Kind::Z)
    }

    pub fn label(&self) -> Option<&Scalar> {
        match self {
            Kind::H(a) => Some(a),
            Kind::Z => None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Diagram {
    vertices: BTreeMap<VertexId, Kind>,
    wires: BTreeMap<WireId, (End, End)>,
    /// Sorted wire ids at each end.
    adj: BTreeMap<End, Vec<WireId>>,
    n_inputs: usize,
    n_outputs: usize,
    next_vertex: VertexId,
    next_wire: WireId,
}

impl Diagram {
    /// An empty diagram with the given boundary sizes; the caller adds the wires.
    pub fn new(n_inputs: usize, n_outputs: usize) -> Self {
        Diagram { n_inputs, n_outputs, ..Default::default() }
    }

    pub fn empty() -> Self {
        Self::new(0, 0)
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_wires(&self) -> usize {
        self.wires.len()
    }

    pub(crate) fn next_vertex_id(&self) -> VertexId {
        self.next_vertex
    }

    pub(crate) fn next_wire_id(&self) -> WireId {
        self.next_wire
    }

    pub fn add_vertex(&mut self, kind: Kind) -> VertexId {
        let v = self.next_vertex;
        self.next_vertex += 1;
        self.vertices.insert(v, kind);
        v
    }

    pub fn add_z(&mut self) -> VertexId {
        self.add_vertex(Kind::Z)
    }

    pub fn add_h(&mut self, label: Scalar) -> VertexId {
        self.add_vertex(Kind::H(label))
    }

    /// Insert a vertex under an explicit id. Fails if the id is taken.
    pub fn insert_vertex(&mut self, v: VertexId, kind: Kind) -> Result<()> {
        if self.vertices.contains_key(&v) {
            return Err(Error::BadParams(format!("duplicate vertex id {v}")));
        }
        self.vertices.insert(v, kind);
        self.next_vertex = self.next_vertex.max(v + 1);
        Ok(())
    }

    pub fn add_wire(&mut self, a: End, b: End) -> WireId {
        let w = self.next_wire;
        self.next_wire += 1;
        self.wires.insert(w, (a, b));
        self.adj.entry(a).or_default().push(w);
        self.adj.entry(b).or_default().push(w);
        w
    }

    pub fn remove_wire(&mut self, w: WireId) -> Option<(End, End)> {
        let (a, b) = self.wires.remove(&w)?;
        for e in [a, b] {
            if let Some(list) = self.adj.get_mut(&e) {
                if let Ok(pos) = list.binary_search(&w) {
                    list.remove(pos);
                }
                if list.is_empty() {
                    self.adj.remove(&e);
                }
            }
        }
        Some((a, b))
    }

    /// Remove a vertex together with every wire touching it.
    pub fn remove_vertex(&mut self, v: VertexId) -> Option<Kind> {
        for w in self.incident(End::Vertex(v)) {
            self.remove_wire(w);
        }
        self.vertices.remove(&v)
    }

    pub fn set_kind(&mut self, v: VertexId, kind: Kind) {
        if let Some(k) = self.vertices.get_mut(&v) {
            *k = kind;
        }
    }

    pub fn kind(&self, v: VertexId) -> Option<&Kind> {
        self.vertices.get(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, &Kind)> + '_ {
        self.vertices.iter().map(|(&v, k)| (v, k))
    }

    pub fn vertex_ids(&self) -> Vec<VertexId> {
        self.vertices.keys().copied().collect()
    }

    pub fn wires(&self) -> impl Iterator<Item = (WireId, End, End)> + '_ {
        self.wires.iter().map(|(&w, &(a, b))| (w, a, b))
    }

    /// Wires with id at least `from`.
    pub(crate) fn wires_from(&self, from: WireId) -> impl Iterator<Item = (WireId, End, End)> + '_ {
        self.wires.range(from..).map(|(&w, &(a, b))| (w, a, b))
    }

    pub fn wire(&self, w: WireId) -> Option<(End, End)> {
        self.wires.get(&w).copied()
    }

    pub fn has_wire(&self, w: WireId) -> bool {
        self.wires.contains_key(&w)
    }

    /// Wires touching `e`, sorted by id. A self-loop is listed twice.
    pub fn incident(&self, e: End) -> Vec<WireId> {
        // Wire ids only grow, so the lists stay sorted.
        self.adj.get(&e).cloned().unwrap_or_default()
    }

    /// Number of wire-ends at `e`; a self-loop counts twice.
    pub fn degree(&self, e: End) -> usize {
        self.adj.get(&e).map_or(0, Vec::len)
    }

    /// The end of `w` opposite to `e`. For a self-loop this is `e` itself.
    pub fn other_end(&self, w: WireId, e: End) -> Option<End> {
        let (a, b) = self.wire(w)?;
        if a == e {
            Some(b)
        } else if b == e {
            Some(a)
        } else {
            None
        }
    }

    /// Neighbouring ends of `e`, one entry per wire-end.
    pub fn neighbours(&self, e: End) -> Vec<End> {
        let mut out = Vec::new();
        for w in self.incident(e) {
            if let Some(o) = self.other_end(w, e) {
                out.push(o);
            }
        }
        out
    }

    pub fn boundary_wire(&self, e: End) -> Option<WireId> {
        self.adj.get(&e).and_then(|l| l.first().copied())
    }

    pub fn inputs(&self) -> impl Iterator<Item = End> {
        (0..self.n_inputs).map(End::Input)
    }

    pub fn outputs(&self) -> impl Iterator<Item = End> {
        (0..self.n_outputs).map(End::Output)
    }

    pub fn is_state(&self) -> bool {
        self.n_inputs == 0
    }

    /// Check the structural invariants: wire endpoints exist and every
    /// boundary slot is the end of exactly one wire.
    pub fn validate(&self) -> Result<()> {
        for (_, a, b) in self.wires() {
            for e in [a, b] {
                match e {
                    End::Vertex(v) if !self.vertices.contains_key(&v) => {
                        return Err(Error::BadParams(format!("wire touches missing vertex {v}")))
                    }
                    End::Input(i) if i >= self.n_inputs => {
                        return Err(Error::BoundaryMismatch(format!("in:{i} out of range")))
                    }
                    End::Output(i) if i >= self.n_outputs => {
                        return Err(Error::BoundaryMismatch(format!("out:{i} out of range")))
                    }
                    _ => {}
                }
            }
        }
        for e in self.inputs().chain(self.outputs()) {
            let d = self.degree(e);
            if d != 1 {
                return Err(Error::BoundaryMismatch(format!("boundary slot {} is the end of {d} wires", end_name(e))));
            }
        }
        Ok(())
    }

    /// Copy `other`'s generators into `self` with fresh ids, returning the id map.
    fn absorb_vertices(&mut self, other: &Diagram) -> BTreeMap<VertexId, VertexId> {
        other.vertices().map(|(v, k)| (v, self.add_vertex(k.clone()))).collect()
    }

    /// Renumber vertices and wires densely in their current order.
    pub fn compact(&self) -> Diagram {
        let mut d = Diagram::new(self.n_inputs, self.n_outputs);
        let map = d.absorb_vertices(self);
        for (_, a, b) in self.wires() {
            d.add_wire(remap(a, &map), remap(b, &map));
        }
        d
    }

    // ---- standard pieces ----

    /// `n` parallel identity wires.
    pub fn identity(n: usize) -> Diagram {
        let mut d = Diagram::new(n, n);
        for i in 0..n {
            d.add_wire(End::Input(i), End::Output(i));
        }
        d
    }

    /// `|00⟩ + |11⟩` as a bare wire between two outputs.
    pub fn cup() -> Diagram {
        let mut d = Diagram::new(0, 2);
        d.add_wire(End::Output(0), End::Output(1));
        d
    }

    pub fn cap() -> Diagram {
        let mut d = Diagram::new(2, 0);
        d.add_wire(End::Input(0), End::Input(1));
        d
    }

    pub fn z_spider(m: usize, n: usize) -> Diagram {
        let mut d = Diagram::new(m, n);
        let v = d.add_z();
        for i in 0..m {
            d.add_wire(End::Input(i), End::Vertex(v));
        }
        for j in 0..n {
            d.add_wire(End::Vertex(v), End::Output(j));
        }
        d
    }

    pub fn h_box(m: usize, n: usize, label: Scalar) -> Diagram {
        let mut d = Diagram::new(m, n);
        let v = d.add_h(label);
        for i in 0..m {
            d.add_wire(End::Input(i), End::Vertex(v));
        }
        for j in 0..n {
            d.add_wire(End::Vertex(v), End::Output(j));
        }
        d
    }

    /// A scalar H-box `H_0(a)`, whose value is `a`.
    pub fn scalar(a: Scalar) -> Diagram {
        Self::h_box(0, 0, a)
    }

    // ---- composition ----

    /// Sequential composition: `self` first, then `next`.
    pub fn compose(&self, next: &Diagram) -> Result<Diagram> {
        if self.n_outputs != next.n_inputs {
            return Err(Error::BoundaryMismatch(format!(
                "cannot compose {} outputs into {} inputs",
                self.n_outputs, next.n_inputs
            )));
        }
        let mut d = Diagram::new(self.n_inputs, next.n_outputs);
        let m1 = d.absorb_vertices(self);
        let m2 = d.absorb_vertices(next);
        let mut half = Vec::new();
        for (_, a, b) in self.wires() {
            let f = |e: End| match e {
                End::Output(k) => Splice::Join(k),
                e => Splice::Real(remap(e, &m1)),
            };
            half.push((f(a), f(b)));
        }
        for (_, a, b) in next.wires() {
            let f = |e: End| match e {
                End::Input(k) => Splice::Join(k),
                e => Splice::Real(remap(e, &m2)),
            };
            half.push((f(a), f(b)));
        }
        splice_into(&mut d, half);
        Ok(d)
    }

    /// Parallel composition; boundaries are concatenated.
    pub fn tensor(&self, other: &Diagram) -> Diagram {
        let mut d = Diagram::new(self.n_inputs + other.n_inputs, self.n_outputs + other.n_outputs);
        let m1 = d.absorb_vertices(self);
        let m2 = d.absorb_vertices(other);
        for (_, a, b) in self.wires() {
            d.add_wire(remap(a, &m1), remap(b, &m1));
        }
        let shift = |e: End| match e {
            End::Input(i) => End::Input(i + self.n_inputs),
            End::Output(j) => End::Output(j + self.n_outputs),
            e => remap(e, &m2),
        };
        for (_, a, b) in other.wires() {
            d.add_wire(shift(a), shift(b));
        }
        d
    }

    /// Bend every input round to become an output.
    ///
    /// Output order of the result: former inputs in reverse order, then
    /// the original outputs. [`Diagram::unbend`] inverts this.
    pub fn bend_to_state(&self) -> Diagram {
        let m = self.n_inputs;
        self.relabel_boundary(0, m + self.n_outputs, |e| match e {
            End::Input(i) => End::Output(m - 1 - i),
            End::Output(j) => End::Output(m + j),
            e => e,
        })
    }

    /// Inverse of [`Diagram::bend_to_state`] for a state that had `n_inputs` inputs.
    pub fn unbend(&self, n_inputs: usize) -> Result<Diagram> {
        if !self.is_state() || self.n_outputs < n_inputs {
            return Err(Error::BoundaryMismatch(format!(
                "cannot unbend {n_inputs} inputs from a diagram with {} inputs and {} outputs",
                self.n_inputs, self.n_outputs
            )));
        }
        let m = n_inputs;
        Ok(self.relabel_boundary(m, self.n_outputs - m, |e| match e {
            End::Output(k) if k < m => End::Input(m - 1 - k),
            End::Output(k) => End::Output(k - m),
            e => e,
        }))
    }

    fn relabel_boundary(&self, n_in: usize, n_out: usize, f: impl Fn(End) -> End) -> Diagram {
        let mut d = self.clone();
        d.n_inputs = n_in;
        d.n_outputs = n_out;
        d.wires.clear();
        d.adj.clear();
        for (&w, &(a, b)) in &self.wires {
            let (a, b) = (f(a), f(b));
            d.wires.insert(w, (a, b));
            d.adj.entry(a).or_default().push(w);
            d.adj.entry(b).or_default().push(w);
        }
        d
    }

    /// Structural equality up to vertex renaming, decided by canonical hash.
    pub fn structurally_equal(&self, other: &Diagram) -> bool {
        self.canonical_hash() == other.canonical_hash()
    }
}

pub(crate) fn end_name(e: End) -> String {
    match e {
        End::Vertex(v) => format!("v{v}"),
        End::Input(i) => format!("in:{i}"),
        End::Output(j) => format!("out:{j}"),
    }
}

fn remap(e: End, map: &BTreeMap<VertexId, VertexId>) -> End {
    match e {
        End::Vertex(v) => End::Vertex(map[&v]),
        e => e,
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Splice {
    Real(End),
    Join(usize),
}

/// Add wires to `d`, joining half-wires that meet at the same join point.
/// Closed loops left over become a Z-spider with a self-loop (value 2).
pub(crate) fn splice_into(d: &mut Diagram, half: Vec<(Splice, Splice)>) {
    let end = |i: usize, side: usize| if side == 0 { half[i].0 } else { half[i].1 };
    let mut at: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..half.len() {
        for side in 0..2 {
            if let Splice::Join(k) = end(i, side) {
                at.entry(k).or_default().push((i, side));
            }
        }
    }
    let across = |i: usize, side: usize| {
        let Splice::Join(k) = end(i, side) else { unreachable!("walks only cross join points") };
        let pair = &at[&k];
        assert_eq!(pair.len(), 2, "every join point has two sides");
        if pair[0] == (i, side) {
            pair[1]
        } else {
            pair[0]
        }
    };
    let mut used = vec![false; half.len()];
    for i in 0..half.len() {
        if used[i] {
            continue;
        }
        let Some(start) = (0..2).find(|&s| matches!(end(i, s), Splice::Real(_))) else { continue };
        let Splice::Real(a) = end(i, start) else { unreachable!() };
        used[i] = true;
        let (mut j, mut s) = (i, 1 - start);
        loop {
            match end(j, s) {
                Splice::Real(b) => {
                    d.add_wire(a, b);
                    break;
                }
                Splice::Join(_) => {
                    let (j2, s2) = across(j, s);
                    used[j2] = true;
                    (j, s) = (j2, 1 - s2);
                }
            }
        }
    }
    for i in 0..half.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let (mut j, mut s) = (i, 1);
        loop {
            let (j2, s2) = across(j, s);
            if j2 == i {
                break;
            }
            used[j2] = true;
            (j, s) = (j2, 1 - s2);
        }
        let z = d.add_z();
        d.add_wire(End::Vertex(z), End::Vertex(z));
    }
}
