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

//! Normal forms: every state is a product of H-boxes over one layer of
//! spiders, one box per bitstring. The operations here reach that form by
//! rewriting and return the derivation.

mod engine;

use std::fmt;
use std::str::FromStr;

use serde_json::json;

use crate::diagram::{add_not, Diagram, End, Kind, VertexId};
use crate::error::{Error, Result};
use crate::rewrite::{nf_picture, Trace};
use crate::scalar::Scalar;
use engine::{Engine, Region};

/// A string of bits; index 0 is the most significant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bitstring(Vec<bool>);

impl Bitstring {
    pub fn new(bits: Vec<bool>) -> Bitstring {
        Bitstring(bits)
    }

    pub fn from_index(n: usize, idx: usize) -> Bitstring {
        Bitstring((0..n).map(|j| (idx >> (n - 1 - j)) & 1 == 1).collect())
    }

    pub fn ones(n: usize) -> Bitstring {
        Bitstring(vec![true; n])
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn xor(&self, other: &Bitstring) -> Result<Bitstring> {
        if self.len() != other.len() {
            return Err(Error::ShapeMismatch(format!("xor of lengths {} and {}", self.len(), other.len())));
        }
        Ok(Bitstring(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect()))
    }

    /// All bitstrings of length `n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Bitstring> {
        (0..1usize << n).map(move |i| Bitstring::from_index(n, i))
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bitstring {
    type Err = Error;
    fn from_str(s: &str) -> Result<Bitstring> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::BadParams(format!("bad bit `{c}`"))),
            })
            .collect::<Result<_>>()
            .map(Bitstring)
    }
}

/// Coefficients `a_b` of `Σ_b a_b |b⟩` over `n_outputs` wires, listed
/// lexicographically. `original_inputs` records how many of the leading
/// wires were inputs before bending.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm {
    n_outputs: usize,
    original_inputs: usize,
    coeffs: Vec<Scalar>,
}

impl NormalForm {
    pub fn new(coeffs: Vec<Scalar>) -> Result<NormalForm> {
        let len = coeffs.len();
        if !len.is_power_of_two() {
            return Err(Error::BadShape(len));
        }
        Ok(NormalForm { n_outputs: len.trailing_zeros() as usize, original_inputs: 0, coeffs })
    }

    pub fn with_inputs(mut self, m: usize) -> NormalForm {
        self.original_inputs = m.min(self.n_outputs);
        self
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    pub fn original_inputs(&self) -> usize {
        self.original_inputs
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, b: &Bitstring) -> &Scalar {
        &self.coeffs[b.index()]
    }

    /// The normal-form picture as a state.
    pub fn as_diagram(&self) -> Diagram {
        let mut d = Diagram::new(0, self.n_outputs);
        nf_picture(&mut d, self.n_outputs, &self.coeffs, &|j| Some(End::Output(j)));
        d
    }

    /// The picture with the leading wires bent back into inputs.
    pub fn as_map(&self) -> Result<Diagram> {
        self.as_diagram().unbend(self.original_inputs)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n_outputs,
            "inputs": self.original_inputs,
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// NOTs on the wires where `b` is 0: `|c⟩ ↦ |c ⊕ b ⊕ 1⟩`.
pub fn iota(b: &Bitstring) -> Diagram {
    let n = b.len();
    let mut d = Diagram::new(n, n);
    for (j, &x) in b.bits().iter().enumerate() {
        if x {
            d.add_wire(End::Input(j), End::Output(j));
        } else {
            add_not(&mut d, End::Input(j), End::Output(j));
        }
    }
    d
}

/// Entrywise product of two states: matching outputs meet in a spider.
pub fn schur(d1: &Diagram, d2: &Diagram) -> Result<Diagram> {
    if !d1.is_state() || !d2.is_state() || d1.n_outputs() != d2.n_outputs() {
        return Err(Error::BoundaryMismatch(format!(
            "schur needs two states of equal size, got {}→{} and {}→{}",
            d1.n_inputs(),
            d1.n_outputs(),
            d2.n_inputs(),
            d2.n_outputs()
        )));
    }
    let n = d1.n_outputs();
    let mut merge = Diagram::new(2 * n, n);
    for j in 0..n {
        let z = merge.add_z();
        merge.add_wire(End::Input(j), End::Vertex(z));
        merge.add_wire(End::Input(n + j), End::Vertex(z));
        merge.add_wire(End::Vertex(z), End::Output(j));
    }
    d1.tensor(d2).compose(&merge)
}

/// The normal-form diagram with the given coefficients.
pub fn nf_from_vector(coeffs: &[Scalar]) -> Result<Diagram> {
    Ok(NormalForm::new(coeffs.to_vec())?.as_diagram())
}

fn picture(d: &mut Diagram, nf: &NormalForm, ext: &dyn Fn(usize) -> Option<End>) -> Region {
    let p = nf_picture(d, nf.n_outputs, &nf.coeffs, ext);
    Region { spiders: p.spiders, boxes: p.boxes }
}

/// Fold scalars, then read the coefficients in output order.
fn conclude(mut eng: Engine, r: Region, inputs: usize) -> Result<(NormalForm, Trace)> {
    let r = eng.fold_scalars(r)?;
    let labels = eng.labels(&r);
    let n = r.spiders.len();
    let mut slot = Vec::with_capacity(n);
    for &s in &r.spiders {
        let o = eng
            .d()
            .neighbours(End::Vertex(s))
            .into_iter()
            .find_map(|e| match e {
                End::Output(o) => Some(o),
                _ => None,
            })
            .ok_or_else(|| Error::InvalidMatch(format!("spider {s} has no output")))?;
        slot.push(o);
    }
    let mut coeffs = vec![Scalar::zero(); 1 << n];
    for (c, a) in labels.into_iter().enumerate() {
        let mut idx = 0;
        for (j, &o) in slot.iter().enumerate() {
            if (c >> (n - 1 - j)) & 1 == 1 {
                idx |= 1 << (n - 1 - o);
            }
        }
        coeffs[idx] = a;
    }
    let nf = NormalForm::new(coeffs)?.with_inputs(inputs);
    Ok((nf, eng.finish().1))
}

enum Generator {
    Vertex(VertexId),
    Cup(usize),
}

/// Largest number of wires a diagram may have once bent into a state.
pub const MAX_OUTPUTS: usize = 12;

/// Reduce `d`, bent into a state, to normal form.
pub fn normalize(d: &Diagram) -> Result<(NormalForm, Trace)> {
    d.validate()?;
    let state = d.bend_to_state();
    if state.n_outputs() > MAX_OUTPUTS {
        return Err(Error::TooLarge(format!("{} boundary wires exceed the limit of {MAX_OUTPUTS}", state.n_outputs())));
    }
    let mut eng = Engine::new(state, d.canonical_hash(), true);
    eng.open_loops()?;
    let dg = eng.d();
    let mut gens: Vec<Generator> = dg
        .vertices()
        .filter(|&(v, k)| k.is_z() || dg.degree(End::Vertex(v)) > 0)
        .map(|(v, _)| Generator::Vertex(v))
        .collect();
    gens.extend(dg.wires().filter(|&(_, a, b)| a.is_boundary() && b.is_boundary()).map(|(w, _, _)| Generator::Cup(w)));
    // Neighbouring generators, one entry per shared wire.
    let index: std::collections::BTreeMap<VertexId, usize> = gens
        .iter()
        .enumerate()
        .filter_map(|(i, g)| match g {
            Generator::Vertex(v) => Some((*v, i)),
            Generator::Cup(_) => None,
        })
        .collect();
    let adj: Vec<Vec<usize>> = gens
        .iter()
        .map(|g| match g {
            Generator::Vertex(v) => {
                dg.neighbours(End::Vertex(*v)).into_iter().filter_map(|e| e.vertex().map(|u| index[&u])).collect()
            }
            Generator::Cup(_) => Vec::new(),
        })
        .collect();
    let legs: Vec<usize> = gens
        .iter()
        .map(|g| match g {
            Generator::Vertex(v) => dg.degree(End::Vertex(*v)),
            Generator::Cup(_) => 2,
        })
        .collect();
    let mut done = vec![false; gens.len()];
    let mut r: Option<Region> = None;
    for _ in 0..gens.len() {
        let next = (0..gens.len())
            .filter(|&i| !done[i])
            .min_by_key(|&i| {
                let links = adj[i].iter().filter(|&&u| done[u]).count();
                (legs[i] as isize - 2 * links as isize, i)
            })
            .expect("a generator is left");
        done[next] = true;
        let q = match gens[next] {
            Generator::Vertex(v) if eng.d().kind(v) == Some(&Kind::Z) => eng.z_region(v)?,
            Generator::Vertex(v) => eng.hbox_region(v)?,
            Generator::Cup(w) => eng.cup_region(w)?,
        };
        if q.spiders.is_empty() {
            // A closed scalar; folded in at the end.
            continue;
        }
        r = Some(match r {
            None => q,
            Some(r) => {
                let pairs = eng.pairs(&r, &q);
                eng.join(r, q, &pairs, true)?
            }
        });
    }
    let r = match r {
        Some(r) => r,
        None => {
            let h = eng.unit()?;
            Region { spiders: vec![], boxes: vec![h] }
        }
    };
    conclude(eng, r, d.n_inputs())
}

pub fn nf_of_hbox(n: usize, a: Scalar) -> Result<(NormalForm, Trace)> {
    normalize(&Diagram::h_box(0, n, a))
}

pub fn nf_of_zspider(n: usize) -> Result<(NormalForm, Trace)> {
    normalize(&Diagram::z_spider(0, n))
}

fn start(d: &Diagram) -> Engine {
    Engine::new(d.clone(), d.canonical_hash(), false)
}

fn check_output(nf: &NormalForm, i: usize) -> Result<()> {
    if i >= nf.n_outputs {
        return Err(Error::NoOutput(format!("output {i} of a normal form with {} outputs", nf.n_outputs)));
    }
    Ok(())
}

fn build_extend(nf: &NormalForm) -> (Diagram, Region, VertexId) {
    let n = nf.n_outputs;
    let mut d = Diagram::new(0, n + 1);
    let r = picture(&mut d, nf, &|j| Some(End::Output(j)));
    let dot = d.add_z();
    d.add_wire(End::Vertex(dot), End::Output(n));
    (d, r, dot)
}

/// The diagram [`nf_extend`] starts from: the picture beside a unit spider.
pub fn nf_extend_input(nf: &NormalForm) -> Diagram {
    build_extend(nf).0
}

/// Add an output on which the coefficients do not depend.
pub fn nf_extend(nf: &NormalForm) -> Result<(NormalForm, Trace)> {
    let (d, r, dot) = build_extend(nf);
    let mut eng = start(&d);
    let r = eng.extend(r, dot)?;
    conclude(eng, r, 0)
}

fn build_schur(a: &NormalForm, b: &NormalForm) -> Result<(Diagram, Region, Region)> {
    if a.n_outputs != b.n_outputs {
        return Err(Error::BoundaryMismatch(format!("{} and {} outputs", a.n_outputs, b.n_outputs)));
    }
    let n = a.n_outputs;
    let mut d = Diagram::new(0, n);
    let ra = picture(&mut d, a, &|_| None);
    let rb = picture(&mut d, b, &|_| None);
    let mut zs = Vec::with_capacity(n);
    for j in 0..n {
        let z = d.add_z();
        d.add_wire(End::Vertex(ra.spiders[j]), End::Vertex(z));
        d.add_wire(End::Vertex(rb.spiders[j]), End::Vertex(z));
        d.add_wire(End::Vertex(z), End::Output(j));
        zs.push(z);
    }
    Ok((d, Region { spiders: zs.clone(), boxes: ra.boxes }, Region { spiders: zs, boxes: rb.boxes }))
}

/// The diagram [`nf_schur`] starts from: both pictures meeting in spiders.
pub fn nf_schur_input(a: &NormalForm, b: &NormalForm) -> Result<Diagram> {
    Ok(build_schur(a, b)?.0)
}

/// Pointwise product of coefficients.
pub fn nf_schur(a: &NormalForm, b: &NormalForm) -> Result<(NormalForm, Trace)> {
    let (d, ra, rb) = build_schur(a, b)?;
    let mut eng = start(&d);
    let n = a.n_outputs;
    // The picture spiders sit between each meeting spider and the boxes.
    let pa: Vec<VertexId> = picture_spiders(&d, &ra, n);
    let pb: Vec<VertexId> = picture_spiders(&d, &rb, n);
    for j in 0..n {
        eng.fuse(ra.spiders[j], pa[j])?;
        eng.fuse(ra.spiders[j], pb[j])?;
    }
    let r = eng.schur(ra, rb)?;
    conclude(eng, r, 0)
}

/// Spider of each picture next to meeting spider `j`.
fn picture_spiders(d: &Diagram, r: &Region, n: usize) -> Vec<VertexId> {
    let boxes: std::collections::BTreeSet<VertexId> = r.boxes.iter().copied().collect();
    (0..n)
        .map(|j| {
            let z = r.spiders[j];
            d.neighbours(End::Vertex(z))
                .into_iter()
                .filter_map(End::vertex)
                .find(|&s| {
                    d.kind(s) == Some(&Kind::Z)
                        && d.neighbours(End::Vertex(s)).into_iter().filter_map(End::vertex).any(|v| {
                            boxes.contains(&v)
                                || d.neighbours(End::Vertex(v))
                                    .into_iter()
                                    .any(|e| e.vertex().is_some_and(|u| boxes.contains(&u)))
                        })
                })
                .expect("meeting spider touches its picture")
        })
        .collect()
}

fn build_tensor(a: &NormalForm, b: &NormalForm) -> (Diagram, Region, Region) {
    let na = a.n_outputs;
    let mut d = Diagram::new(0, na + b.n_outputs);
    let ra = picture(&mut d, a, &|j| Some(End::Output(j)));
    let rb = picture(&mut d, b, &|j| Some(End::Output(na + j)));
    (d, ra, rb)
}

/// The diagram [`nf_tensor`] starts from: both pictures side by side.
pub fn nf_tensor_input(a: &NormalForm, b: &NormalForm) -> Diagram {
    build_tensor(a, b).0
}

/// Coefficients `a_b · a'_c` at `bc`.
pub fn nf_tensor(a: &NormalForm, b: &NormalForm) -> Result<(NormalForm, Trace)> {
    let (d, ra, rb) = build_tensor(a, b);
    let mut eng = start(&d);
    let r = eng.join(ra, rb, &[], false)?;
    conclude(eng, r, 0)
}

fn build_contract(nf: &NormalForm, i: usize) -> Result<(Diagram, Region, VertexId)> {
    check_output(nf, i)?;
    let mut d = Diagram::new(0, nf.n_outputs - 1);
    let dot = d.add_z();
    let r = picture(&mut d, nf, &|j| match j.cmp(&i) {
        std::cmp::Ordering::Less => Some(End::Output(j)),
        std::cmp::Ordering::Equal => Some(End::Vertex(dot)),
        std::cmp::Ordering::Greater => Some(End::Output(j - 1)),
    });
    Ok((d, r, dot))
}

/// The diagram [`nf_contract`] starts from: output `i` capped by a unit spider.
pub fn nf_contract_input(nf: &NormalForm, i: usize) -> Result<Diagram> {
    Ok(build_contract(nf, i)?.0)
}

/// Sum over output `i`: `a'_b = a_{b0} + a_{b1}` with the bit at `i`.
pub fn nf_contract(nf: &NormalForm, i: usize) -> Result<(NormalForm, Trace)> {
    let (d, r, dot) = build_contract(nf, i)?;
    let mut eng = start(&d);
    eng.fuse(r.spiders[i], dot)?;
    let r = eng.contract(r, i)?;
    conclude(eng, r, 0)
}

fn check_pair(nf: &NormalForm, i: usize, j: usize) -> Result<()> {
    check_output(nf, i)?;
    check_output(nf, j)?;
    if i == j {
        return Err(Error::NoOutput(format!("outputs {i} and {j} coincide")));
    }
    Ok(())
}

fn build_plug_mult(nf: &NormalForm, i: usize, j: usize) -> Result<(Diagram, Region, VertexId)> {
    check_pair(nf, i, j)?;
    let (lo, hi) = (i.min(j), i.max(j));
    let mut d = Diagram::new(0, nf.n_outputs - 1);
    let z = d.add_z();
    let r = picture(&mut d, nf, &|k| {
        if k == i || k == j {
            Some(End::Vertex(z))
        } else if k > hi {
            Some(End::Output(k - 1))
        } else {
            Some(End::Output(k))
        }
    });
    d.add_wire(End::Vertex(z), End::Output(lo));
    Ok((d, r, z))
}

/// The diagram [`nf_plug_mult`] starts from: outputs `i` and `j` meeting
/// in a spider whose third leg takes the place of the lower one.
pub fn nf_plug_mult_input(nf: &NormalForm, i: usize, j: usize) -> Result<Diagram> {
    Ok(build_plug_mult(nf, i, j)?.0)
}

/// Join outputs `i` and `j` into one: keeps coefficients where the two
/// bits agree. The merged output sits at the lower index.
pub fn nf_plug_mult(nf: &NormalForm, i: usize, j: usize) -> Result<(NormalForm, Trace)> {
    let (d, r, z) = build_plug_mult(nf, i, j)?;
    let mut eng = start(&d);
    let q = eng.z_region(z)?;
    let pairs = eng.pairs(&r, &q);
    let r = eng.join(r, q, &pairs, true)?;
    conclude(eng, r, 0)
}

fn build_cap(nf: &NormalForm, i: usize, j: usize) -> Result<(Diagram, Region, usize)> {
    check_pair(nf, i, j)?;
    let mut d = Diagram::new(0, nf.n_outputs - 2);
    let r = picture(&mut d, nf, &|k| {
        if k == i || k == j {
            None
        } else {
            Some(End::Output(k - usize::from(k > i) - usize::from(k > j)))
        }
    });
    let w = d.add_wire(End::Vertex(r.spiders[i]), End::Vertex(r.spiders[j]));
    Ok((d, r, w))
}

/// The diagram [`nf_cap`] starts from: outputs `i` and `j` wired together.
pub fn nf_cap_input(nf: &NormalForm, i: usize, j: usize) -> Result<Diagram> {
    Ok(build_cap(nf, i, j)?.0)
}

/// Close outputs `i` and `j` with a cap.
pub fn nf_cap(nf: &NormalForm, i: usize, j: usize) -> Result<(NormalForm, Trace)> {
    let (d, r, w) = build_cap(nf, i, j)?;
    let mut eng = start(&d);
    let c = eng.cup_region(w)?;
    let pairs = eng.pairs(&r, &c);
    let r = eng.join(r, c, &pairs, true)?;
    conclude(eng, r, 0)
}

/// Whether two diagrams denote the same map, with both derivations.
pub fn equal(d1: &Diagram, d2: &Diagram) -> Result<(bool, Trace, Trace)> {
    equal_tol(d1, d2, crate::scalar::APPROX_TOL)
}

/// As [`equal`]; coefficients involving approximate labels agree within `tol`.
pub fn equal_tol(d1: &Diagram, d2: &Diagram, tol: f64) -> Result<(bool, Trace, Trace)> {
    if (d1.n_inputs(), d1.n_outputs()) != (d2.n_inputs(), d2.n_outputs()) {
        return Err(Error::BoundaryMismatch(format!(
            "{}→{} against {}→{}",
            d1.n_inputs(),
            d1.n_outputs(),
            d2.n_inputs(),
            d2.n_outputs()
        )));
    }
    let (a, t1) = normalize(d1)?;
    let (b, t2) = normalize(d2)?;
    let same = a.coeffs.iter().zip(&b.coeffs).all(|(x, y)| x.eq_tol(y, tol));
    Ok((same, t1, t2))
}
