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

//! The standard interpretation of diagrams as tensors.
//!
//! Z-spiders are folded into variable classes up front (a spider forces
//! all its legs equal), so contraction only ever handles H-box tables.
//! Remaining internal variables are summed out greedily, always picking the
//! variable whose elimination produces the smallest intermediate table,
//! ties broken by the lowest variable id.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;

use crate::diagram::{Diagram, End, Kind};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, APPROX_TOL};

/// Size limits for [`eval_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalLimits {
    /// Maximum number of boundary wires.
    pub max_boundary: usize,
    /// Maximum number of variables in any intermediate table.
    pub max_width: usize,
}

impl Default for EvalLimits {
    fn default() -> Self {
        EvalLimits { max_boundary: 12, max_width: 24 }
    }
}

/// A dense tensor indexed by (output bits, input bits).
///
/// Entry `(o, i)` sits at `o * 2^m + i`, where `m` is the number of inputs
/// and boundary slot 0 is the most significant bit of its half.
#[derive(Clone, Debug)]
pub struct Tensor {
    n_inputs: usize,
    n_outputs: usize,
    entries: Vec<Scalar>,
}

impl Tensor {
    pub fn from_entries(n_inputs: usize, n_outputs: usize, entries: Vec<Scalar>) -> Result<Tensor> {
        let want = 1usize << (n_inputs + n_outputs);
        if entries.len() != want {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {n_inputs}→{n_outputs} tensor, expected {want}",
                entries.len()
            )));
        }
        Ok(Tensor { n_inputs, n_outputs, entries })
    }

    /// A state (no inputs) from its amplitudes.
    pub fn state(entries: Vec<Scalar>) -> Result<Tensor> {
        let n = entries.len();
        if !n.is_power_of_two() {
            return Err(Error::BadShape(n));
        }
        Self::from_entries(0, n.trailing_zeros() as usize, entries)
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.entries
    }

    pub fn get(&self, out_bits: usize, in_bits: usize) -> &Scalar {
        &self.entries[(out_bits << self.n_inputs) | in_bits]
    }

    /// True if any entry is approximate.
    pub fn is_approx(&self) -> bool {
        self.entries.iter().any(|s| !s.is_exact())
    }

    /// `self` then `next`, i.e. the matrix product `next · self`.
    pub fn then(&self, next: &Tensor) -> Result<Tensor> {
        if self.n_outputs != next.n_inputs {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {} outputs into {} inputs",
                self.n_outputs, next.n_inputs
            )));
        }
        let (m, k, n) = (self.n_inputs, self.n_outputs, next.n_outputs);
        let mut out = vec![Scalar::zero(); 1 << (m + n)];
        for o in 0..1usize << n {
            for i in 0..1usize << m {
                let mut acc = Scalar::zero();
                for j in 0..1usize << k {
                    let a = next.get(o, j);
                    let b = self.get(j, i);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                out[(o << m) | i] = acc;
            }
        }
        Tensor::from_entries(m, n, out)
    }

    /// Kronecker product; `self` occupies the high bits of each half.
    pub fn kron(&self, other: &Tensor) -> Tensor {
        let (m1, n1, m2, n2) = (self.n_inputs, self.n_outputs, other.n_inputs, other.n_outputs);
        let mut out = vec![Scalar::zero(); 1 << (m1 + n1 + m2 + n2)];
        for o1 in 0..1usize << n1 {
            for i1 in 0..1usize << m1 {
                let a = self.get(o1, i1);
                for o2 in 0..1usize << n2 {
                    for i2 in 0..1usize << m2 {
                        let o = (o1 << n2) | o2;
                        let i = (i1 << m2) | i2;
                        out[(o << (m1 + m2)) | i] = a * other.get(o2, i2);
                    }
                }
            }
        }
        Tensor { n_inputs: m1 + m2, n_outputs: n1 + n2, entries: out }
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        Tensor {
            n_inputs: self.n_inputs,
            n_outputs: self.n_outputs,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    /// The state obtained by bending inputs into outputs, matching
    /// [`Diagram::bend_to_state`]: reversed inputs first, then outputs.
    pub fn bend_to_state(&self) -> Tensor {
        let (m, n) = (self.n_inputs, self.n_outputs);
        let mut out = vec![Scalar::zero(); self.entries.len()];
        for o in 0..1usize << n {
            for i in 0..1usize << m {
                let rev = reverse_bits(i, m);
                out[(rev << n) | o] = self.get(o, i).clone();
            }
        }
        Tensor { n_inputs: 0, n_outputs: m + n, entries: out }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "inputs": self.n_inputs,
            "outputs": self.n_outputs,
            "approx": self.is_approx(),
            "entries": self.entries.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn reverse_bits(x: usize, width: usize) -> usize {
    (0..width).fold(0, |acc, k| acc | (((x >> k) & 1) << (width - 1 - k)))
}

impl PartialEq for Tensor {
    fn eq(&self, other: &Tensor) -> bool {
        tensor_equal(self, other, false).unwrap_or(false)
    }
}

/// Entrywise equality: exact for exact entries, within `1e-9` otherwise.
/// With `up_to_scalar`, a single nonzero global factor is allowed.
pub fn tensor_equal(t1: &Tensor, t2: &Tensor, up_to_scalar: bool) -> Result<bool> {
    tensor_equal_tol(t1, t2, up_to_scalar, APPROX_TOL)
}

pub fn tensor_equal_tol(t1: &Tensor, t2: &Tensor, up_to_scalar: bool, tol: f64) -> Result<bool> {
    if (t1.n_inputs, t1.n_outputs) != (t2.n_inputs, t2.n_outputs) {
        return Err(Error::ShapeMismatch(format!(
            "{}→{} vs {}→{}",
            t1.n_inputs, t1.n_outputs, t2.n_inputs, t2.n_outputs
        )));
    }
    if !up_to_scalar {
        return Ok(t1.entries.iter().zip(&t2.entries).all(|(a, b)| a.eq_tol(b, tol)));
    }
    let pivot = t1.entries.iter().position(|a| !a.is_zero());
    let Some(p) = pivot else {
        return Ok(t2.entries.iter().all(Scalar::is_zero));
    };
    if t2.entries[p].is_zero() {
        return Ok(false);
    }
    // t2 = c · t1 with c = t2[p] / t1[p]; compare t1[p]·t2[k] with t2[p]·t1[k]
    let (a, b) = (&t1.entries[p], &t2.entries[p]);
    Ok(t1.entries.iter().zip(&t2.entries).all(|(x, y)| (a * y).eq_tol(&(b * x), tol)))
}

#[derive(Clone)]
struct Factor {
    vars: Vec<usize>,
    data: Vec<Scalar>,
}

impl Factor {
    fn width(&self) -> usize {
        self.vars.len()
    }
}

fn union_find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

pub fn eval(d: &Diagram) -> Result<Tensor> {
    eval_with(d, EvalLimits::default())
}

pub fn eval_with(d: &Diagram, limits: EvalLimits) -> Result<Tensor> {
    let boundary = d.n_inputs() + d.n_outputs();
    if boundary > limits.max_boundary {
        return Err(Error::TooLarge(format!("{boundary} boundary wires exceed the limit of {}", limits.max_boundary)));
    }
    let net = Network::build(d)?;
    let slot_class = net.slot_class.clone();
    let open: BTreeSet<usize> = slot_class.iter().copied().collect();
    let (global, final_factor) = net.eliminate(&open, limits)?;

    let (m, n) = (d.n_inputs(), d.n_outputs());
    let total = m + n;
    let pos: BTreeMap<usize, usize> = final_factor.vars.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut entries = Vec::with_capacity(1 << total);
    'entry: for idx in 0..1usize << total {
        // idx = out_bits << m | in_bits; slot order is inputs then outputs.
        let bit_of_slot = |s: usize| -> usize {
            if s < m {
                (idx >> (m - 1 - s)) & 1
            } else {
                (idx >> (m + n - 1 - (s - m))) & 1
            }
        };
        let mut assign: BTreeMap<usize, usize> = BTreeMap::new();
        for (s, &c) in slot_class.iter().enumerate() {
            let b = bit_of_slot(s);
            if let Some(&prev) = assign.get(&c) {
                if prev != b {
                    entries.push(Scalar::zero());
                    continue 'entry;
                }
            } else {
                assign.insert(c, b);
            }
        }
        let mut fidx = 0;
        for (&c, &b) in &assign {
            if let Some(&k) = pos.get(&c) {
                fidx |= b << k;
            }
        }
        entries.push(&global * &final_factor.data[fidx]);
    }
    Tensor::from_entries(m, n, entries)
}

/// One entry of the tensor with every boundary slot fixed. `bits` lists
/// inputs then outputs. The boundary size is not limited.
pub fn eval_entry(d: &Diagram, bits: &[bool], limits: EvalLimits) -> Result<Scalar> {
    EntryEvaluator::new(d)?.entry(bits, limits)
}

/// Evaluates many single entries of one diagram without rebuilding its network.
pub struct EntryEvaluator {
    net: Network,
    boundary: usize,
}

impl EntryEvaluator {
    pub fn new(d: &Diagram) -> Result<EntryEvaluator> {
        Ok(EntryEvaluator { net: Network::build(d)?, boundary: d.n_inputs() + d.n_outputs() })
    }

    pub fn entry(&self, bits: &[bool], limits: EvalLimits) -> Result<Scalar> {
        if bits.len() != self.boundary {
            return Err(Error::ShapeMismatch(format!("{} bits for {} boundary slots", bits.len(), self.boundary)));
        }
        let mut fixed: BTreeMap<usize, usize> = BTreeMap::new();
        for (&c, &b) in self.net.slot_class.iter().zip(bits) {
            if *fixed.entry(c).or_insert(b as usize) != b as usize {
                return Ok(Scalar::zero());
            }
        }
        let mut net = self.net.clone();
        for f in &mut net.factors {
            let f = f.as_mut().unwrap();
            if f.vars.iter().any(|v| fixed.contains_key(v)) {
                *f = f.restrict(&fixed);
            }
        }
        let skip: BTreeSet<usize> = fixed.keys().copied().collect();
        let (global, f) = net.eliminate(&skip, limits)?;
        Ok(&global * &f.data[0])
    }
}

#[derive(Clone)]
struct Network {
    global: Scalar,
    factors: Vec<Option<Factor>>,
    slot_class: Vec<usize>,
    all_classes: BTreeSet<usize>,
}

impl Network {
    fn build(d: &Diagram) -> Result<Network> {
        let wire_ids: Vec<usize> = d.wires().map(|(w, _, _)| w).collect();
        let index: BTreeMap<usize, usize> = wire_ids.iter().enumerate().map(|(k, &w)| (w, k)).collect();
        let mut parent: Vec<usize> = (0..wire_ids.len()).collect();
        let mut global = Scalar::one();
        for (v, kind) in d.vertices() {
            if kind.is_z() {
                let inc = d.incident(End::Vertex(v));
                if inc.is_empty() {
                    global = &global * &Scalar::int(2);
                }
                for pair in inc.windows(2) {
                    let a = union_find(&mut parent, index[&pair[0]]);
                    let b = union_find(&mut parent, index[&pair[1]]);
                    parent[a] = b;
                }
            }
        }
        let class = |parent: &mut Vec<usize>, w: usize| union_find(parent, index[&w]);

        let mut factors: Vec<Option<Factor>> = Vec::new();
        for (v, kind) in d.vertices() {
            if let Kind::H(a) = kind {
                let inc = d.incident(End::Vertex(v));
                if inc.is_empty() {
                    global = &global * a;
                    continue;
                }
                let vars: BTreeSet<usize> = inc.iter().map(|&w| class(&mut parent, w)).collect();
                let vars: Vec<usize> = vars.into_iter().collect();
                let size = 1usize << vars.len();
                let mut data = vec![Scalar::one(); size];
                data[size - 1] = a.clone();
                factors.push(Some(Factor { vars, data }));
            }
        }
        let slot_class: Vec<usize> = d
            .inputs()
            .chain(d.outputs())
            .map(|e| {
                let w = d
                    .boundary_wire(e)
                    .ok_or_else(|| Error::BoundaryMismatch(format!("boundary slot {e:?} has no wire")))?;
                Ok(class(&mut parent, w))
            })
            .collect::<Result<_>>()?;
        let all_classes: BTreeSet<usize> = (0..wire_ids.len()).map(|k| union_find(&mut parent, k)).collect();
        Ok(Network { global, factors, slot_class, all_classes })
    }

    /// Sum out every class outside `open`; returns the global scalar and
    /// one factor over the open classes that any box touches.
    fn eliminate(self, open: &BTreeSet<usize>, limits: EvalLimits) -> Result<(Scalar, Factor)> {
        let Network { mut global, mut factors, all_classes, .. } = self;
        let mut touching: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for (fi, f) in factors.iter().enumerate() {
            for &x in &f.as_ref().unwrap().vars {
                touching.entry(x).or_default().insert(fi);
            }
        }
        // Internal classes that no H-box touches are free sums: a factor of 2 each.
        for &c in &all_classes {
            if !open.contains(&c) && !touching.contains_key(&c) {
                global = &global * &Scalar::int(2);
            }
        }
        let internal: BTreeSet<usize> = touching.keys().copied().filter(|c| !open.contains(c)).collect();
        let width = |touching: &BTreeMap<usize, BTreeSet<usize>>, factors: &[Option<Factor>], x: usize| {
            let mut vars = BTreeSet::new();
            for &fi in &touching[&x] {
                vars.extend(factors[fi].as_ref().unwrap().vars.iter().copied());
            }
            vars.len() - 1
        };
        // Min-width order, ties to the lowest class.
        let mut cur: BTreeMap<usize, usize> = internal.iter().map(|&x| (x, width(&touching, &factors, x))).collect();
        let mut queue: BTreeSet<(usize, usize)> = cur.iter().map(|(&x, &w)| (w, x)).collect();
        while let Some((w, x)) = queue.pop_first() {
            if w > limits.max_width {
                return Err(Error::TooLarge(format!(
                    "contraction needs a table over {w} variables (limit {})",
                    limits.max_width
                )));
            }
            cur.remove(&x);
            let ids: Vec<usize> = touching.remove(&x).unwrap().into_iter().collect();
            let group: Vec<Factor> = ids.iter().map(|&fi| factors[fi].take().unwrap()).collect();
            for f in &group {
                for v in &f.vars {
                    if let Some(s) = touching.get_mut(v) {
                        for fi in &ids {
                            s.remove(fi);
                        }
                    }
                }
            }
            let merged = multiply(&group, Some(x));
            let fi = factors.len();
            for &v in &merged.vars {
                touching.entry(v).or_default().insert(fi);
            }
            let affected = merged.vars.clone();
            factors.push(Some(merged));
            for v in affected {
                if let Some(old) = cur.get(&v).copied() {
                    let nw = width(&touching, &factors, v);
                    queue.remove(&(old, v));
                    queue.insert((nw, v));
                    cur.insert(v, nw);
                }
            }
        }
        let rest: Vec<Factor> = factors.into_iter().flatten().collect();
        Ok((global, multiply(&rest, None)))
    }
}

impl Factor {
    /// Slice out the variables fixed by `fixed`.
    fn restrict(&self, fixed: &BTreeMap<usize, usize>) -> Factor {
        let kept: Vec<usize> = self.vars.iter().copied().filter(|v| !fixed.contains_key(v)).collect();
        let mut base = 0;
        for (k, v) in self.vars.iter().enumerate() {
            if let Some(&b) = fixed.get(v) {
                base |= b << k;
            }
        }
        let free: Vec<usize> = (0..self.vars.len()).filter(|&k| !fixed.contains_key(&self.vars[k])).collect();
        let data = (0..1usize << kept.len())
            .map(|idx| {
                let mut full = base;
                for (j, &k) in free.iter().enumerate() {
                    full |= ((idx >> j) & 1) << k;
                }
                self.data[full].clone()
            })
            .collect();
        Factor { vars: kept, data }
    }
}

/// Pointwise product of `group`, summing out `sum_var` if given.
fn multiply(group: &[Factor], sum_var: Option<usize>) -> Factor {
    let vars: BTreeSet<usize> = group.iter().flat_map(|f| f.vars.iter().copied()).collect();
    let vars: Vec<usize> = vars.into_iter().collect();
    let pos: BTreeMap<usize, usize> = vars.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let maps: Vec<Vec<usize>> = group.iter().map(|f| f.vars.iter().map(|v| pos[v]).collect()).collect();
    let full = 1usize << vars.len();
    let mut prod = Vec::with_capacity(full);
    for idx in 0..full {
        let mut acc = Scalar::one();
        for (f, map) in group.iter().zip(&maps) {
            let mut sub = 0;
            for (k, &p) in map.iter().enumerate() {
                sub |= ((idx >> p) & 1) << k;
            }
            let val = &f.data[sub];
            if val.is_one() {
                continue;
            }
            acc = &acc * val;
            if acc.is_zero() {
                break;
            }
        }
        prod.push(acc);
    }
    let Some(x) = sum_var else {
        return Factor { vars, data: prod };
    };
    let px = pos[&x];
    let kept: Vec<usize> = vars.iter().copied().filter(|&v| v != x).collect();
    let mut data = Vec::with_capacity(full / 2);
    for idx in 0..full / 2 {
        let low = idx & ((1 << px) - 1);
        let high = (idx >> px) << (px + 1);
        let i0 = high | low;
        let i1 = i0 | (1 << px);
        data.push(&prod[i0] + &prod[i1]);
    }
    let f = Factor { vars: kept, data };
    debug_assert_eq!(f.data.len(), 1 << f.width());
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::int(x)).collect()
    }

    #[test]
    fn z_one_to_one_is_identity() {
        let t = eval(&Diagram::z_spider(1, 1)).unwrap();
        assert_eq!(t.entries(), ints(&[1, 0, 0, 1]).as_slice());
    }

    #[test]
    fn h_state_has_minus_one_corner() {
        let t = eval(&Diagram::h_box(0, 2, Scalar::int(-1))).unwrap();
        assert_eq!(t.entries(), ints(&[1, 1, 1, -1]).as_slice());
    }

    #[test]
    fn cup_is_bell_state() {
        let t = eval(&Diagram::cup()).unwrap();
        assert_eq!(t.entries(), ints(&[1, 0, 0, 1]).as_slice());
    }

    #[test]
    fn zero_legged_generators_are_scalars() {
        assert_eq!(eval(&Diagram::z_spider(0, 0)).unwrap().entries(), ints(&[2]).as_slice());
        assert_eq!(eval(&Diagram::scalar(Scalar::int(5))).unwrap().entries(), ints(&[5]).as_slice());
        assert_eq!(eval(&Diagram::empty()).unwrap().entries(), ints(&[1]).as_slice());
    }

    #[test]
    fn h_squared_is_twice_identity() {
        let h = Diagram::h_box(1, 1, Scalar::int(-1));
        let t = eval(&h.compose(&h).unwrap()).unwrap();
        assert_eq!(t.entries(), ints(&[2, 0, 0, 2]).as_slice());
    }

    #[test]
    fn scalar_boxes_multiply_under_tensor() {
        let d = Diagram::scalar(Scalar::int(3)).tensor(&Diagram::scalar(Scalar::frac(1, 6)));
        assert_eq!(eval(&d).unwrap().entries()[0], Scalar::frac(1, 2));
    }

    #[test]
    fn self_loop_is_a_trace() {
        let mut d = Diagram::new(0, 1);
        let h = d.add_h(Scalar::int(3));
        d.add_wire(End::Vertex(h), End::Vertex(h));
        d.add_wire(End::Vertex(h), End::Output(0));
        // Σ_x 3^{x·o·x}... legs (x, x, o): entry 3 iff x = o = 1
        assert_eq!(eval(&d).unwrap().entries(), ints(&[2, 4]).as_slice());
    }

    #[test]
    fn equal_up_to_scalar() {
        let a = Tensor::state(ints(&[1, 1, 1, -1])).unwrap();
        let b = Tensor::state(ints(&[2, 2, 2, -2])).unwrap();
        assert!(!tensor_equal(&a, &b, false).unwrap());
        assert!(tensor_equal(&a, &b, true).unwrap());
        assert!(tensor_equal(&a, &a, false).unwrap());
        let c = Tensor::state(ints(&[1, 1])).unwrap();
        assert!(matches!(tensor_equal(&a, &c, true), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn single_entries_agree_with_full_eval() {
        let mut d = Diagram::new(1, 2);
        let h = d.add_h(Scalar::int(3));
        let z = d.add_z();
        d.add_wire(End::Input(0), End::Vertex(h));
        d.add_wire(End::Vertex(h), End::Vertex(z));
        d.add_wire(End::Vertex(z), End::Output(0));
        d.add_wire(End::Vertex(z), End::Output(1));
        let t = eval(&d).unwrap();
        for idx in 0..8usize {
            let bits: Vec<bool> = (0..3).map(|s| (idx >> (2 - s)) & 1 == 1).collect();
            let (inp, out) = (idx >> 2, idx & 3);
            let e = eval_entry(&d, &bits, EvalLimits::default()).unwrap();
            assert_eq!(&e, t.get(out, inp));
        }
    }

    #[test]
    fn too_many_boundary_wires() {
        let d = Diagram::z_spider(0, 13);
        assert!(matches!(eval(&d), Err(Error::TooLarge(_))));
    }

    #[test]
    fn approx_labels_flag_tensor() {
        let t = eval(&Diagram::h_box(0, 1, Scalar::approx(0.5, 0.0))).unwrap();
        assert!(t.is_approx());
    }

    #[test]
    fn bending_reorders_entries() {
        let d = Diagram::h_box(2, 1, Scalar::int(7));
        let direct = eval(&d.bend_to_state()).unwrap();
        assert_eq!(direct, eval(&d).unwrap().bend_to_state());
    }
}
