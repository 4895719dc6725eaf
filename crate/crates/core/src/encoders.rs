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

//! Diagrams for familiar objects: ZX generators, Boolean gates, hypergraph
//! states and phase-polynomial unitaries.
//!
//! Every encoder fixes its global scalar so that the stated matrix comes out
//! exactly; the scalar used is given in each function's documentation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;

use crate::diagram::{add_grey, add_not, Diagram, End, VertexId};
use crate::error::{Error, Result};
use crate::scalar::{field_order, Cyclo, Scalar};
use crate::semantics::{eval, tensor_equal};

/// `exp(iπ·alpha)`, exact when the field of the configured order holds it.
pub fn phase_label(alpha: Rational64) -> Scalar {
    let (p, q) = (*alpha.numer(), *alpha.denom());
    let k = field_order();
    let room = 1i64 << (k - 1);
    if room % q == 0 {
        Scalar::Exact(Cyclo::zeta_pow(k, p * (room / q)))
    } else {
        let t = std::f64::consts::PI * p as f64 / q as f64;
        Scalar::approx(t.cos(), t.sin())
    }
}

/// `1/√2` raised to `k`, exact when `k` is even or `√2` is in the field.
fn inv_sqrt2_pow(k: usize) -> Scalar {
    let half = Scalar::frac(1, 2).pow((k / 2) as u32);
    if k.is_multiple_of(2) {
        return half;
    }
    match Scalar::sqrt2() {
        Ok(r) => &(&r * &Scalar::frac(1, 2)) * &half,
        Err(_) => &Scalar::approx(std::f64::consts::FRAC_1_SQRT_2, 0.0) * &half,
    }
}

/// A ZX-calculus generator. Phases are multiples of π.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZxGenerator {
    Green { m: usize, n: usize, phase: Rational64 },
    Red { m: usize, n: usize, phase: Rational64 },
    Hadamard,
}

fn add_phase_leg(d: &mut Diagram, z: VertexId, phase: Rational64) {
    if *phase.numer() != 0 {
        let h = d.add_h(phase_label(phase));
        d.add_wire(End::Vertex(z), End::Vertex(h));
    }
}

/// Translate a ZX generator into ZH.
///
/// A green spider is a Z-spider carrying an arity-1 H-box `exp(iα)` (omitted
/// when α = 0). The Hadamard is a 2-ary H-box with scalar `1/√2`. A red
/// spider is a green spider with a Hadamard on each of its `m + n` legs,
/// giving scalar `(1/√2)^(m+n)`.
pub fn zx_generator(g: ZxGenerator) -> Diagram {
    match g {
        ZxGenerator::Green { m, n, phase } => {
            let mut d = Diagram::new(m, n);
            let z = d.add_z();
            let legs: Vec<End> = d.inputs().chain(d.outputs()).collect();
            for e in legs {
                d.add_wire(e, End::Vertex(z));
            }
            add_phase_leg(&mut d, z, phase);
            d
        }
        ZxGenerator::Red { m, n, phase } => {
            let mut d = Diagram::new(m, n);
            let z = d.add_z();
            let legs: Vec<End> = d.inputs().chain(d.outputs()).collect();
            for e in legs {
                let h = d.add_h(Scalar::int(-1));
                d.add_wire(e, End::Vertex(h));
                d.add_wire(End::Vertex(h), End::Vertex(z));
            }
            add_phase_leg(&mut d, z, phase);
            if m + n > 0 {
                d.add_h(inv_sqrt2_pow(m + n));
            }
            d
        }
        ZxGenerator::Hadamard => {
            let mut d = Diagram::h_box(1, 1, Scalar::int(-1));
            d.add_h(inv_sqrt2_pow(1));
            d
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    And,
    Not,
    Xor,
    Toffoli,
    Ccz,
    /// Z controlled on the other `n - 1` qubits; acts on `n` qubits.
    Cnz(usize),
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::And => write!(f, "and"),
            Gate::Not => write!(f, "not"),
            Gate::Xor => write!(f, "xor"),
            Gate::Toffoli => write!(f, "toffoli"),
            Gate::Ccz => write!(f, "ccz"),
            Gate::Cnz(n) => write!(f, "cnz{n}"),
        }
    }
}

impl FromStr for Gate {
    type Err = Error;

    /// `and`, `not`, `xor`, `toffoli`, `ccz`, or `cnz<N>` (also `cnz:<N>`).
    fn from_str(s: &str) -> Result<Gate> {
        let s = s.trim().to_ascii_lowercase();
        Ok(match s.as_str() {
            "and" => Gate::And,
            "not" => Gate::Not,
            "xor" => Gate::Xor,
            "toffoli" | "ccx" => Gate::Toffoli,
            "ccz" => Gate::Ccz,
            _ => {
                let n = s
                    .strip_prefix("cnz")
                    .map(|r| r.trim_start_matches(':'))
                    .and_then(|r| r.parse().ok())
                    .ok_or_else(|| Error::BadParams(format!("unknown gate `{s}`")))?;
                Gate::Cnz(n)
            }
        })
    }
}

/// `n` through-wires, each carrying a Z-spider. Returns the spiders.
fn through_spiders(d: &mut Diagram, n: usize) -> Vec<VertexId> {
    (0..n)
        .map(|j| {
            let z = d.add_z();
            d.add_wire(End::Input(j), End::Vertex(z));
            d.add_wire(End::Vertex(z), End::Output(j));
            z
        })
        .collect()
}

/// Attach a fresh H-box with `label` to each vertex in `on`.
fn add_hyperedge(d: &mut Diagram, on: &[VertexId], label: Scalar) -> VertexId {
    let h = d.add_h(label);
    for &v in on {
        d.add_wire(End::Vertex(v), End::Vertex(h));
    }
    h
}

/// Encode a gate as a diagram whose evaluation is its matrix exactly.
///
/// Scalars: AND and XOR carry `1/2`; NOT carries `1/2`; controlled-Z gates
/// need none; Toffoli carries a single `1/2` for its two target Hadamards.
pub fn logic_gate(g: Gate) -> Result<Diagram> {
    Ok(match g {
        Gate::And => {
            let mut d = Diagram::new(2, 1);
            let meet = d.add_h(Scalar::int(-1));
            let out = d.add_h(Scalar::int(-1));
            d.add_wire(End::Input(0), End::Vertex(meet));
            d.add_wire(End::Input(1), End::Vertex(meet));
            d.add_wire(End::Vertex(meet), End::Vertex(out));
            d.add_wire(End::Vertex(out), End::Output(0));
            d.add_h(Scalar::frac(1, 2));
            d
        }
        Gate::Not => {
            let mut d = Diagram::new(1, 1);
            add_not(&mut d, End::Input(0), End::Output(0));
            d
        }
        Gate::Xor => {
            let mut d = Diagram::new(2, 1);
            add_grey(&mut d, &[End::Input(0), End::Input(1), End::Output(0)]);
            d
        }
        Gate::Ccz => logic_gate(Gate::Cnz(3))?,
        Gate::Cnz(0) => return Err(Error::BadParams("CNZ needs at least one qubit".into())),
        Gate::Cnz(n) => {
            let mut d = Diagram::new(n, n);
            let zs = through_spiders(&mut d, n);
            add_hyperedge(&mut d, &zs, Scalar::int(-1));
            d
        }
        Gate::Toffoli => {
            let mut d = Diagram::new(3, 3);
            let mut zs = Vec::new();
            for j in 0..2 {
                let z = d.add_z();
                d.add_wire(End::Input(j), End::Vertex(z));
                d.add_wire(End::Vertex(z), End::Output(j));
                zs.push(z);
            }
            let (pre, t, post) = (d.add_h(Scalar::int(-1)), d.add_z(), d.add_h(Scalar::int(-1)));
            d.add_wire(End::Input(2), End::Vertex(pre));
            d.add_wire(End::Vertex(pre), End::Vertex(t));
            d.add_wire(End::Vertex(t), End::Vertex(post));
            d.add_wire(End::Vertex(post), End::Output(2));
            zs.push(t);
            add_hyperedge(&mut d, &zs, Scalar::int(-1));
            d.add_h(Scalar::frac(1, 2));
            d
        }
    })
}

/// A hypergraph on vertices `0..n`. Hyperedges are sorted vertex lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: BTreeSet<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Hypergraph> {
        let mut set = BTreeSet::new();
        for mut e in edges {
            e.sort_unstable();
            e.dedup();
            if e.is_empty() {
                return Err(Error::BadParams("empty hyperedge".into()));
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(Error::BadParams(format!("hyperedge vertex {v} out of range for {n} vertices")));
            }
            if !set.insert(e.clone()) {
                return Err(Error::BadParams(format!("duplicate hyperedge {e:?}")));
            }
        }
        Ok(Hypergraph { n, edges: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.edges.iter()
    }

    /// Hyperedges with the vertex removed, for every hyperedge containing it.
    fn link(&self, v: usize) -> Vec<Vec<usize>> {
        self.edges.iter().filter(|e| e.contains(&v)).map(|e| e.iter().copied().filter(|&u| u != v).collect()).collect()
    }
}

/// One Z-spider per vertex with a free output leg, one H-box(−1) per
/// hyperedge. Evaluates to `Σ_b (−1)^{Σ_e Π_{v∈e} b_v} |b⟩` with no scalar.
pub fn hypergraph_state(h: &Hypergraph) -> Diagram {
    let mut d = Diagram::new(0, h.n);
    let zs: Vec<VertexId> = (0..h.n)
        .map(|j| {
            let z = d.add_z();
            d.add_wire(End::Vertex(z), End::Output(j));
            z
        })
        .collect();
    for e in &h.edges {
        let on: Vec<VertexId> = e.iter().map(|&v| zs[v]).collect();
        add_hyperedge(&mut d, &on, Scalar::int(-1));
    }
    d
}

/// A monic multilinear polynomial over Boolean variables, paired with the
/// order `m` of its phase `ω = exp(iπ/2^m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhasePolynomial {
    n: usize,
    terms: BTreeSet<Vec<usize>>,
    m: u32,
}

impl PhasePolynomial {
    /// Terms are 0-based variable lists.
    pub fn new(n: usize, terms: impl IntoIterator<Item = Vec<usize>>, m: u32) -> Result<PhasePolynomial> {
        let h = Hypergraph::new(n, terms)?;
        Ok(PhasePolynomial { n, terms: h.edges, m })
    }

    /// Parse `b1b2 + b1b2b3 + b3b4` (variables 1-based). `0` or the empty
    /// string is the zero polynomial. `n` defaults to the largest variable.
    pub fn parse(text: &str, m: u32, n: Option<usize>) -> Result<PhasePolynomial> {
        let bad = |msg: String| Error::BadParams(format!("phase polynomial: {msg}"));
        let mut terms = Vec::new();
        let body = text.trim();
        if !(body.is_empty() || body == "0") {
            for term in body.split('+') {
                let term = term.trim();
                let mut vars = Vec::new();
                for part in term.split(['b', '*', ' ']).filter(|p| !p.is_empty()) {
                    let k: usize = part.parse().map_err(|_| bad(format!("bad variable in `{term}`")))?;
                    if k == 0 {
                        return Err(bad("variables are numbered from 1".into()));
                    }
                    vars.push(k - 1);
                }
                if !term.starts_with('b') || vars.is_empty() {
                    return Err(bad(format!("bad term `{term}`")));
                }
                terms.push(vars);
            }
        }
        let need = terms.iter().flatten().map(|&v| v + 1).max().unwrap_or(0);
        let n = n.unwrap_or(need);
        PhasePolynomial::new(n, terms, m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.terms.iter()
    }
}

impl fmt::Display for PhasePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| t.iter().map(|v| format!("b{}", v + 1)).collect()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Whether a label that is not exact in the field may fall back to floats.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exactness {
    #[default]
    Exact,
    AllowApprox,
}

/// `n` through-wires with a Z-spider each and one H-box(ω) per term.
/// Evaluates to `diag(ω^φ(b))` with no scalar.
pub fn phase_poly_unitary(p: &PhasePolynomial) -> Result<Diagram> {
    phase_poly_unitary_with(p, Exactness::Exact)
}

pub fn phase_poly_unitary_with(p: &PhasePolynomial, mode: Exactness) -> Result<Diagram> {
    let omega = match (Scalar::omega(p.m), mode) {
        (Ok(w), _) => w,
        (Err(_), Exactness::AllowApprox) => {
            let t = std::f64::consts::PI / (1u64 << p.m) as f64;
            Scalar::approx(t.cos(), t.sin())
        }
        (Err(e), Exactness::Exact) => return Err(e),
    };
    let mut d = Diagram::new(p.n, p.n);
    let zs = through_spiders(&mut d, p.n);
    for t in &p.terms {
        let on: Vec<VertexId> = t.iter().map(|&v| zs[v]).collect();
        add_hyperedge(&mut d, &on, omega.clone());
    }
    Ok(d)
}

/// Outcome of checking one local-complementation instance.
#[derive(Clone, Debug)]
pub struct HyperLcReport {
    pub vertex: usize,
    /// Hyperedges toggled by the complementation, each appearing once.
    pub toggled: Vec<Vec<usize>>,
    /// The complemented hypergraph.
    pub result: Hypergraph,
    /// Left side: local operations applied to the original state.
    pub lhs: Diagram,
    /// Right side: the complemented state.
    pub rhs: Diagram,
    pub holds: bool,
}

/// Check local complementation at `vertex` on the hypergraph state of `h`.
///
/// With `S_1 … S_k` the hyperedges through `vertex` minus `vertex` itself,
/// applying `exp(−iπ/4·X)` on `vertex` and `diag(1, −i)` controlled on each
/// `S_j` gives, up to a scalar, the hypergraph state in which every union
/// `S_i ∪ S_j` (`i < j`) is toggled. Both sides are compared by evaluation.
pub fn verify_hyper_lc_instance(h: &Hypergraph, vertex: usize) -> Result<HyperLcReport> {
    if vertex >= h.n {
        return Err(Error::BadParams(format!("vertex {vertex} out of range for {} vertices", h.n)));
    }
    let link = h.link(vertex);
    let mut parity: BTreeMap<Vec<usize>, bool> = BTreeMap::new();
    for (i, a) in link.iter().enumerate() {
        for b in &link[i + 1..] {
            let u: BTreeSet<usize> = a.iter().chain(b).copied().collect();
            *parity.entry(u.into_iter().collect()).or_default() ^= true;
        }
    }
    let toggled: Vec<Vec<usize>> = parity.into_iter().filter(|&(_, odd)| odd).map(|(e, _)| e).collect();
    let mut edges = h.edges.clone();
    // An empty union is a global sign, invisible up to scalar.
    for e in toggled.iter().filter(|e| !e.is_empty()) {
        if !edges.remove(e) {
            edges.insert(e.clone());
        }
    }
    let result = Hypergraph { n: h.n, edges };

    let mut ops = Diagram::new(h.n, h.n);
    let mut zs = Vec::new();
    for j in 0..h.n {
        let z = ops.add_z();
        if j == vertex {
            let (pre, post) = (ops.add_h(Scalar::int(-1)), ops.add_h(Scalar::int(-1)));
            ops.add_wire(End::Input(j), End::Vertex(pre));
            ops.add_wire(End::Vertex(pre), End::Vertex(z));
            ops.add_wire(End::Vertex(z), End::Vertex(post));
            ops.add_wire(End::Vertex(post), End::Output(j));
            add_hyperedge(&mut ops, &[z], Scalar::i());
        } else {
            ops.add_wire(End::Input(j), End::Vertex(z));
            ops.add_wire(End::Vertex(z), End::Output(j));
        }
        zs.push(z);
    }
    let minus_i = -&Scalar::i();
    for s in &link {
        let on: Vec<VertexId> = s.iter().map(|&v| zs[v]).collect();
        add_hyperedge(&mut ops, &on, minus_i.clone());
    }
    let lhs = hypergraph_state(h).compose(&ops)?;
    let rhs = hypergraph_state(&result);
    let holds = tensor_equal(&eval(&lhs)?, &eval(&rhs)?, true)?;
    Ok(HyperLcReport { vertex, toggled, result, lhs, rhs, holds })
}
