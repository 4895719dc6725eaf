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

//! Derivation traces: recording, persistence and replay.

use std::collections::HashSet;
use std::io::{BufRead, Write};
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest as _, Sha256};

use super::apply::apply_rule;
use super::{check_rule, Applied, Rule, RuleInstance};
use crate::diagram::{Diagram, Digest, End, Kind};
use crate::error::{Error, Result};

/// Order-independent hash of a diagram's exact contents, ids included.
///
/// Each vertex, wire and the boundary shape hash to four 64-bit lanes; the
/// digest is their lane-wise wrapping sum, so a rewrite updates it by
/// subtracting what it removed and adding what it created.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StateDigest([u64; 4]);

fn lanes(bytes: &[u8]) -> [u64; 4] {
    let h = Sha256::digest(bytes);
    let mut out = [0u64; 4];
    for (k, chunk) in h.chunks(8).enumerate() {
        out[k] = u64::from_le_bytes(chunk.try_into().unwrap());
    }
    out
}

fn end_code(e: End) -> String {
    match e {
        End::Vertex(v) => format!("v{v}"),
        End::Input(i) => format!("i{i}"),
        End::Output(j) => format!("o{j}"),
    }
}

fn kind_code(k: &Kind) -> String {
    match k {
        Kind::Z => "Z".into(),
        Kind::H(a) => format!("H{a}"),
    }
}

impl StateDigest {
    pub fn of(d: &Diagram) -> StateDigest {
        let mut s = StateDigest::default();
        s.add(format!("b{}/{}", d.n_inputs(), d.n_outputs()).as_bytes());
        for (v, k) in d.vertices() {
            s.vertex(v, k, true);
        }
        for (w, a, b) in d.wires() {
            s.wire(w, a, b, true);
        }
        s
    }

    fn add(&mut self, bytes: &[u8]) {
        for (x, y) in self.0.iter_mut().zip(lanes(bytes)) {
            *x = x.wrapping_add(y);
        }
    }

    fn sub(&mut self, bytes: &[u8]) {
        for (x, y) in self.0.iter_mut().zip(lanes(bytes)) {
            *x = x.wrapping_sub(y);
        }
    }

    fn vertex(&mut self, v: usize, k: &Kind, add: bool) {
        let rec = format!("V{v}:{}", kind_code(k));
        if add {
            self.add(rec.as_bytes())
        } else {
            self.sub(rec.as_bytes())
        }
    }

    fn wire(&mut self, w: usize, a: End, b: End, add: bool) {
        let rec = format!("W{w}:{}-{}", end_code(a), end_code(b));
        if add {
            self.add(rec.as_bytes())
        } else {
            self.sub(rec.as_bytes())
        }
    }

    pub fn update(&mut self, ch: &Applied) {
        for (v, k) in &ch.removed_vertices {
            self.vertex(*v, k, false);
        }
        for &(w, a, b) in &ch.removed_wires {
            self.wire(w, a, b, false);
        }
        for (v, k) in &ch.added_vertices {
            self.vertex(*v, k, true);
        }
        for &(w, a, b) in &ch.added_wires {
            self.wire(w, a, b, true);
        }
    }

    pub fn digest(&self) -> Digest {
        let mut out = [0u8; 32];
        for (k, x) in self.0.iter().enumerate() {
            out[8 * k..8 * k + 8].copy_from_slice(&x.to_le_bytes());
        }
        Digest(out)
    }
}

pub fn state_digest(d: &Diagram) -> Digest {
    StateDigest::of(d).digest()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    #[serde(flatten)]
    pub instance: RuleInstance,
    pub pre: Digest,
    pub post: Digest,
}

/// An ordered list of rewrites starting from a known diagram.
///
/// `initial` is the canonical hash of the starting diagram. When `bent` is
/// set the steps act on that diagram bent into a state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub initial: Digest,
    #[serde(default)]
    pub bent: bool,
    pub steps: Vec<TraceStep>,
}

#[derive(Serialize, Deserialize)]
struct Header {
    initial: Digest,
    #[serde(default)]
    bent: bool,
    steps: usize,
}

impl Trace {
    pub fn new(initial: &Diagram) -> Trace {
        Trace { initial: initial.canonical_hash(), bent: false, steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn append(&mut self, other: Trace) {
        self.steps.extend(other.steps);
    }

    /// One JSON header line, then one line per step.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let header = Header { initial: self.initial, bent: self.bent, steps: self.steps.len() };
        writeln!(w, "{}", serde_json::to_string(&header)?)?;
        for s in &self.steps {
            writeln!(w, "{}", serde_json::to_string(s)?)?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("JSON is UTF-8")
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Trace> {
        let mut lines = r.lines().enumerate().filter(|(_, l)| l.as_ref().map_or(true, |l| !l.trim().is_empty()));
        let bad = |n: usize, e: String| Error::CorruptTrace(format!("line {}: {e}", n + 1));
        let (n, first) = lines.next().ok_or_else(|| Error::CorruptTrace("empty trace file".into()))?;
        let first = first.map_err(|e| bad(n, e.to_string()))?;
        let header: Header = serde_json::from_str(&first).map_err(|e| bad(n, e.to_string()))?;
        let mut steps = Vec::new();
        for (n, line) in lines {
            let line = line.map_err(|e| bad(n, e.to_string()))?;
            steps.push(serde_json::from_str(&line).map_err(|e| bad(n, e.to_string()))?);
        }
        if steps.len() != header.steps {
            return Err(Error::CorruptTrace(format!("header announces {} steps, found {}", header.steps, steps.len())));
        }
        Ok(Trace { initial: header.initial, bent: header.bent, steps })
    }

    pub fn from_jsonl(text: &str) -> Result<Trace> {
        Trace::read_jsonl(text.as_bytes())
    }
}

/// Records rewrites applied to a diagram in place.
pub(crate) struct Recorder {
    pub d: Diagram,
    pub trace: Trace,
    state: StateDigest,
}

impl Recorder {
    pub fn new(d: Diagram, initial: Digest, bent: bool) -> Recorder {
        let state = StateDigest::of(&d);
        Recorder { d, trace: Trace { initial, bent, steps: Vec::new() }, state }
    }

    /// Apply a concrete rule and log it under `schema`.
    pub fn step(&mut self, inst: RuleInstance, rule: &Rule) -> Result<Applied> {
        let pre = self.state.digest();
        let ch = apply_rule(&mut self.d, rule, &inst.embedding)?;
        self.state.update(&ch);
        let post = self.state.digest();
        self.trace.steps.push(TraceStep { instance: inst, pre, post });
        Ok(ch)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReplayOptions {
    /// Re-check that every distinct rule instance preserves the semantics.
    pub check_steps: bool,
}

/// Rule instances already found sound in this process, keyed by schema JSON.
fn verified() -> &'static Mutex<HashSet<String>> {
    static CACHE: OnceLock<Mutex<HashSet<String>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashSet::new()))
}

fn is_verified(key: &str) -> bool {
    verified().lock().map(|s| s.contains(key)).unwrap_or(false)
}

fn mark_verified(key: String) {
    if let Ok(mut s) = verified().lock() {
        s.insert(key);
    }
}

pub fn replay(initial: &Diagram, trace: &Trace) -> Result<Diagram> {
    replay_with(initial, trace, ReplayOptions::default())
}

pub fn replay_with(initial: &Diagram, trace: &Trace, opts: ReplayOptions) -> Result<Diagram> {
    if initial.canonical_hash() != trace.initial {
        return Err(Error::CorruptTrace("initial diagram does not match the trace".into()));
    }
    let mut d = if trace.bent { initial.bend_to_state() } else { initial.clone() };
    let mut state = StateDigest::of(&d);
    for (i, step) in trace.steps.iter().enumerate() {
        let corrupt = |msg: String| Error::CorruptTrace(format!("step {}: {msg}", i + 1));
        if state.digest() != step.pre {
            return Err(corrupt("pre-state digest mismatch".into()));
        }
        let rule = step.instance.schema.instantiate().map_err(|e| corrupt(e.to_string()))?;
        if opts.check_steps {
            let key = serde_json::to_string(&step.instance.schema).expect("schema serializes");
            if !is_verified(&key) {
                if !check_rule(&rule).map_err(|e| corrupt(e.to_string()))? {
                    return Err(corrupt(format!("{} does not preserve the semantics", step.instance.schema)));
                }
                mark_verified(key);
            }
        }
        let ch = apply_rule(&mut d, &rule, &step.instance.embedding).map_err(|e| corrupt(e.to_string()))?;
        state.update(&ch);
        if state.digest() != step.post {
            return Err(corrupt("post-state digest mismatch".into()));
        }
    }
    Ok(d)
}
