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

//! DOT and TikZ export. Z-spiders are white dots, H-boxes white boxes; a
//! box with the default label `-1` is drawn small and unlabelled.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{end_name, Diagram, End, Kind};

fn is_default(k: &Kind) -> bool {
    matches!(k, Kind::H(a) if *a == crate::scalar::Scalar::int(-1))
}

pub fn to_dot(d: &Diagram) -> String {
    let mut s = String::from("graph zh {\n  node [fontname=\"Helvetica\"];\n");
    for (v, k) in d.vertices() {
        let attrs = match k {
            Kind::Z => "shape=circle, style=filled, fillcolor=white, label=\"\", width=0.2".to_string(),
            k if is_default(k) => {
                "shape=box, style=filled, fillcolor=white, label=\"\", width=0.12, height=0.12".to_string()
            }
            Kind::H(a) => format!("shape=box, style=filled, fillcolor=white, label=\"{a}\""),
        };
        let _ = writeln!(s, "  v{v} [{attrs}];");
    }
    for e in d.inputs().chain(d.outputs()) {
        let _ = writeln!(s, "  \"{}\" [shape=plaintext, label=\"{}\"];", end_name(e), end_name(e));
    }
    for (_, a, b) in d.wires() {
        let _ = writeln!(s, "  \"{}\" -- \"{}\";", end_name(a), end_name(b));
    }
    s.push_str("}\n");
    s
}

/// Inputs on the bottom row, outputs on the top, generators layered by
/// distance from the inputs.
pub fn to_tikz(d: &Diagram) -> String {
    let mut layer: BTreeMap<End, usize> = BTreeMap::new();
    let mut frontier: Vec<End> = d.inputs().collect();
    for &e in &frontier {
        layer.insert(e, 0);
    }
    if frontier.is_empty() {
        frontier = d.vertices().map(|(v, _)| End::Vertex(v)).take(1).collect();
        for &e in &frontier {
            layer.insert(e, 1);
        }
    }
    while let Some(e) = frontier.pop() {
        let l = layer[&e];
        for n in d.neighbours(e) {
            if matches!(n, End::Vertex(_)) && !layer.contains_key(&n) {
                layer.insert(n, l + 1);
                frontier.insert(0, n);
            }
        }
    }
    let top = layer.values().copied().max().unwrap_or(0) + 1;
    let mut rows: BTreeMap<usize, Vec<End>> = BTreeMap::new();
    for (v, _) in d.vertices() {
        let l = *layer.get(&End::Vertex(v)).unwrap_or(&1);
        rows.entry(l).or_default().push(End::Vertex(v));
    }
    let mut s = String::from("\\begin{tikzpicture}\n");
    let place = |s: &mut String, e: End, x: usize, y: usize| {
        let (style, text) = match e {
            End::Vertex(v) => match d.kind(v) {
                Some(Kind::Z) => ("white dot", String::new()),
                Some(k) if is_default(k) => ("small hadamard", String::new()),
                Some(Kind::H(a)) => ("hadamard", format!("${a}$")),
                None => ("none", String::new()),
            },
            _ => ("none", String::new()),
        };
        let _ = writeln!(s, "  \\node [style={style}] ({}) at ({x}, {y}) {{{text}}};", node_name(e));
    };
    for (x, e) in d.inputs().enumerate() {
        place(&mut s, e, x, 0);
    }
    for (&y, row) in &rows {
        for (x, &e) in row.iter().enumerate() {
            place(&mut s, e, x, y);
        }
    }
    for (x, e) in d.outputs().enumerate() {
        place(&mut s, e, x, top);
    }
    for (_, a, b) in d.wires() {
        let _ = writeln!(s, "  \\draw ({}) to ({});", node_name(a), node_name(b));
    }
    s.push_str("\\end{tikzpicture}\n");
    s
}

fn node_name(e: End) -> String {
    end_name(e).replace(':', "")
}
