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

//! Line-oriented text format.
//!
//! ```text
//! # a 2-output H-box state
//! h a -1
//! wire a out:0
//! wire a out:1
//! ```
//!
//! Statements: `z ID`, `h ID [LABEL]`, `wire EP EP`, and optional
//! `inputs N` / `outputs N` headers. An endpoint is a generator id,
//! `in:K` or `out:K`. Boundary sizes default to one past the largest slot
//! used, and every slot must be used exactly once.

use std::collections::{BTreeMap, HashMap};

use super::{end_name, Diagram, End, Kind};
use crate::error::{Error, Result};
use crate::scalar::{parse_scalar, Scalar};

struct Token<'a> {
    text: &'a str,
    col: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token { text: &line[s..i], col: s + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &line[s..], col: s + 1 });
    }
    out
}

fn parse_slot(tok: &Token<'_>, line: usize) -> Result<Option<End>> {
    let Some((kind, idx)) = tok.text.split_once(':') else {
        return Ok(None);
    };
    let k: usize =
        idx.parse().map_err(|_| Error::parse(line, tok.col, format!("bad boundary index in '{}'", tok.text)))?;
    match kind {
        "in" => Ok(Some(End::Input(k))),
        "out" => Ok(Some(End::Output(k))),
        _ => Err(Error::parse(line, tok.col, format!("unknown boundary kind '{kind}'"))),
    }
}

pub fn parse_diagram(text: &str) -> Result<Diagram> {
    let mut d = Diagram::empty();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut declared_in = None;
    let mut declared_out = None;
    let mut wires: Vec<(End, End, usize, usize)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks = tokens(body);
        let Some(head) = toks.first() else { continue };
        let need = |n: usize| -> Result<()> {
            if toks.len() < n {
                Err(Error::parse(line, head.col, format!("'{}' needs {} argument(s)", head.text, n - 1)))
            } else {
                Ok(())
            }
        };
        match head.text {
            "z" | "h" => {
                need(2)?;
                let id = &toks[1];
                if id.text.contains(':') {
                    return Err(Error::parse(line, id.col, "generator ids may not contain ':'"));
                }
                let kind = if head.text == "z" {
                    if toks.len() > 2 {
                        return Err(Error::parse(line, toks[2].col, "Z-spiders take no label"));
                    }
                    Kind::Z
                } else if toks.len() > 2 {
                    let label_col = toks[2].col;
                    let label = &body[label_col - 1..];
                    Kind::H(parse_scalar(label.trim()).map_err(|e| match e {
                        Error::Parse { col, msg, .. } => Error::parse(line, label_col + col - 1, msg),
                        other => Error::parse(line, label_col, other.to_string()),
                    })?)
                } else {
                    Kind::H(Scalar::int(-1))
                };
                if ids.contains_key(id.text) {
                    return Err(Error::parse(line, id.col, format!("duplicate id '{}'", id.text)));
                }
                let v = d.add_vertex(kind);
                ids.insert(id.text.to_string(), v);
            }
            "wire" => {
                need(3)?;
                if toks.len() > 3 {
                    return Err(Error::parse(line, toks[3].col, "a wire has exactly two endpoints"));
                }
                let mut ends = [End::Input(0); 2];
                for (k, tok) in toks[1..3].iter().enumerate() {
                    ends[k] = match parse_slot(tok, line)? {
                        Some(e) => e,
                        None => match ids.get(tok.text) {
                            Some(&v) => End::Vertex(v),
                            None => return Err(Error::parse(line, tok.col, format!("unknown id '{}'", tok.text))),
                        },
                    };
                }
                wires.push((ends[0], ends[1], line, toks[1].col));
            }
            "inputs" | "outputs" => {
                need(2)?;
                let n: usize = toks[1].text.parse().map_err(|_| Error::parse(line, toks[1].col, "expected a count"))?;
                if head.text == "inputs" {
                    declared_in = Some(n);
                } else {
                    declared_out = Some(n);
                }
            }
            other => return Err(Error::parse(line, head.col, format!("unknown statement '{other}'"))),
        }
    }
    // Boundary bookkeeping: every slot exactly once, no gaps.
    let mut uses: BTreeMap<End, (usize, usize, usize)> = BTreeMap::new();
    for &(a, b, line, col) in &wires {
        for e in [a, b] {
            if e.is_boundary() {
                let entry = uses.entry(e).or_insert((0, line, col));
                entry.0 += 1;
            }
        }
    }
    let max_in = uses.keys().filter_map(|e| if let End::Input(i) = e { Some(i + 1) } else { None }).max();
    let max_out = uses.keys().filter_map(|e| if let End::Output(i) = e { Some(i + 1) } else { None }).max();
    let n_in = declared_in.unwrap_or(max_in.unwrap_or(0));
    let n_out = declared_out.unwrap_or(max_out.unwrap_or(0));
    let last_line = text.lines().count().max(1);
    for (&e, &(count, line, col)) in &uses {
        let in_range = match e {
            End::Input(i) => i < n_in,
            End::Output(j) => j < n_out,
            End::Vertex(_) => true,
        };
        if !in_range {
            return Err(Error::parse(line, col, format!("{} exceeds the declared boundary", end_name(e))));
        }
        if count > 1 {
            return Err(Error::parse(line, col, format!("boundary slot {} used {count} times", end_name(e))));
        }
    }
    let all_slots = (0..n_in).map(End::Input).chain((0..n_out).map(End::Output));
    for e in all_slots {
        if !uses.contains_key(&e) {
            return Err(Error::parse(last_line, 1, format!("dangling boundary slot {}", end_name(e))));
        }
    }
    d.n_inputs = n_in;
    d.n_outputs = n_out;
    for (a, b, _, _) in wires {
        d.add_wire(a, b);
    }
    Ok(d)
}

pub fn print_diagram(d: &Diagram) -> String {
    let mut out = String::new();
    out.push_str(&format!("inputs {}\noutputs {}\n", d.n_inputs(), d.n_outputs()));
    for (v, k) in d.vertices() {
        match k {
            Kind::Z => out.push_str(&format!("z v{v}\n")),
            Kind::H(a) => out.push_str(&format!("h v{v} {a}\n")),
        }
    }
    for (_, a, b) in d.wires() {
        out.push_str(&format!("wire {} {}\n", end_name(a), end_name(b)));
    }
    out
}
