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

//! Replacing a matched left-hand side by the right-hand side.

use std::collections::{BTreeMap, BTreeSet};

use super::{Embedding, Rule, RuleInstance};
use crate::diagram::{splice_into, Diagram, End, Kind, Splice, VertexId, WireId};
use crate::error::{Error, Result};

/// What one rewrite changed in the host.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Applied {
    /// Right-hand-side vertex to its host id.
    pub vertex_map: Vec<(VertexId, VertexId)>,
    pub removed_vertices: Vec<(VertexId, Kind)>,
    pub added_vertices: Vec<(VertexId, Kind)>,
    pub removed_wires: Vec<(WireId, End, End)>,
    pub added_wires: Vec<(WireId, End, End)>,
}

impl Applied {
    pub fn host(&self, rhs_vertex: VertexId) -> Option<VertexId> {
        self.vertex_map.iter().find(|&&(r, _)| r == rhs_vertex).map(|&(_, h)| h)
    }
}

/// Rewrite a copy of `d`.
pub fn apply(d: &Diagram, inst: &RuleInstance) -> Result<Diagram> {
    let mut out = d.clone();
    apply_in_place(&mut out, inst)?;
    Ok(out)
}

pub fn apply_in_place(d: &mut Diagram, inst: &RuleInstance) -> Result<Applied> {
    let rule = inst.schema.instantiate()?;
    apply_rule(d, &rule, &inst.embedding)
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidMatch(msg.into())
}

#[derive(Clone, Copy)]
enum Outer {
    Real(End),
    Join(usize),
}

pub(crate) fn apply_rule(d: &mut Diagram, rule: &Rule, emb: &Embedding) -> Result<Applied> {
    let pat = &rule.lhs;
    let vmap: BTreeMap<VertexId, VertexId> = emb.vertices.iter().copied().collect();
    if vmap.len() != emb.vertices.len() || vmap.len() != pat.num_vertices() {
        return Err(invalid("vertex map does not cover the pattern"));
    }
    let images: BTreeSet<VertexId> = vmap.values().copied().collect();
    if images.len() != vmap.len() {
        return Err(invalid("vertex map is not injective"));
    }
    for (&p, &h) in &vmap {
        let pk = pat.kind(p).ok_or_else(|| invalid(format!("no pattern vertex {p}")))?;
        let hk = d.kind(h).ok_or_else(|| invalid(format!("no host vertex {h}")))?;
        if pk != hk {
            return Err(invalid(format!("kind mismatch at host vertex {h}")));
        }
        if pat.degree(End::Vertex(p)) != d.degree(End::Vertex(h)) {
            return Err(invalid(format!("degree mismatch at host vertex {h}")));
        }
    }
    let img = |e: End| match e {
        End::Vertex(v) => End::Vertex(vmap[&v]),
        e => e,
    };

    let wmap: BTreeMap<WireId, (WireId, bool)> = emb.wires.iter().map(|&(p, h, f)| (p, (h, f))).collect();
    if wmap.len() != emb.wires.len() || wmap.len() != pat.num_wires() {
        return Err(invalid("wire map does not cover the pattern"));
    }
    // (host wire, position) -> pattern end placed there.
    let mut claimed: BTreeMap<(WireId, usize), End> = BTreeMap::new();
    let mut users: BTreeMap<WireId, Vec<WireId>> = BTreeMap::new();
    for (pw, a, b) in pat.wires() {
        let (hw, flip) = wmap[&pw];
        let (x, y) = d.wire(hw).ok_or_else(|| invalid(format!("no host wire {hw}")))?;
        let ends = if flip { [(b, 0), (a, 1)] } else { [(a, 0), (b, 1)] };
        let host_ends = [x, y];
        for (pe, pos) in ends {
            if pe.is_boundary() {
                continue;
            }
            if host_ends[pos] != img(pe) {
                return Err(invalid(format!("host wire {hw} does not meet the image of {pe:?}")));
            }
            if claimed.insert((hw, pos), pe).is_some() {
                return Err(invalid(format!("host wire {hw} is covered twice")));
            }
        }
        users.entry(hw).or_default().push(pw);
    }
    for (hw, list) in &users {
        let vertex_slot = |pw: &WireId| {
            let (a, b) = pat.wire(*pw).unwrap();
            a.is_boundary() != b.is_boundary()
        };
        if list.len() > 2 || (list.len() == 2 && !list.iter().all(vertex_slot)) {
            return Err(invalid(format!("host wire {hw} is the image of too many wires")));
        }
    }
    for &h in &images {
        for w in d.incident(End::Vertex(h)) {
            let (x, y) = d.wire(w).unwrap();
            for (pos, e) in [x, y].into_iter().enumerate() {
                if e == End::Vertex(h) && !claimed.contains_key(&(w, pos)) {
                    return Err(invalid(format!("host wire {w} at vertex {h} is not covered")));
                }
            }
        }
    }

    // Where each slot connects outside the matched region.
    let k = pat.n_outputs();
    let mut outer: Vec<Option<Outer>> = vec![None; k];
    for (pw, a, b) in pat.wires() {
        let (hw, flip) = wmap[&pw];
        let (x, y) = d.wire(hw).unwrap();
        let host_ends = [x, y];
        let ends = if flip { [(b, 0), (a, 1)] } else { [(a, 0), (b, 1)] };
        for (pe, pos) in ends {
            let End::Output(s) = pe else { continue };
            let o = match claimed.get(&(hw, pos)) {
                None => Outer::Real(host_ends[pos]),
                Some(_) => {
                    // Another pattern wire claims the far end; its slot is ours.
                    let other = users[&hw].iter().find(|&&q| q != pw).copied();
                    let t = other
                        .and_then(|q| {
                            let (c, e) = pat.wire(q).unwrap();
                            [c, e].into_iter().find_map(|x| match x {
                                End::Output(t) => Some(t),
                                _ => None,
                            })
                        })
                        .ok_or_else(|| invalid(format!("slot {s} has no outside")))?;
                    Outer::Join(t)
                }
            };
            outer[s] = Some(o);
        }
    }
    let outer: Vec<Outer> = outer
        .into_iter()
        .enumerate()
        .map(|(s, o)| o.ok_or_else(|| invalid(format!("slot {s} unmatched"))))
        .collect::<Result<_>>()?;

    let mut applied = Applied::default();
    let mut gone: Vec<WireId> = users.keys().copied().collect();
    gone.sort_unstable();
    for w in gone {
        let (a, b) = d.remove_wire(w).unwrap();
        applied.removed_wires.push((w, a, b));
    }
    for &h in &images {
        for w in d.incident(End::Vertex(h)) {
            if let Some((a, b)) = d.remove_wire(w) {
                applied.removed_wires.push((w, a, b));
            }
        }
        let kind = d.remove_vertex(h).unwrap();
        applied.removed_vertices.push((h, kind));
    }

    let first_new_wire = d.next_wire_id();
    let keep: BTreeMap<VertexId, VertexId> = rule.keep.iter().map(|&(l, r)| (r, vmap[&l])).collect();
    let mut rmap: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for (r, kind) in rule.rhs.vertices() {
        if let Some(&h) = keep.get(&r) {
            d.insert_vertex(h, kind.clone())?;
            rmap.insert(r, h);
        }
    }
    for (r, kind) in rule.rhs.vertices() {
        rmap.entry(r).or_insert_with(|| d.add_vertex(kind.clone()));
    }
    for (&r, &h) in &rmap {
        applied.vertex_map.push((r, h));
        applied.added_vertices.push((h, rule.rhs.kind(r).unwrap().clone()));
    }
    let side = |e: End| match e {
        End::Vertex(v) => Splice::Real(End::Vertex(rmap[&v])),
        End::Output(s) => Splice::Join(s),
        End::Input(_) => unreachable!("rule sides are states"),
    };
    let mut half: Vec<(Splice, Splice)> = rule.rhs.wires().map(|(_, a, b)| (side(a), side(b))).collect();
    for (s, o) in outer.iter().enumerate() {
        match *o {
            Outer::Real(e) => half.push((Splice::Join(s), Splice::Real(e))),
            Outer::Join(t) if s < t => half.push((Splice::Join(s), Splice::Join(t))),
            Outer::Join(_) => {}
        }
    }
    let before = d.next_vertex_id();
    splice_into(d, half);
    for v in before..d.next_vertex_id() {
        if let Some(kind) = d.kind(v) {
            applied.added_vertices.push((v, kind.clone()));
        }
    }
    applied.added_wires = d.wires_from(first_new_wire).collect();
    Ok(applied)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::{find_first, find_matches, Params, Pins, RuleId, RuleSchema};
    use crate::scalar::Scalar;
    use crate::semantics::eval;

    #[test]
    fn fusing_neighbours_keeps_value() {
        let mut d = Diagram::new(0, 3);
        let (a, b) = (d.add_z(), d.add_z());
        d.add_wire(End::Vertex(a), End::Output(0));
        d.add_wire(End::Vertex(a), End::Vertex(b));
        d.add_wire(End::Vertex(b), End::Output(1));
        d.add_wire(End::Vertex(b), End::Output(2));
        let schema = RuleSchema::new(RuleId::ZS1, Params::mn(1, 2));
        let inst = find_first(&d, &schema, &Pins::none()).unwrap().unwrap();
        let out = apply(&d, &inst).unwrap();
        assert_eq!(out.num_vertices(), 1);
        assert_eq!(eval(&out).unwrap(), eval(&d).unwrap());
    }

    #[test]
    fn identity_wire_grows_two_boxes() {
        let d = Diagram::identity(1);
        let schema = RuleSchema::new(RuleId::HS2, Params::default()).reversed();
        let found = find_matches(&d, &schema).unwrap();
        assert_eq!(found.len(), 1);
        let out = apply(&d, &found[0]).unwrap();
        assert_eq!(out.num_vertices(), 3);
        assert_eq!(eval(&out).unwrap(), eval(&d).unwrap());
    }

    #[test]
    fn stale_match_is_rejected() {
        let mut d = Diagram::new(0, 2);
        let z = d.add_z();
        d.add_wire(End::Vertex(z), End::Output(0));
        d.add_wire(End::Vertex(z), End::Output(1));
        let schema = RuleSchema::new(RuleId::ZS2, Params::default());
        let inst = find_first(&d, &schema, &Pins::none()).unwrap().unwrap();
        let out = apply(&d, &inst).unwrap();
        assert!(matches!(apply(&out, &inst), Err(Error::InvalidMatch(_))));
    }

    #[test]
    fn average_rule_relabels() {
        let schema = RuleSchema::new(RuleId::A, Params::ab(Scalar::int(3), Scalar::int(5)));
        let rule = schema.instantiate().unwrap();
        let inst = find_first(&rule.lhs, &schema, &Pins::none()).unwrap().unwrap();
        let out = apply(&rule.lhs, &inst).unwrap();
        assert!(out.vertices().any(|(_, k)| *k == Kind::H(Scalar::int(4))));
        assert_eq!(eval(&out).unwrap(), eval(&rule.lhs).unwrap());
    }

    #[test]
    fn facing_slots_join_up() {
        // Two spiders joined by two wires: the second wire is the image of
        // both slot legs of ZS1(1,1).
        let mut d = Diagram::new(0, 0);
        let (a, b) = (d.add_z(), d.add_z());
        d.add_wire(End::Vertex(a), End::Vertex(b));
        d.add_wire(End::Vertex(a), End::Vertex(b));
        let schema = RuleSchema::new(RuleId::ZS1, Params::mn(1, 1));
        let inst = find_first(&d, &schema, &Pins::none()).unwrap().unwrap();
        let out = apply(&d, &inst).unwrap();
        assert_eq!(eval(&out).unwrap(), eval(&d).unwrap());
    }
}
