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

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zh_core::diagram::{parse_diagram, random_diagram, RandomShape};
use zh_core::normalform::normalize;
use zh_core::rewrite::*;
use zh_core::{eval, tensor_equal, Diagram, Error, Kind, Scalar, Tensor};

fn same(a: &Tensor, b: &Tensor) -> bool {
    tensor_equal(a, b, false).unwrap()
}

fn h_labels(d: &Diagram) -> Vec<Scalar> {
    d.vertices().filter_map(|(_, k)| k.label().cloned()).collect()
}

fn rewrite_keeps_semantics(d: &Diagram, inst: &RuleInstance) -> Diagram {
    let out = apply(d, inst).unwrap();
    assert!(same(&eval(&out).unwrap(), &eval(d).unwrap()), "{}", inst.schema);
    out
}

#[test]
fn unit_bang_at_zero_is_the_empty_diagram() {
    let r = instantiate(&RuleSchema::new(RuleId::Ubang, Params::k(0))).unwrap();
    assert_eq!(r.rhs.num_vertices(), 0);
    assert_eq!(r.lhs.num_vertices(), 1);
    assert_eq!(h_labels(&r.lhs), vec![Scalar::one()]);
    assert!(check_rule(&r).unwrap());
}

#[test]
fn multiply_produces_the_product_label() {
    let (a, b) = (Scalar::int(3), Scalar::i());
    let r = instantiate(&RuleSchema::new(RuleId::M, Params::ab(a.clone(), b.clone()))).unwrap();
    assert!(h_labels(&r.lhs).contains(&a) && h_labels(&r.lhs).contains(&b));
    assert!(h_labels(&r.rhs).contains(&(&a * &b)));
    assert!(check_rule(&r).unwrap());
}

#[test]
fn second_bialgebra_side_is_complete_bipartite() {
    let r = instantiate(&RuleSchema::new(RuleId::BA2, Params::mn(2, 2))).unwrap();
    let zs: Vec<usize> = r.rhs.vertices().filter(|(_, k)| k.is_z()).map(|(v, _)| v).collect();
    let hs: Vec<usize> = r.rhs.vertices().filter(|(_, k)| !k.is_z()).map(|(v, _)| v).collect();
    assert_eq!((zs.len(), hs.len()), (2, 2));
    for &z in &zs {
        for &h in &hs {
            let between = r.rhs.wires().filter(|&(_, a, b)| {
                let ends = [a.vertex(), b.vertex()];
                ends.contains(&Some(z)) && ends.contains(&Some(h))
            });
            assert_eq!(between.count(), 1);
        }
    }
}

#[test]
fn out_of_domain_parameters() {
    let r = instantiate(&RuleSchema::new(RuleId::DISC4, Params::default().with_labels(vec![Scalar::one()])));
    assert!(matches!(r, Err(Error::BadParams(_))));
}

#[test]
fn reversed_hadamard_pair_matches_a_bare_wire() {
    let wire = Diagram::identity(1);
    let schema = RuleSchema::new(RuleId::HS2, Params::default()).reversed();
    let found = find_matches(&wire, &schema).unwrap();
    assert_eq!(found.len(), 1);
    let out = rewrite_keeps_semantics(&wire, &found[0]);
    assert_eq!(out.vertices().filter(|(_, k)| **k == Kind::H(Scalar::int(-1))).count(), 2);
}

#[test]
fn left_side_matches_itself() {
    for schema in [
        RuleSchema::new(RuleId::ZS1, Params::mn(2, 1)),
        RuleSchema::new(RuleId::A, Params::ab(Scalar::int(2), Scalar::i())),
        RuleSchema::new(RuleId::BA2, Params::mn(1, 2)),
    ] {
        let lhs = instantiate(&schema).unwrap().lhs;
        assert!(!find_matches(&lhs, &schema).unwrap().is_empty(), "{schema}");
    }
}

#[test]
fn no_boxes_no_multiply_match() {
    let d = parse_diagram("z a\nz b\nwire a b\nwire a out:0\nwire b out:1\n").unwrap();
    let schema = RuleSchema::new(RuleId::M, Params::ab(Scalar::int(-1), Scalar::int(-1)));
    assert!(find_matches(&d, &schema).unwrap().is_empty());
}

#[test]
fn spider_fusion_fuses() {
    let d = parse_diagram("z a\nz b\nwire in:0 a\nwire a b\nwire b out:0\nwire b out:1\n").unwrap();
    let found = find_matches(&d, &RuleSchema::new(RuleId::ZS1, Params::mn(1, 2))).unwrap();
    assert!(!found.is_empty());
    let out = rewrite_keeps_semantics(&d, &found[0]);
    assert_eq!(out.num_vertices(), 1);
}

#[test]
fn ortho_rule_keeps_semantics() {
    let schema = RuleSchema::new(RuleId::O, Params::mn(1, 1).with_a(Scalar::int(2)).with_b(Scalar::i()));
    let host = instantiate(&schema).unwrap().lhs;
    let found = find_matches(&host, &schema).unwrap();
    assert!(!found.is_empty());
    rewrite_keeps_semantics(&host, &found[0]);
}

#[test]
fn average_rule_labels_the_mean() {
    let (a, b) = (Scalar::int(3), Scalar::frac(1, 2));
    let schema = RuleSchema::new(RuleId::A, Params::ab(a.clone(), b.clone()));
    let host = instantiate(&schema).unwrap().lhs;
    let inst = find_matches(&host, &schema).unwrap().remove(0);
    let out = rewrite_keeps_semantics(&host, &inst);
    assert!(h_labels(&out).contains(&Scalar::frac(7, 4)));
}

#[test]
fn stale_embedding_is_rejected() {
    let d = parse_diagram("z a\nz b\nwire in:0 a\nwire a b\nwire b out:0\n").unwrap();
    let inst = find_first(&d, &RuleSchema::new(RuleId::ZS1, Params::mn(1, 1)), &Pins::none()).unwrap().unwrap();
    let mut once = d.clone();
    apply_in_place(&mut once, &inst).unwrap();
    assert!(matches!(apply(&once, &inst), Err(Error::InvalidMatch(_))));
}

#[test]
fn basic_rules_are_sound() {
    let report = verify_all(&RuleId::BASIC, &VerifyBounds::default());
    assert!(report.passed(), "{:?}", report.failures);
    assert_eq!(report.checked.len(), 11);
}

#[test]
fn average_bang_up_to_four() {
    let report = verify_schema(RuleId::Abang, &VerifyBounds::default());
    assert!(report.passed(), "{:?}", report.failures);
    assert_eq!(report.checked[&RuleId::Abang], 5 * 64);
}

#[test]
fn corrupted_multiply_is_caught() {
    let (a, b) = (Scalar::int(2), Scalar::i());
    let mut r = instantiate(&RuleSchema::new(RuleId::M, Params::ab(a.clone(), b.clone()))).unwrap();
    let h = r.rhs.vertices().find(|(_, k)| !k.is_z()).map(|(v, _)| v).unwrap();
    r.rhs.set_kind(h, Kind::H(&a + &b));
    assert!(!check_rule(&r).unwrap());
}

#[test]
fn empty_trace_replays_to_the_start() {
    let d = parse_diagram("h a 2\nwire in:0 a\nwire a out:0\n").unwrap();
    assert!(replay(&d, &Trace::new(&d)).unwrap().structurally_equal(&d));
}

fn normalized_example() -> (Diagram, Trace) {
    let d = parse_diagram("z a\nh b i\nh c\nwire in:0 a\nwire a b\nwire a c\nwire b c\nwire c out:0\n").unwrap();
    let (_, tr) = normalize(&d).unwrap();
    (d, tr)
}

#[test]
fn normalize_trace_reaches_the_normal_form() {
    let (d, tr) = normalized_example();
    let (nf, _) = normalize(&d).unwrap();
    let end = replay_with(&d, &tr, ReplayOptions { check_steps: true }).unwrap();
    assert_eq!(end.canonical_hash(), nf.as_diagram().canonical_hash());
    assert_eq!(eval(&end).unwrap().entries(), nf.coeffs());
}

#[test]
fn tampered_traces_are_corrupt() {
    let (d, tr) = normalized_example();
    assert!(tr.len() > 2);
    let mut bad = tr.clone();
    bad.steps[1].post.0[0] ^= 1;
    assert!(matches!(replay(&d, &bad), Err(Error::CorruptTrace(_))));
    let mut swapped = tr.clone();
    swapped.steps.swap(0, 1);
    assert!(matches!(replay(&d, &swapped), Err(Error::CorruptTrace(_))));
    let other = parse_diagram("wire in:0 out:0\n").unwrap();
    assert!(matches!(replay(&other, &tr), Err(Error::CorruptTrace(_))));
}

#[test]
fn trace_json_lines_round_trip() {
    let (d, tr) = normalized_example();
    let text = tr.to_jsonl();
    assert_eq!(text.lines().count(), tr.len() + 1);
    let back = Trace::from_jsonl(&text).unwrap();
    assert_eq!(back, tr);
    assert!(replay(&d, &back).is_ok());
    assert!(Trace::from_jsonl(&text[..text.len() / 2]).is_err());
}

fn pool() -> Vec<RuleSchema> {
    let labels = [Scalar::int(-1), Scalar::int(2), Scalar::i()];
    let mut out = vec![
        RuleSchema::new(RuleId::ZS2, Params::default()),
        RuleSchema::new(RuleId::HS2, Params::default()),
        RuleSchema::new(RuleId::U, Params::default()),
    ];
    for m in 0..=2 {
        for n in 0..=2 {
            out.push(RuleSchema::new(RuleId::ZS1, Params::mn(m, n)));
            out.push(RuleSchema::new(RuleId::BA1, Params::mn(m, n)));
            out.push(RuleSchema::new(RuleId::HS1, Params::mn(m, n).with_a(Scalar::int(-1))));
        }
    }
    for a in &labels {
        out.push(RuleSchema::new(RuleId::I, Params::default().with_a(a.clone())));
        for b in &labels {
            out.push(RuleSchema::new(RuleId::M, Params::ab(a.clone(), b.clone())));
        }
    }
    let rev: Vec<RuleSchema> = out.iter().cloned().map(RuleSchema::reversed).collect();
    out.extend(rev);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_match_preserves_semantics(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = RandomShape { max_generators: 5, ..RandomShape::default() };
        let d = random_diagram(&mut rng, &shape);
        let base = eval(&d).unwrap();
        let schemas = pool();
        for schema in schemas.choose_multiple(&mut rng, 12) {
            for inst in find_matches_limited(&d, schema, &Pins::none(), 4).unwrap() {
                let out = apply(&d, &inst).unwrap();
                out.validate().unwrap();
                prop_assert!(same(&eval(&out).unwrap(), &base), "{}", schema);
            }
        }
    }

    #[test]
    fn matching_is_deterministic(seed in any::<u64>()) {
        let d = random_diagram(&mut ChaCha8Rng::seed_from_u64(seed), &RandomShape::default());
        for schema in pool().iter().take(20) {
            let a = find_matches_limited(&d, schema, &Pins::none(), 16).unwrap();
            let b = find_matches_limited(&d, schema, &Pins::none(), 16).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
