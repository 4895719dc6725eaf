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

//! Exhaustive soundness checks of rule instances against the evaluator.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Params, Rule, RuleId, RuleSchema};
use crate::error::Result;
use crate::scalar::Scalar;
use crate::semantics::{eval_with, tensor_equal, EntryEvaluator, EvalLimits};

/// Bounds on the instances enumerated per schema.
#[derive(Clone, Debug)]
pub struct VerifyBounds {
    pub max_arity: usize,
    pub labels: Vec<Scalar>,
    /// Label tuples drawn per shape for rules with many labels.
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyBounds {
    fn default() -> Self {
        VerifyBounds { max_arity: 3, labels: default_labels(), samples: 2, seed: 0x5eed }
    }
}

/// `0, 1, -1, 2, 1/2, i, (1+i)/2, √2/2`.
pub fn default_labels() -> Vec<Scalar> {
    let i = Scalar::i();
    let mut out = vec![Scalar::zero(), Scalar::one(), Scalar::int(-1), Scalar::int(2), Scalar::frac(1, 2), i.clone()];
    out.push((&Scalar::one() + &i).half());
    if let Ok(r) = Scalar::sqrt2() {
        out.push(r.half());
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub schema: RuleSchema,
    pub reason: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    /// Instances checked per rule.
    pub checked: BTreeMap<RuleId, usize>,
    pub failures: Vec<Counterexample>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn total(&self) -> usize {
        self.checked.values().sum()
    }

    fn merge(&mut self, other: VerifyReport) {
        for (k, v) in other.checked {
            *self.checked.entry(k).or_default() += v;
        }
        self.failures.extend(other.failures);
    }
}

fn rng_for(bounds: &VerifyBounds, id: RuleId, shape: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(bounds.seed ^ ((id as u64) << 40) ^ shape)
}

fn sample_labels(rng: &mut ChaCha8Rng, labels: &[Scalar], len: usize) -> Vec<Scalar> {
    (0..len).map(|_| labels.choose(rng).cloned().unwrap_or_else(Scalar::one)).collect()
}

fn all_bits(len: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1usize << len).map(move |x| (0..len).map(|j| (x >> (len - 1 - j)) & 1 == 1).collect())
}

/// Every instance of `id` inside `bounds`, in a fixed order.
pub fn instances(id: RuleId, bounds: &VerifyBounds) -> Vec<RuleSchema> {
    let a = bounds.max_arity;
    let l = &bounds.labels;
    let mut ps: Vec<Params> = Vec::new();
    let pairs = || l.iter().flat_map(|x| l.iter().map(move |y| (x.clone(), y.clone())));
    match id {
        RuleId::ZS1 | RuleId::BA1 | RuleId::BA2 => {
            for m in 0..=a {
                for n in 0..=a {
                    ps.push(Params::mn(m, n));
                }
            }
        }
        RuleId::ZS2 | RuleId::HS2 | RuleId::U | RuleId::HALFx2 => ps.push(Params::default()),
        RuleId::HS1 => {
            for m in 0..=a {
                for n in 0..=a {
                    ps.extend(l.iter().map(|x| Params::mn(m, n).with_a(x.clone())));
                }
            }
        }
        RuleId::M | RuleId::A => ps.extend(pairs().map(|(x, y)| Params::ab(x, y))),
        RuleId::Mbang | RuleId::Abang => {
            for k in 0..=a.max(4) {
                ps.extend(pairs().map(|(x, y)| Params::ab(x, y).with_k(k)));
            }
        }
        RuleId::Ubang | RuleId::XCOPY => ps.extend((0..=a).map(Params::k)),
        RuleId::I => ps.extend(l.iter().map(|x| Params::default().with_a(x.clone()))),
        RuleId::Ibang => {
            for k in 0..=a {
                ps.extend(l.iter().map(|x| Params::k(k).with_a(x.clone())));
            }
        }
        RuleId::O => {
            for m in 0..=a {
                for n in 0..=a - m {
                    ps.extend(pairs().map(|(x, y)| Params::mn(m, n).with_a(x).with_b(y)));
                }
            }
        }
        RuleId::IOTACOPY => {
            for len in 1..=a {
                for k in 0..=2 {
                    ps.extend(all_bits(len).map(|b| Params::k(k).with_bits(b)));
                }
            }
        }
        RuleId::CONViota => {
            for len in 0..=a {
                for b in all_bits(len) {
                    ps.extend(pairs().map(|(x, y)| Params::ab(x, y).with_bits(b.clone())));
                }
            }
        }
        RuleId::DISC4 => {
            for x in 0..l.len().pow(4) {
                let labels = (0..4).map(|j| l[(x / l.len().pow(3 - j)) % l.len()].clone()).collect();
                ps.push(Params::default().with_labels(labels));
            }
        }
        RuleId::DISCSTEP => {
            for arms in 1..=4usize {
                for k in 0..=1 {
                    let mut rng = rng_for(bounds, id, (arms * 2 + k) as u64);
                    for flags in all_bits(arms) {
                        for bits in all_bits(arms) {
                            for _ in 0..bounds.samples {
                                let labels = sample_labels(&mut rng, l, arms);
                                ps.push(
                                    Params::k(k).with_flags(flags.clone()).with_bits(bits.clone()).with_labels(labels),
                                );
                            }
                        }
                    }
                }
            }
        }
        RuleId::DISCONNECT => {
            for n in 1..=4usize {
                let mut rng = rng_for(bounds, id, n as u64);
                for _ in 0..bounds.samples.max(1) * 4 {
                    let labels = sample_labels(&mut rng, l, 1 << n);
                    ps.push(Params { n, ..Params::default() }.with_labels(labels));
                }
            }
        }
    }
    ps.into_iter().map(|p| RuleSchema::new(id, p)).collect()
}

const SAMPLED_ENTRIES: usize = 48;

/// Whether both sides of `rule` denote the same tensor, scalar included.
/// Sides with more than twelve slots are compared on a fixed sample of
/// boundary assignments.
pub fn check_rule(rule: &Rule) -> Result<bool> {
    let limits = EvalLimits { max_boundary: 12, max_width: 24 };
    let k = rule.slots();
    if rule.rhs.n_outputs() != k || rule.lhs.n_inputs() != 0 || rule.rhs.n_inputs() != 0 {
        return Ok(false);
    }
    if k <= limits.max_boundary {
        let (l, r) = (eval_with(&rule.lhs, limits)?, eval_with(&rule.rhs, limits)?);
        return tensor_equal(&l, &r, false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
    let mut points = vec![vec![false; k], vec![true; k]];
    points.extend((0..SAMPLED_ENTRIES).map(|_| (0..k).map(|_| rng.gen_bool(0.5)).collect()));
    let (l, r) = (EntryEvaluator::new(&rule.lhs)?, EntryEvaluator::new(&rule.rhs)?);
    for bits in points {
        if l.entry(&bits, limits)? != r.entry(&bits, limits)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_one(schema: &RuleSchema) -> Option<Counterexample> {
    let fail = |reason: String| Some(Counterexample { schema: schema.clone(), reason });
    match schema.instantiate().and_then(|r| check_rule(&r)) {
        Ok(true) => None,
        Ok(false) => fail("left and right sides evaluate differently".into()),
        Err(e) => fail(e.to_string()),
    }
}

/// Check every instance of one schema inside `bounds`.
pub fn verify_schema(id: RuleId, bounds: &VerifyBounds) -> VerifyReport {
    let list = instances(id, bounds);
    let mut report = VerifyReport::default();
    report.checked.insert(id, list.len());
    report.failures = list.iter().filter_map(check_one).collect();
    report
}

pub fn verify_all(ids: &[RuleId], bounds: &VerifyBounds) -> VerifyReport {
    let mut report = VerifyReport::default();
    for &id in ids {
        report.merge(verify_schema(id, bounds));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyBounds {
        VerifyBounds { max_arity: 2, labels: vec![Scalar::int(-1), Scalar::int(3)], samples: 1, seed: 1 }
    }

    #[test]
    fn small_bounds_pass() {
        let report = verify_all(&RuleId::ALL, &small());
        assert!(report.passed(), "{:?}", report.failures);
        assert!(report.total() > 50);
    }

    #[test]
    fn corrupted_multiplication_fails() {
        let schema = RuleSchema::new(RuleId::M, Params::ab(Scalar::int(2), Scalar::int(3)));
        let mut rule = schema.instantiate().unwrap();
        let h = rule.rhs.vertex_ids()[0];
        rule.rhs.set_kind(h, crate::diagram::Kind::H(Scalar::int(5)));
        assert!(!check_rule(&rule).unwrap());
    }
}
