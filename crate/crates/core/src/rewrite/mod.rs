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

//! Rule schemas, matching, rewriting, derivation traces and soundness checks.
//!
//! A schema is a family of rules; fixing its [`Params`] and a [`Direction`]
//! gives a concrete [`Rule`], a pair of states with the same number of
//! boundary slots. Rewriting replaces an embedded copy of the left side by
//! the right side, reconnecting each boundary slot to whatever the left
//! side's slot was attached to.

mod apply;
mod matcher;
mod schemas;
mod trace;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diagram::{Diagram, VertexId};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use apply::{apply, apply_in_place, Applied};
pub(crate) use matcher::embeddings_within;
pub use matcher::{find_first, find_matches, find_matches_limited, Embedding, Pins};
pub(crate) use schemas::nf_picture;
pub(crate) use trace::Recorder;
pub use trace::{replay, replay_with, state_digest, ReplayOptions, StateDigest, Trace, TraceStep};
pub use verify::{
    check_rule, default_labels, instances, verify_all, verify_schema, Counterexample, VerifyBounds, VerifyReport,
};

/// Every rule schema known to the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    ZS1,
    ZS2,
    HS1,
    HS2,
    BA1,
    BA2,
    M,
    U,
    A,
    I,
    O,
    Mbang,
    Ubang,
    Abang,
    Ibang,
    XCOPY,
    IOTACOPY,
    CONViota,
    HALFx2,
    DISC4,
    DISCSTEP,
    DISCONNECT,
}

impl RuleId {
    pub const ALL: [RuleId; 22] = [
        RuleId::ZS1,
        RuleId::ZS2,
        RuleId::HS1,
        RuleId::HS2,
        RuleId::BA1,
        RuleId::BA2,
        RuleId::M,
        RuleId::U,
        RuleId::A,
        RuleId::I,
        RuleId::O,
        RuleId::Mbang,
        RuleId::Ubang,
        RuleId::Abang,
        RuleId::Ibang,
        RuleId::XCOPY,
        RuleId::IOTACOPY,
        RuleId::CONViota,
        RuleId::HALFx2,
        RuleId::DISC4,
        RuleId::DISCSTEP,
        RuleId::DISCONNECT,
    ];

    /// The eleven basic rules of the calculus.
    pub const BASIC: [RuleId; 11] = [
        RuleId::ZS1,
        RuleId::ZS2,
        RuleId::HS1,
        RuleId::HS2,
        RuleId::BA1,
        RuleId::BA2,
        RuleId::M,
        RuleId::U,
        RuleId::A,
        RuleId::I,
        RuleId::O,
    ];

    pub fn is_basic(self) -> bool {
        Self::BASIC.contains(&self)
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleId::ZS1 => "ZS1",
            RuleId::ZS2 => "ZS2",
            RuleId::HS1 => "HS1",
            RuleId::HS2 => "HS2",
            RuleId::BA1 => "BA1",
            RuleId::BA2 => "BA2",
            RuleId::M => "M",
            RuleId::U => "U",
            RuleId::A => "A",
            RuleId::I => "I",
            RuleId::O => "O",
            RuleId::Mbang => "Mbang",
            RuleId::Ubang => "Ubang",
            RuleId::Abang => "Abang",
            RuleId::Ibang => "Ibang",
            RuleId::XCOPY => "XCOPY",
            RuleId::IOTACOPY => "IOTACOPY",
            RuleId::CONViota => "CONViota",
            RuleId::HALFx2 => "HALFx2",
            RuleId::DISC4 => "DISC4",
            RuleId::DISCSTEP => "DISCSTEP",
            RuleId::DISCONNECT => "DISCONNECT",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = Error;
    fn from_str(s: &str) -> Result<RuleId> {
        RuleId::ALL
            .iter()
            .copied()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::BadParams(format!("unknown rule `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[default]
    #[serde(rename = "ltr")]
    LeftToRight,
    #[serde(rename = "rtl")]
    RightToLeft,
}

/// Schema parameters. Each schema reads only the fields it needs:
///
/// | schema | fields |
/// |---|---|
/// | ZS1, BA1, BA2 | `m`, `n` |
/// | HS1 | `m`, `n`, `a` |
/// | M, A | `a`, `b` |
/// | I | `a` |
/// | O | `m`, `n`, `a`, `b` |
/// | Mbang, Abang | `k`, `a`, `b` |
/// | Ubang, XCOPY | `k` |
/// | Ibang | `k`, `a` |
/// | IOTACOPY | `bits`, `k` (fan-out) |
/// | CONViota | `bits`, `a`, `b` |
/// | DISC4 | `labels` (4) |
/// | DISCONNECT | `n`, `labels` (2^n) |
/// | DISCSTEP | `k` (free legs per arm), `flags`, `bits`, `labels` (one each per arm) |
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default)]
    pub m: usize,
    #[serde(default)]
    pub n: usize,
    #[serde(default)]
    pub k: usize,
    #[serde(default = "Scalar::one")]
    pub a: Scalar,
    #[serde(default = "Scalar::one")]
    pub b: Scalar,
    #[serde(default, with = "bitvec")]
    pub bits: Vec<bool>,
    #[serde(default, with = "bitvec")]
    pub flags: Vec<bool>,
    #[serde(default)]
    pub labels: Vec<Scalar>,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            m: 0,
            n: 0,
            k: 0,
            a: Scalar::one(),
            b: Scalar::one(),
            bits: Vec::new(),
            flags: Vec::new(),
            labels: Vec::new(),
        }
    }
}

impl Params {
    pub fn mn(m: usize, n: usize) -> Params {
        Params { m, n, ..Default::default() }
    }

    pub fn k(k: usize) -> Params {
        Params { k, ..Default::default() }
    }

    pub fn ab(a: Scalar, b: Scalar) -> Params {
        Params { a, b, ..Default::default() }
    }

    pub fn with_k(mut self, k: usize) -> Params {
        self.k = k;
        self
    }

    pub fn with_a(mut self, a: Scalar) -> Params {
        self.a = a;
        self
    }

    pub fn with_b(mut self, b: Scalar) -> Params {
        self.b = b;
        self
    }

    pub fn with_bits(mut self, bits: Vec<bool>) -> Params {
        self.bits = bits;
        self
    }

    pub fn with_flags(mut self, flags: Vec<bool>) -> Params {
        self.flags = flags;
        self
    }

    pub fn with_labels(mut self, labels: Vec<Scalar>) -> Params {
        self.labels = labels;
        self
    }
}

mod bitvec {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bits: &[bool], s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&bits.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<bool>, D::Error> {
        let s = String::deserialize(d)?;
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(serde::de::Error::custom(format!("bad bit `{c}`"))),
            })
            .collect()
    }
}

/// A schema together with its parameters and orientation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleSchema {
    pub id: RuleId,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub direction: Direction,
}

impl RuleSchema {
    pub fn new(id: RuleId, params: Params) -> RuleSchema {
        RuleSchema { id, params, direction: Direction::LeftToRight }
    }

    pub fn reversed(mut self) -> RuleSchema {
        self.direction = match self.direction {
            Direction::LeftToRight => Direction::RightToLeft,
            Direction::RightToLeft => Direction::LeftToRight,
        };
        self
    }

    pub fn instantiate(&self) -> Result<Rule> {
        instantiate(self)
    }
}

impl fmt::Display for RuleSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id)?;
        let p = &self.params;
        let mut parts = Vec::new();
        if p.m != 0 || p.n != 0 {
            parts.push(format!("m={} n={}", p.m, p.n));
        }
        if p.k != 0 {
            parts.push(format!("k={}", p.k));
        }
        if !p.a.is_one() || !p.b.is_one() {
            parts.push(format!("a={} b={}", p.a, p.b));
        }
        if !p.bits.is_empty() {
            parts.push(format!("bits={}", p.bits.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>()));
        }
        if !p.labels.is_empty() {
            parts.push(format!("labels=[{}]", p.labels.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")));
        }
        if !parts.is_empty() {
            write!(f, "({})", parts.join(" "))?;
        }
        if self.direction == Direction::RightToLeft {
            f.write_str(" ←")?;
        }
        Ok(())
    }
}

/// A concrete rule: two states with equal slot counts.
///
/// `keep` pairs a left vertex with a right vertex that takes over its host
/// id when the rule is applied. `lhs_halves`/`rhs_halves` list the scalar
/// `1/2` boxes that belong to NOT gadgets, as opposed to loose scalars.
#[derive(Clone, Debug)]
pub struct Rule {
    pub lhs: Diagram,
    pub rhs: Diagram,
    pub keep: Vec<(VertexId, VertexId)>,
    pub lhs_halves: Vec<VertexId>,
    pub rhs_halves: Vec<VertexId>,
}

impl Rule {
    pub fn slots(&self) -> usize {
        self.lhs.n_outputs()
    }

    fn reversed(self) -> Rule {
        Rule {
            lhs: self.rhs,
            rhs: self.lhs,
            keep: self.keep.into_iter().map(|(l, r)| (r, l)).collect(),
            lhs_halves: self.rhs_halves,
            rhs_halves: self.lhs_halves,
        }
    }
}

pub fn instantiate(schema: &RuleSchema) -> Result<Rule> {
    let rule = schemas::build(schema.id, &schema.params)?;
    debug_assert_eq!(rule.lhs.n_outputs(), rule.rhs.n_outputs());
    Ok(match schema.direction {
        Direction::LeftToRight => rule,
        Direction::RightToLeft => rule.reversed(),
    })
}

/// A schema plus an embedding of its left side into a host diagram.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleInstance {
    pub schema: RuleSchema,
    pub embedding: Embedding,
}
