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

//! Canonical hashing by iterated adjacency-signature refinement.
//!
//! This is colour refinement, not full canonisation: isomorphic diagrams
//! always agree, and collisions between non-isomorphic ones are possible
//! but not expected in practice. Equality of diagrams is decided by normal
//! forms; the digest only guards trace integrity.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest as _, Sha256};

use super::{Diagram, End, Kind};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest(pub [u8; 32]);

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hex::encode(self.0))
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({})", &hex::encode(self.0)[..16])
    }
}

impl std::str::FromStr for Digest {
    type Err = hex::FromHexError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = [0u8; 32];
        hex::decode_to_slice(s, &mut out)?;
        Ok(Digest(out))
    }
}

impl Serialize for Digest {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Digest {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn mix(h: u64, x: u64) -> u64 {
    splitmix(h.rotate_left(17) ^ x)
}

fn mix_bytes(mut h: u64, bytes: &[u8]) -> u64 {
    for chunk in bytes.chunks(8) {
        let mut buf = [0u8; 8];
        buf[..chunk.len()].copy_from_slice(chunk);
        h = mix(h, u64::from_le_bytes(buf));
    }
    mix(h, bytes.len() as u64)
}

fn initial_colour(d: &Diagram, e: End) -> u64 {
    match e {
        End::Vertex(v) => match d.kind(v) {
            Some(Kind::Z) => mix_bytes(1, b"Z"),
            Some(Kind::H(a)) => mix_bytes(2, a.to_string().as_bytes()),
            None => 0,
        },
        End::Input(i) => mix(3, i as u64),
        End::Output(j) => mix(4, j as u64),
    }
}

impl Diagram {
    pub fn canonical_hash(&self) -> Digest {
        let items: Vec<End> =
            self.vertices().map(|(v, _)| End::Vertex(v)).chain(self.inputs()).chain(self.outputs()).collect();
        let neighbours: BTreeMap<End, Vec<End>> = items.iter().map(|&e| (e, self.neighbours(e))).collect();
        let mut colour: BTreeMap<End, u64> = items.iter().map(|&e| (e, initial_colour(self, e))).collect();
        let mut classes = colour.values().collect::<BTreeSet<_>>().len();
        for _ in 0..items.len().max(1) {
            let next: BTreeMap<End, u64> = items
                .iter()
                .map(|&e| {
                    let mut sig: Vec<u64> = neighbours[&e].iter().map(|n| colour[n]).collect();
                    sig.sort_unstable();
                    let h = sig.into_iter().fold(mix(colour[&e], 0x5a), mix);
                    (e, h)
                })
                .collect();
            let next_classes = next.values().collect::<BTreeSet<_>>().len();
            colour = next;
            if next_classes == classes {
                break;
            }
            classes = next_classes;
        }
        let mut hasher = Sha256::new();
        hasher.update(b"zh-diagram-v1");
        hasher.update((self.n_inputs() as u64).to_le_bytes());
        hasher.update((self.n_outputs() as u64).to_le_bytes());
        let mut vs: Vec<u64> = self.vertices().map(|(v, _)| colour[&End::Vertex(v)]).collect();
        vs.sort_unstable();
        hasher.update((vs.len() as u64).to_le_bytes());
        for c in vs {
            hasher.update(c.to_le_bytes());
        }
        for e in self.inputs().chain(self.outputs()) {
            hasher.update(colour[&e].to_le_bytes());
        }
        let mut ws: Vec<(u64, u64)> = self
            .wires()
            .map(|(_, a, b)| {
                let (x, y) = (colour.get(&a).copied().unwrap_or(0), colour.get(&b).copied().unwrap_or(0));
                (x.min(y), x.max(y))
            })
            .collect();
        ws.sort_unstable();
        hasher.update((ws.len() as u64).to_le_bytes());
        for (x, y) in ws {
            hasher.update(x.to_le_bytes());
            hasher.update(y.to_le_bytes());
        }
        Digest(hasher.finalize().into())
    }
}
