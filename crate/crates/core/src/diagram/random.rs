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

//! Random diagrams for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Diagram, End};
use crate::scalar::Scalar;

/// Shape limits for [`random_diagram`].
#[derive(Clone, Debug)]
pub struct RandomShape {
    /// Inputs plus outputs.
    pub max_boundary: usize,
    pub max_generators: usize,
    /// Wires between generators beyond those fixed by the boundary.
    pub max_inner_wires: usize,
    /// Inner wires are skipped once they would push a generator past this.
    pub max_degree: usize,
    /// Labels H-boxes draw from.
    pub labels: Vec<Scalar>,
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape {
            max_boundary: 4,
            max_generators: 8,
            max_inner_wires: 8,
            max_degree: 4,
            labels: vec![Scalar::int(-1), Scalar::int(2), Scalar::frac(1, 2), Scalar::i(), Scalar::zero()],
        }
    }
}

pub fn random_diagram<R: Rng + ?Sized>(rng: &mut R, shape: &RandomShape) -> Diagram {
    let boundary = rng.gen_range(0..=shape.max_boundary);
    let m = rng.gen_range(0..=boundary);
    let mut d = Diagram::new(m, boundary - m);
    let g = rng.gen_range(0..=shape.max_generators);
    let vs: Vec<_> = (0..g)
        .map(|_| {
            if rng.gen_bool(0.5) || shape.labels.is_empty() {
                d.add_z()
            } else {
                d.add_h(shape.labels.choose(rng).expect("labels").clone())
            }
        })
        .collect();
    let mut slots: Vec<End> = (0..m).map(End::Input).chain((0..boundary - m).map(End::Output)).collect();
    slots.shuffle(rng);
    while let Some(s) = slots.pop() {
        if vs.is_empty() || (!slots.is_empty() && rng.gen_ratio(1, 6)) {
            match slots.pop() {
                Some(t) => {
                    d.add_wire(s, t);
                }
                None => {
                    // A lone slot with nowhere to go gets a unit spider.
                    let z = d.add_z();
                    d.add_wire(s, End::Vertex(z));
                }
            }
        } else {
            d.add_wire(s, End::Vertex(*vs.choose(rng).expect("generators")));
        }
    }
    if !vs.is_empty() {
        for _ in 0..rng.gen_range(0..=shape.max_inner_wires) {
            let a = *vs.choose(rng).expect("generators");
            let b = *vs.choose(rng).expect("generators");
            let (ea, eb) = (End::Vertex(a), End::Vertex(b));
            if d.degree(ea).max(d.degree(eb)) + 1 + usize::from(a == b) <= shape.max_degree {
                d.add_wire(ea, eb);
            }
        }
    }
    d
}
