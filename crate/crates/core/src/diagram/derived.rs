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

//! Grey spiders and NOT, built from Z-spiders and H-boxes.

use super::{Diagram, End, VertexId};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivedGenerator {
    /// XOR-type spider with `m` inputs and `n` outputs.
    GreySpider(usize, usize),
    Not,
}

pub fn expand_derived(g: DerivedGenerator) -> Diagram {
    match g {
        DerivedGenerator::GreySpider(m, n) => grey_spider(m, n),
        DerivedGenerator::Not => not_gate(),
    }
}

/// Grey spider: one Z-spider, a 2-ary H-box on every leg, and a scalar `1/2`.
pub fn grey_spider(m: usize, n: usize) -> Diagram {
    let mut d = Diagram::new(m, n);
    let legs: Vec<End> = d.inputs().chain(d.outputs()).collect();
    add_grey(&mut d, &legs);
    d
}

/// Add a grey spider whose legs attach to `legs`. Returns the centre spider.
pub(crate) fn add_grey(d: &mut Diagram, legs: &[End]) -> VertexId {
    let z = d.add_z();
    for &e in legs {
        let h = d.add_h(Scalar::int(-1));
        d.add_wire(e, End::Vertex(h));
        d.add_wire(End::Vertex(h), End::Vertex(z));
    }
    d.add_h(Scalar::frac(1, 2));
    z
}

/// NOT as a 1→1 diagram.
pub fn not_gate() -> Diagram {
    let mut d = Diagram::new(1, 1);
    add_not(&mut d, End::Input(0), End::Output(0));
    d
}

/// The five vertices of a NOT gadget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NotGadget {
    /// 2-ary H-box on the `a` side.
    pub near: VertexId,
    pub centre: VertexId,
    /// 1-ary H-box hanging off the centre spider.
    pub phase: VertexId,
    /// 2-ary H-box on the `b` side.
    pub far: VertexId,
    /// Scalar `1/2`; absent in the bare form, which equals twice NOT.
    pub scalar: Option<VertexId>,
}

/// Insert `a - H - Z(H(-1)) - H - b` with a scalar `1/2`.
pub(crate) fn add_not(d: &mut Diagram, a: End, b: End) -> NotGadget {
    let mut g = add_not_bare(d, a, b);
    g.scalar = Some(d.add_h(Scalar::frac(1, 2)));
    g
}

/// The NOT gadget without its scalar.
pub(crate) fn add_not_bare(d: &mut Diagram, a: End, b: End) -> NotGadget {
    let near = d.add_h(Scalar::int(-1));
    let centre = d.add_z();
    let phase = d.add_h(Scalar::int(-1));
    let far = d.add_h(Scalar::int(-1));
    let scalar = None;
    d.add_wire(a, End::Vertex(near));
    d.add_wire(End::Vertex(near), End::Vertex(centre));
    d.add_wire(End::Vertex(centre), End::Vertex(phase));
    d.add_wire(End::Vertex(centre), End::Vertex(far));
    d.add_wire(End::Vertex(far), b);
    NotGadget { near, centre, phase, far, scalar }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{eval, Tensor};

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::int(x)).collect()
    }

    #[test]
    fn not_is_pauli_x() {
        let t = eval(&expand_derived(DerivedGenerator::Not)).unwrap();
        assert_eq!(t, Tensor::from_entries(1, 1, ints(&[0, 1, 1, 0])).unwrap());
    }

    #[test]
    fn grey_two_to_one_is_xor() {
        let t = eval(&grey_spider(2, 1)).unwrap();
        // rows: output 0 then output 1; columns: inputs 00,01,10,11
        assert_eq!(t, Tensor::from_entries(2, 1, ints(&[1, 0, 0, 1, 0, 1, 1, 0])).unwrap());
    }

    #[test]
    fn grey_one_to_one_is_identity() {
        let t = eval(&grey_spider(1, 1)).unwrap();
        assert_eq!(t, Tensor::from_entries(1, 1, ints(&[1, 0, 0, 1])).unwrap());
    }

    #[test]
    fn expansions_use_only_primitive_kinds() {
        for g in [DerivedGenerator::Not, DerivedGenerator::GreySpider(3, 2)] {
            let d = expand_derived(g);
            d.validate().unwrap();
        }
    }
}
