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

//! A rewriting engine for the ZH-calculus.
//!
//! Diagrams are open multigraphs of Z-spiders and H-boxes. The crate
//! evaluates them exactly, rewrites them with the calculus's rules, and
//! reduces any diagram to a unique normal form with a replayable trace.

pub mod error;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Cyclo, Scalar};
pub mod diagram;
pub mod encoders;
pub mod normalform;
pub mod rewrite;
pub mod semantics;

pub use diagram::{Diagram, End, Kind};
pub use semantics::{eval, tensor_equal, Tensor};
