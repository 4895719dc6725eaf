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

use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("label w[{m}] needs field order at least {}, configured order is {k}", m + 1)]
    UnrepresentableLabel { m: u32, k: u32 },
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("diagram too large: {0}")]
    TooLarge(String),
    #[error("tensor shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("bad rule parameters: {0}")]
    BadParams(String),
    #[error("invalid match: {0}")]
    InvalidMatch(String),
    #[error("corrupt trace: {0}")]
    CorruptTrace(String),
    #[error("no such output: {0}")]
    NoOutput(String),
    #[error("bad shape: length {0} is not a power of two")]
    BadShape(usize),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }
}
