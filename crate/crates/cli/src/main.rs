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

//! `zh`: evaluate, normalize, compare, verify, encode and render ZH diagrams.
//!
//! Exit status is 0 on success, 1 on a negative answer (`equal` false,
//! `verify-rules` with failures) and 2 on any error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "zh", version, about = "ZH-calculus diagrams: exact evaluation, certified normal forms, rule checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Emit structured JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Cyclotomic field order k: labels live in Q(exp(iπ/2^(k-1))).
    #[arg(long, global = true, env = "ZH_FIELD_ORDER")]
    pub field_order: Option<u32>,
    /// Tolerance when comparing values that involve approximate labels.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub approx_tol: f64,
    /// Write the main output here instead of standard output.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the tensor a diagram denotes.
    Eval { file: PathBuf },
    /// Reduce a diagram to normal form.
    Normalize {
        file: PathBuf,
        /// Write the derivation as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Decide whether two diagrams denote the same map.
    Equal {
        file1: PathBuf,
        file2: PathBuf,
        /// Write both derivations as `PREFIX.1.jsonl` and `PREFIX.2.jsonl`.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check rule instances for soundness by evaluation.
    VerifyRules {
        /// Largest spider arity to instantiate.
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
        /// Scalar literals to use as labels, one per line.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Comma-separated rule names; defaults to every rule.
        #[arg(long, value_delimiter = ',')]
        rules: Vec<String>,
        /// Only the eleven basic rules.
        #[arg(long, conflicts_with = "rules")]
        basic: bool,
    },
    /// Write the diagram of a gate, hypergraph state, phase polynomial or ZX generator.
    Encode {
        #[command(subcommand)]
        what: Encode,
    },
    /// Export a diagram as DOT or TikZ.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Replay a derivation and print the normal form it reaches.
    #[command(hide = true)]
    Replay {
        file: PathBuf,
        trace: PathBuf,
        /// Skip re-checking each step's rule instance.
        #[arg(long)]
        no_check: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum Encode {
    /// and, not, xor, toffoli, ccz, cnz<N>.
    Gate { name: String },
    /// Hypergraph state: vertex count, then hyperedges like `0,1;0,1,2`.
    Hypergraph {
        n: usize,
        #[arg(default_value = "")]
        edges: String,
    },
    /// Phase-polynomial unitary, e.g. `b1b2 + b1b2b3 + b3b4`.
    Phasepoly {
        poly: String,
        /// Phase ω = exp(iπ/2^m).
        #[arg(short = 'm', long = "order", default_value_t = 1)]
        m: u32,
        /// Number of variables; defaults to the largest one used.
        #[arg(long)]
        vars: Option<usize>,
    },
    /// ZX generator with phase given as a multiple of π, e.g. `1/4`.
    Zx {
        #[arg(value_enum)]
        kind: ZxKind,
        #[arg(long, default_value_t = 1)]
        inputs: usize,
        #[arg(long, default_value_t = 1)]
        outputs: usize,
        #[arg(long, default_value = "0")]
        phase: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZxKind {
    Green,
    Red,
    Hadamard,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Dot,
    Tikz,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
