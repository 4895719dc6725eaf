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

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use num_rational::Rational64;
use serde_json::json;
use zh_core::diagram::{parse_diagram, print_diagram, to_dot, to_tikz};
use zh_core::encoders::{
    hypergraph_state, logic_gate, phase_poly_unitary, zx_generator, Gate, Hypergraph, PhasePolynomial, ZxGenerator,
};
use zh_core::normalform::{equal_tol, normalize, NormalForm};
use zh_core::rewrite::{default_labels, replay_with, verify_all, ReplayOptions, RuleId, Trace, VerifyBounds};
use zh_core::scalar::{parse_scalar, set_field_order};
use zh_core::{eval, Diagram, Tensor};

use crate::{Cli, Command, Encode, Format, Global, ZxKind};

pub fn run(cli: &Cli) -> Result<ExitCode> {
    let g = &cli.global;
    if let Some(k) = g.field_order {
        set_field_order(k)?;
    }
    match &cli.command {
        Command::Eval { file } => {
            let t = eval(&load(file)?)?;
            emit(g, if g.json { pretty(&t.to_json()) } else { tensor_text(&t) })?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Normalize { file, trace } => {
            let (nf, tr) = normalize(&load(file)?)?;
            if let Some(path) = trace {
                write_trace(path, &tr)?;
            }
            emit(g, nf_output(g, &nf))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Equal { file1, file2, trace } => {
            let (same, t1, t2) = equal_tol(&load(file1)?, &load(file2)?, g.approx_tol)?;
            if let Some(prefix) = trace {
                write_trace(&suffixed(prefix, "1.jsonl"), &t1)?;
                write_trace(&suffixed(prefix, "2.jsonl"), &t2)?;
            }
            let word = if same { "equal" } else { "not equal" };
            emit(g, if g.json { pretty(&json!({ "equal": same })) } else { format!("{word}\n") })?;
            Ok(if same { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::VerifyRules { max_arity, labels, rules, basic } => {
            let labels = match labels {
                Some(path) => read_labels(path)?,
                None => default_labels(),
            };
            let ids: Vec<RuleId> = if *basic {
                RuleId::BASIC.to_vec()
            } else if rules.is_empty() {
                RuleId::ALL.to_vec()
            } else {
                rules.iter().map(|r| r.parse()).collect::<Result<_, _>>()?
            };
            let bounds = VerifyBounds { max_arity: *max_arity, labels, ..VerifyBounds::default() };
            let report = verify_all(&ids, &bounds);
            let text = if g.json {
                pretty(&json!({
                    "passed": report.passed(),
                    "total": report.total(),
                    "checked": report.checked.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
                    "failures": report.failures.iter().map(|f| json!({ "schema": f.schema.to_string(), "reason": f.reason })).collect::<Vec<_>>(),
                }))
            } else {
                let mut s = String::new();
                for (id, n) in &report.checked {
                    let bad = report.failures.iter().filter(|f| f.schema.id == *id).count();
                    s.push_str(&format!(
                        "{:<11} {n:>6} checked  {}\n",
                        id.to_string(),
                        if bad == 0 { "ok".into() } else { format!("{bad} FAILED") }
                    ));
                }
                for f in &report.failures {
                    s.push_str(&format!("counterexample: {}: {}\n", f.schema, f.reason));
                }
                s.push_str(&format!(
                    "{} instances, {}\n",
                    report.total(),
                    if report.passed() { "all sound" } else { "failures found" }
                ));
                s
            };
            emit(g, text)?;
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Encode { what } => {
            let d = encode(what)?;
            emit(g, if g.json { pretty(&json!({ "diagram": print_diagram(&d) })) } else { print_diagram(&d) })?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Render { file, format } => {
            let d = load(file)?;
            emit(
                g,
                match format {
                    Format::Dot => to_dot(&d),
                    Format::Tikz => to_tikz(&d),
                },
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Replay { file, trace, no_check } => {
            let d = load(file)?;
            let text = fs::read_to_string(trace).with_context(|| format!("reading {}", trace.display()))?;
            let tr = Trace::from_jsonl(&text)?;
            let end = replay_with(&d, &tr, ReplayOptions { check_steps: !no_check })?;
            let inputs = if tr.bent { d.n_inputs() } else { 0 };
            let nf = NormalForm::new(eval(&end)?.bend_to_state().into_entries())?.with_inputs(inputs);
            emit(g, nf_output(g, &nf))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load(path: &Path) -> Result<Diagram> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_diagram(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(g: &Global, text: String) -> Result<()> {
    match &g.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("JSON values serialize"))
}

fn write_trace(path: &Path, trace: &Trace) -> Result<()> {
    fs::write(path, trace.to_jsonl()).with_context(|| format!("writing {}", path.display()))
}

fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

fn bits(x: usize, width: usize) -> String {
    (0..width).map(|j| if (x >> (width - 1 - j)) & 1 == 1 { '1' } else { '0' }).collect()
}

fn tensor_text(t: &Tensor) -> String {
    let (m, n) = (t.n_inputs(), t.n_outputs());
    let mut s = format!("{m} -> {n}\n");
    for out in 0..1usize << n {
        for inp in 0..1usize << m {
            s.push_str(&format!("|{}><{}|  {}\n", bits(out, n), bits(inp, m), t.get(out, inp)));
        }
    }
    s
}

fn nf_output(g: &Global, nf: &NormalForm) -> String {
    if g.json {
        return pretty(&nf.to_json());
    }
    let n = nf.n_outputs();
    let mut s = format!("normal form on {n} wires ({} bent inputs)\n", nf.original_inputs());
    for (x, c) in nf.coeffs().iter().enumerate() {
        s.push_str(&format!("{}  {c}\n", if n == 0 { "-".into() } else { bits(x, n) }));
    }
    s
}

fn read_labels(path: &Path) -> Result<Vec<zh_core::Scalar>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let labels = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| parse_scalar(l).with_context(|| format!("label `{l}`")))
        .collect::<Result<Vec<_>>>()?;
    if labels.is_empty() {
        bail!("{} holds no labels", path.display());
    }
    Ok(labels)
}

fn parse_edges(text: &str) -> Result<Vec<Vec<usize>>> {
    text.split(';')
        .map(str::trim)
        .filter(|e| !e.is_empty())
        .map(|e| {
            e.split(',')
                .map(|v| v.trim().parse::<usize>().with_context(|| format!("bad vertex in hyperedge `{e}`")))
                .collect()
        })
        .collect()
}

fn encode(what: &Encode) -> Result<Diagram> {
    Ok(match what {
        Encode::Gate { name } => logic_gate(name.parse::<Gate>()?)?,
        Encode::Hypergraph { n, edges } => hypergraph_state(&Hypergraph::new(*n, parse_edges(edges)?)?),
        Encode::Phasepoly { poly, m, vars } => phase_poly_unitary(&PhasePolynomial::parse(poly, *m, *vars)?)?,
        Encode::Zx { kind, inputs, outputs, phase } => {
            let phase: Rational64 = phase.trim().parse().with_context(|| format!("phase `{phase}`"))?;
            let (m, n) = (*inputs, *outputs);
            zx_generator(match kind {
                ZxKind::Green => ZxGenerator::Green { m, n, phase },
                ZxKind::Red => ZxGenerator::Red { m, n, phase },
                ZxKind::Hadamard => ZxGenerator::Hadamard,
            })
        }
    })
}
