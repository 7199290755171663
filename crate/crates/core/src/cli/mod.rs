//! Command-line surface. Every command emits JSON (or JSON Lines) with
//! `"schema": "opair-1"`; rationals are lowest-terms strings.
//!
//! Exit codes: 0 all checks pass, 1 an asserted identity failed, 2 usage or
//! input error, 3 internal error.

mod analysis;
mod document;
mod suites;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

pub use analysis::{analyze_pair, r_squared_verdicts, AnalysisReport, SCHEMA};
pub use document::{parse_pair, PairDocument};
pub use suites::{run_suite, SuiteOutcome, SuiteParams, SUITES};

use crate::diffop::{commutation_table, BracketKind};
use crate::error::Error;
use crate::isotopic::MatrixPair;
use crate::rng::{SplitMix64, DEFAULT_RANGE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "opair", version, about = "Exact invariants of matrix pairs and their hybrids")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze one pair read from a JSON document.
    Analyze {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites on seeded random samples.
    Verify {
        /// Suite name or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        /// Matrix sizes, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, env = "OPAIR_SEED", default_value_t = 0)]
        seed: u64,
        /// Entries are drawn uniformly from [-range, range].
        #[arg(long, default_value_t = DEFAULT_RANGE)]
        range: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyze random pairs into a JSON Lines census.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count: usize,
        #[arg(long, env = "OPAIR_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RANGE)]
        range: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Commutation table of the basis e_n of the d/dx, x hybrid.
    Difftable {
        #[arg(long = "max")]
        max_index: usize,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::PropertyViolation(_) => EXIT_VIOLATION,
            Error::Parse(_) | Error::DimensionMismatch { .. } | Error::Precondition(_) => EXIT_USAGE,
            Error::Singular(_) => EXIT_INTERNAL,
        };
        Self { code, message: e.to_string() }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map_err(|e| Failure { code: EXIT_INTERNAL, message: e.to_string() })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn passed_code(passed: bool) -> i32 {
    if passed {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

fn analyze(pair: &Path, out: Option<&Path>) -> Result<i32, Failure> {
    let text = std::fs::read_to_string(pair)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", pair.display())))?;
    let p = parse_pair(&text)?;
    let report = analyze_pair(&p, r_squared_verdicts(p.n())?)?;
    emit(out, &to_json(&report)?)?;
    Ok(passed_code(report.passed()))
}

fn verify(
    suite: &str,
    ns: &[usize],
    params: SuiteParams,
    out: Option<&Path>,
) -> Result<i32, Failure> {
    if ns.is_empty() || ns.contains(&0) {
        return Err(Failure::usage("--n needs sizes of at least 1"));
    }
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut outcomes = Vec::new();
    for name in names {
        let outcome = run_suite(name, &params, ns)
            .ok_or_else(|| Failure::usage(format!("unknown suite {name:?}; known: all, {}", SUITES.join(", "))))?;
        outcomes.push(outcome);
    }
    let passed = outcomes.iter().all(|o| o.passed);
    let summary = json!({
        "schema": SCHEMA,
        "command": "verify",
        "seed": params.seed,
        "samples": params.samples,
        "range": params.range,
        "n": ns,
        "passed": passed,
        "suites": outcomes,
    });
    emit(out, &to_json(&summary)?)?;
    Ok(passed_code(passed))
}

#[derive(Serialize)]
struct SweepRecord {
    index: usize,
    seed: u64,
    #[serde(flatten)]
    report: AnalysisReport,
}

fn sweep(n: usize, count: usize, seed: u64, range: u64, out: Option<&Path>) -> Result<i32, Failure> {
    if count == 0 || n == 0 {
        return Err(Failure::usage("--n and --count must be at least 1"));
    }
    let r_squared = r_squared_verdicts(n)?;
    let reports: Vec<AnalysisReport> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut g = SplitMix64::for_sample(seed, i as u64);
            let p = MatrixPair::new(g.mat(n, range), g.mat(n, range))?;
            analyze_pair(&p, r_squared.clone())
        })
        .collect::<Result<_, Error>>()?;

    let mut lines = Vec::with_capacity(count + 1);
    let mut distribution: BTreeMap<(usize, usize, String), usize> = BTreeMap::new();
    let mut failed = Vec::new();
    for (index, report) in reports.into_iter().enumerate() {
        let class = serde_json::to_value(report.classification)
            .map_err(|e| Failure { code: EXIT_INTERNAL, message: e.to_string() })?;
        *distribution.entry((report.a, report.a0, class.as_str().unwrap_or("none").to_string())).or_default() += 1;
        if !report.passed() {
            failed.push(index);
        }
        let record = SweepRecord { index, seed, report };
        lines.push(serde_json::to_string(&record).map_err(|e| Failure { code: EXIT_INTERNAL, message: e.to_string() })?);
    }
    let distribution: Vec<_> = distribution
        .into_iter()
        .map(|((a, a0, classification), count)| json!({"a": a, "a0": a0, "classification": classification, "count": count}))
        .collect();
    let summary = json!({
        "schema": SCHEMA,
        "summary": {"n": n, "count": count, "seed": seed, "range": range, "distribution": distribution, "failed_records": failed},
    });
    lines.push(summary.to_string());
    emit(out, &lines.join("\n"))?;
    Ok(passed_code(failed.is_empty()))
}

fn difftable(max_index: usize, degree: usize, out: Option<&Path>) -> Result<i32, Failure> {
    let table = commutation_table(max_index, degree)?;
    let cells: Vec<_> = table
        .cells
        .iter()
        .map(|c| {
            let expansion = c.expansion.as_ref().map(|terms| {
                terms.iter().map(|(k, v)| json!({"index": k, "coefficient": v.to_string()})).collect::<Vec<_>>()
            });
            let bracket = match c.kind {
                BracketKind::X => "x",
                BracketKind::D => "d",
            };
            json!({"m": c.m, "n": c.n, "bracket": bracket, "window": c.window, "expansion": expansion})
        })
        .collect();
    let doc = json!({
        "schema": SCHEMA,
        "command": "difftable",
        "max": max_index,
        "degree": degree,
        "passed": table.check.passed,
        "cells": cells,
        "check": table.check,
        "verdict": table.verdict,
    });
    emit(out, &to_json(&doc)?)?;
    Ok(passed_code(table.check.passed))
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Analyze { pair, out } => analyze(&pair, out.as_deref()),
        Command::Verify { suite, n, samples, seed, range, out } => {
            verify(&suite, &n, SuiteParams { samples, seed, range }, out.as_deref())
        }
        Command::Sweep { n, count, seed, range, out } => sweep(n, count, seed, range, out.as_deref()),
        Command::Difftable { max_index, degree, out } => difftable(max_index, degree, out.as_deref()),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("opair: {}", f.message);
            f.code
        }
    }
}
