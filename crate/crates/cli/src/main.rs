// Copyright 2026 The cpulse Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cpulse::design::{self, Family};
use cpulse::document::{format_f64, sweep_to_csv, to_json, SequenceDocument};
use cpulse::profile::{self, DEFAULT_DELTA, DEFAULT_DOMAIN, DEFAULT_POINTS};
use cpulse::reproduce::{reproduce, ReproTable};
use cpulse::Error;

#[derive(Parser, Debug)]
#[command(name = "cpulse", version, about = "Composite pulses for small, error-robust transition probabilities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a sequence and write it as a JSON document.
    Design {
        #[arg(long)]
        family: String,
        #[command(flatten)]
        target: Target,
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transition probability of a stored sequence at one error value.
    Evaluate {
        #[arg(long)]
        doc: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: f64,
        /// Also report the distance to the nominal gate.
        #[arg(long)]
        gate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Robustness profile over a uniform error grid.
    Sweep {
        #[arg(long)]
        doc: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value_t = DEFAULT_DOMAIN.0)]
        eps_min: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = DEFAULT_DOMAIN.1)]
        eps_max: f64,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
        #[arg(long, value_enum, default_value_t = DataFormat::Csv)]
        format: DataFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute the error order of a stored sequence (exit 4 on mismatch).
    Verify {
        #[arg(long)]
        doc: PathBuf,
        /// Verify the propagator instead of the transition probability.
        #[arg(long)]
        gate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate a published parameter table (exit 4 if a value is off).
    Reproduce {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        table: u8,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Order, cost and window width of several families side by side.
    Compare {
        /// Comma-separated family labels.
        #[arg(long, value_delimiter = ',')]
        family: Vec<String>,
        #[command(flatten)]
        target: Target,
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
        #[arg(long, value_enum, default_value_t = DataFormat::Json)]
        format: DataFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Target {
    /// Target transition probability.
    #[arg(long)]
    p: Option<f64>,
    /// Target rotation angle in units of π, an alternative to --p.
    #[arg(long)]
    theta_pi: Option<f64>,
}

impl Target {
    fn probability(&self) -> Result<f64, Failure> {
        match (self.p, self.theta_pi) {
            (Some(p), None) => Ok(p),
            (None, Some(t)) => Ok((t * PI / 2.0).sin().powi(2)),
            (Some(_), Some(_)) => Err(Failure::usage("give either --p or --theta-pi, not both")),
            (None, None) => Err(Failure::usage("one of --p or --theta-pi is required")),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DataFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Text,
    Json,
}

const EXIT_INVALID: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_MISMATCH: u8 = 4;
const EXIT_INTERNAL: u8 = 1;

#[derive(Debug)]
struct Failure {
    kind: &'static str,
    message: String,
    code: u8,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { kind: "invalid-argument", message: message.into(), code: EXIT_INVALID }
    }

    fn mismatch(message: impl Into<String>) -> Self {
        Self { kind: "verification-mismatch", message: message.into(), code: EXIT_MISMATCH }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (kind, code) = match e {
            Error::InvalidArgument(_) => ("invalid-argument", EXIT_INVALID),
            Error::Range { .. } => ("range", EXIT_INVALID),
            Error::NotHalfPi { .. } => ("not-half-pi", EXIT_INVALID),
            Error::SolverFailure { .. } => ("solver-failure", EXIT_SOLVER),
            Error::DegenerateSeed { .. } => ("degenerate-seed", EXIT_SOLVER),
            Error::TargetMismatch { .. } => ("target-mismatch", EXIT_MISMATCH),
            Error::InternalConsistency(_) => ("internal-consistency", EXIT_INTERNAL),
        };
        Self { kind, message: e.to_string(), code }
    }
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: &'a str,
    exit_code: u8,
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<SequenceDocument, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(SequenceDocument::from_json(&text)?)
}

fn family(label: &str) -> Result<Family, Failure> {
    Ok(label.parse::<Family>()?)
}

fn render_table(t: &ReproTable) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "table {}  tolerance {}π  (angles in units of π)", t.table, t.tolerance_pi);
    let _ = writeln!(s, "{:>8}  {:>6}  {:>12}  {:>12}  {:>10}  {}", "p", "column", "paper", "computed", "abs diff", "ok");
    for r in &t.rows {
        for (i, c) in t.columns.iter().enumerate() {
            let ok = r.abs_diff[i] <= t.tolerance_pi;
            let _ = writeln!(
                s,
                "{:>8.0e}  {:>6}  {:>12.7}  {:>12.7}  {:>10.3e}  {}",
                r.p,
                c,
                r.paper[i],
                r.computed[i],
                r.abs_diff[i],
                if ok { "yes" } else { "NO" }
            );
        }
        if let Some(m) = r.verified_order {
            let _ = writeln!(s, "{:>8.0e}  order {m}", r.p);
        }
        if let Some(res) = r.equation_residual {
            let _ = writeln!(s, "{:>8.0e}  equation residual {res:.3e}", r.p);
        }
    }
    let _ = writeln!(s, "{}", if t.all_pass { "all rows within tolerance" } else { "some values outside tolerance" });
    s
}

fn compare_csv(rows: &[profile::ComparisonRow]) -> String {
    let mut s = String::from("label,total_area_pi,verified_order,width\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{}", r.label, format_f64(r.total_area_pi), r.verified_order, format_f64(r.width));
    }
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Design { family: label, target, n, out } => {
            let d = design::design(family(&label)?, target.probability()?, n)?;
            emit(out.as_deref(), &d.document().to_json())
        }
        Command::Evaluate { doc, epsilon, gate, out } => {
            let e = design::evaluate(&load(&doc)?, epsilon, gate)?;
            emit(out.as_deref(), &to_json(&e))
        }
        Command::Sweep { doc, eps_min, eps_max, points, format, out } => {
            let doc = load(&doc)?;
            let rows = profile::sweep(&doc.sequence()?, doc.target_p, eps_min, eps_max, points)?;
            let text = match format {
                DataFormat::Csv => sweep_to_csv(&rows),
                DataFormat::Json => to_json(&rows),
            };
            emit(out.as_deref(), &text)
        }
        Command::Verify { doc, gate, out } => {
            let report = design::verify(&load(&doc)?, gate)?;
            emit(out.as_deref(), &to_json(&report))?;
            if report.matches {
                Ok(())
            } else {
                Err(Failure::mismatch(format!(
                    "claimed order {:?}, verified order {}",
                    report.claimed_order, report.verified_order
                )))
            }
        }
        Command::Reproduce { table, format, out } => {
            let t = reproduce(table)?;
            let text = match format {
                TableFormat::Text => render_table(&t),
                TableFormat::Json => to_json(&t),
            };
            emit(out.as_deref(), &text)?;
            if t.all_pass {
                Ok(())
            } else {
                Err(Failure::mismatch(format!(
                    "table {table}: largest difference {:.3e}π exceeds {}π",
                    t.max_abs_diff(),
                    t.tolerance_pi
                )))
            }
        }
        Command::Compare { family: labels, target, n, delta, format, out } => {
            if labels.is_empty() {
                return Err(Failure::usage("--family needs at least one label"));
            }
            let p = target.probability()?;
            let entries = labels
                .iter()
                .map(|l| {
                    let f = family(l)?;
                    let d = design::design(f, p, n)?;
                    Ok((l.clone(), d.sequence))
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            let rows = profile::compare(&entries, p, delta)?;
            let text = match format {
                DataFormat::Csv => compare_csv(&rows),
                DataFormat::Json => to_json(&rows),
            };
            emit(out.as_deref(), &text)
        }
    }
}

fn report(f: &Failure) {
    let body = ErrorReport {
        error: ErrorBody { kind: f.kind, message: &f.message, exit_code: f.code },
    };
    eprint!("{}", to_json(&body));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            report(&Failure::usage(e.to_string().trim_end()));
            return ExitCode::from(EXIT_INVALID);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            report(&f);
            ExitCode::from(f.code)
        }
    }
}
