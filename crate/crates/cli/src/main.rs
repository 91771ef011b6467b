//! `fockspace`: moments, classification and limit laws of Jacobi sequences
//! from the command line.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 no predicted limit,
//! 4 computation failure or failed verification.

mod output;
mod source;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use fockspace::arcsine::{discrete_arcsine, discrete_moment, ArcsineError, DiscreteMoment, DEFAULT_SERIES_TOL};
use fockspace::fock::{moment_sequence, FockError, MomentValue};
use fockspace::jacobi::JacobiError;
use fockspace::rac::{classify, limit_table, Classification, LimitRow, PredictedLimit, RacError, RacReport, DEFAULT_SCHEDULE, DEFAULT_TOL};
use fockspace::scalar::Mode;
use fockspace::verify::{run_suite, VerifyOptions};

use output::{decimal, emit, render_json, write_output, OutputArgs, Table};
use source::{resolve_mode, SourceArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    NoPredictedLimit(String),
    #[error("computation failed: {0}")]
    Computation(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::NoPredictedLimit(_) => 3,
            CliError::Computation(_) => 4,
        }
    }
}

impl From<FockError> for CliError {
    fn from(e: FockError) -> Self {
        match e {
            FockError::NotExact(_) | FockError::Jacobi(JacobiError::NotExact(_)) => CliError::Config(e.to_string()),
            other => CliError::Computation(other.to_string()),
        }
    }
}

impl From<ArcsineError> for CliError {
    fn from(e: ArcsineError) -> Self {
        match e {
            ArcsineError::InvalidC(_) | ArcsineError::InvalidTolerance(_) | ArcsineError::InvalidOrder => {
                CliError::Config(e.to_string())
            }
            other => CliError::Computation(other.to_string()),
        }
    }
}

impl From<RacError> for CliError {
    fn from(e: RacError) -> Self {
        match e {
            RacError::InvalidSchedule(_) | RacError::InvalidTolerance(_) | RacError::OrderTooLarge(_) => {
                CliError::Config(e.to_string())
            }
            RacError::NoPredictedLimit => CliError::NoPredictedLimit(e.to_string()),
            RacError::Fock(f) => f.into(),
            RacError::Arcsine(a) => a.into(),
            other => CliError::Computation(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fockspace", version, about = "Moments and classical limits of interacting Fock spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Raw and normalized moments of X at the given levels.
    Moments {
        #[command(flatten)]
        source: SourceArgs,
        /// Comma-separated levels k.
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<u64>,
        /// Largest moment order.
        #[arg(long)]
        mmax: usize,
        /// Arithmetic mode, `exact` or `float` (exact when the sequence allows it, if absent).
        #[arg(long)]
        mode: Option<Mode>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// RAC1/RAC2 classification from ratio and drift probes.
    Classify {
        #[command(flatten)]
        source: SourceArgs,
        /// Comma-separated probe levels n.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SCHEDULE)]
        schedule: Vec<u64>,
        /// Classification tolerance.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Normalized moments next to the moments of the predicted limit law.
    LimitTable {
        #[command(flatten)]
        source: SourceArgs,
        /// Comma-separated levels k.
        #[arg(long, value_delimiter = ',', default_values_t = [10u64, 100, 1000])]
        levels: Vec<u64>,
        /// Largest moment order.
        #[arg(long, default_value_t = 8)]
        mmax: usize,
        /// Arithmetic mode, `exact` or `float` (exact when the sequence allows it, if absent).
        #[arg(long)]
        mode: Option<Mode>,
        /// Comma-separated probe levels n.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SCHEDULE)]
        schedule: Vec<u64>,
        /// Classification tolerance.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Weights and moments of the discrete arcsine law on cZ.
    #[command(allow_negative_numbers = true)]
    DiscreteArcsine {
        /// Lattice spacing c (nonzero).
        #[arg(long)]
        c: f64,
        /// Relative tolerance of the coefficient series and the weight cutoff.
        #[arg(long, default_value_t = DEFAULT_SERIES_TOL)]
        tol: f64,
        /// Largest moment order reported.
        #[arg(long, default_value_t = 4)]
        moments: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Runs the cross-check suite; exits 4 when any check fails.
    Verify {
        /// Machine-readable pass/fail list.
        #[arg(long)]
        json: bool,
        /// Report file (standard output when absent).
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Serialize)]
struct MomentRow {
    k: u64,
    m: usize,
    raw_moment: MomentValue,
    normalized_moment: MomentValue,
    mode: Mode,
}

#[derive(Serialize)]
struct MomentsReport {
    sequence: String,
    mode: Mode,
    rows: Vec<MomentRow>,
}

fn cmd_moments(source: &SourceArgs, levels: &[u64], mmax: usize, mode: Option<Mode>, output: &OutputArgs) -> Result<(), CliError> {
    let seq = source.load()?;
    let mode = resolve_mode(mode, &seq);
    if mmax == 0 {
        return Err(CliError::Config("--mmax must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for &k in levels {
        let raw = moment_sequence(&seq, k, mmax, false, mode)?;
        let normalized = moment_sequence(&seq, k, mmax, true, mode)?;
        for (i, (r, n)) in raw.entries.into_iter().zip(normalized.entries).enumerate() {
            rows.push(MomentRow { k, m: i + 1, raw_moment: r, normalized_moment: n, mode });
        }
    }
    let report = MomentsReport { sequence: seq.to_string(), mode, rows };
    emit(output, "moments", &report, || Table {
        header: vec!["k", "m", "raw_moment", "normalized_moment", "mode"],
        rows: report
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.k.to_string(),
                    r.m.to_string(),
                    decimal(r.raw_moment.to_f64()),
                    decimal(r.normalized_moment.to_f64()),
                    r.mode.to_string(),
                ]
            })
            .collect(),
    })
}

fn classification_kind(c: &Classification) -> (&'static str, String) {
    match c {
        Classification::Rac1 => ("RAC1", String::new()),
        Classification::Rac2 { c } => ("RAC2", decimal(*c)),
        Classification::Neither => ("NEITHER", String::new()),
        Classification::Undetermined => ("UNDETERMINED", String::new()),
    }
}

#[derive(Serialize)]
struct ClassifyReport<'a> {
    sequence: String,
    #[serde(flatten)]
    report: &'a RacReport,
}

fn cmd_classify(source: &SourceArgs, schedule: &[u64], tol: f64, output: &OutputArgs) -> Result<(), CliError> {
    let seq = source.load()?;
    let report = classify(&seq, schedule, tol)?;
    let body = ClassifyReport { sequence: seq.to_string(), report: &report };
    emit(output, "classify", &body, || {
        let (kind, c) = classification_kind(&report.classification);
        Table {
            header: vec!["classification", "c", "predicted_limit", "n", "ratio", "drift", "exact"],
            rows: report
                .probes
                .iter()
                .map(|p| {
                    vec![
                        kind.to_string(),
                        c.clone(),
                        report.predicted_limit.to_string(),
                        p.n.to_string(),
                        decimal(p.ratio),
                        decimal(p.drift),
                        p.exact.to_string(),
                    ]
                })
                .collect(),
        }
    })
}

#[derive(Serialize)]
struct LimitTableReport<'a> {
    sequence: String,
    classification: Classification,
    predicted_limit: PredictedLimit,
    mode: Mode,
    rows: &'a [LimitRow],
}

#[allow(clippy::too_many_arguments)]
fn cmd_limit_table(
    source: &SourceArgs,
    levels: &[u64],
    mmax: usize,
    mode: Option<Mode>,
    schedule: &[u64],
    tol: f64,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let seq = source.load()?;
    let mode = resolve_mode(mode, &seq);
    let verdict = classify(&seq, schedule, tol)?;
    let limit = verdict.predicted_limit;
    if limit == PredictedLimit::Unknown {
        return Err(CliError::NoPredictedLimit(format!(
            "no predicted limit: {seq} is classified {}",
            verdict.classification
        )));
    }
    let table = limit_table(&seq, levels, mmax, mode, limit)?;
    let body = LimitTableReport {
        sequence: seq.to_string(),
        classification: verdict.classification,
        predicted_limit: limit,
        mode,
        rows: &table.rows,
    };
    emit(output, "limit-table", &body, || Table {
        header: vec!["k", "m", "computed", "predicted", "error"],
        rows: table
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.k.to_string(),
                    r.m.to_string(),
                    decimal(r.computed.to_f64()),
                    decimal(r.predicted.to_f64()),
                    decimal(r.error),
                ]
            })
            .collect(),
    })
}

#[derive(Serialize)]
struct Atom {
    n: i64,
    position: f64,
    weight: f64,
}

#[derive(Serialize)]
struct MomentEntry {
    m: usize,
    #[serde(flatten)]
    moment: DiscreteMoment,
}

#[derive(Serialize)]
struct DiscreteArcsineReport {
    c: f64,
    tol: f64,
    n_trunc: usize,
    tail_mass_bound: f64,
    total_mass: f64,
    weights: Vec<Atom>,
    moments: Vec<MomentEntry>,
}

fn cmd_discrete_arcsine(c: f64, tol: f64, moments: usize, output: &OutputArgs) -> Result<(), CliError> {
    let law = discrete_arcsine(c, tol)?;
    let moments = (1..=moments)
        .map(|m| discrete_moment(&law, m).map(|moment| MomentEntry { m, moment }))
        .collect::<Result<Vec<_>, _>>()?;
    let report = DiscreteArcsineReport {
        c,
        tol,
        n_trunc: law.n_trunc,
        tail_mass_bound: law.tail_mass_bound,
        total_mass: law.total_mass(),
        weights: law.atoms().map(|(n, position, weight)| Atom { n, position, weight }).collect(),
        moments,
    };
    emit(output, "discrete-arcsine", &report, || {
        let weights = report.weights.iter().map(|a| vec!["weight".into(), a.n.to_string(), decimal(a.weight)]);
        let moments = report.moments.iter().map(|e| vec!["moment".into(), e.m.to_string(), decimal(e.moment.value)]);
        Table { header: vec!["kind", "index", "value"], rows: weights.chain(moments).collect() }
    })
}

fn cmd_verify(json: bool, out: &Option<std::path::PathBuf>, inject_fault: bool) -> Result<(), CliError> {
    let report = run_suite(&VerifyOptions { inject_fault });
    let text = if json {
        render_json("verify", &report)?
    } else {
        let mut text: String = report
            .checks
            .iter()
            .map(|c| format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
            .collect();
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        text.push_str(&format!("{} checks, {failed} failed\n", report.checks.len()));
        text
    };
    write_output(out, &text)?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::Computation("verification failed".into()))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Moments { source, levels, mmax, mode, output } => cmd_moments(&source, &levels, mmax, mode, &output),
        Command::Classify { source, schedule, tol, output } => cmd_classify(&source, &schedule, tol, &output),
        Command::LimitTable { source, levels, mmax, mode, schedule, tol, output } => {
            cmd_limit_table(&source, &levels, mmax, mode, &schedule, tol, &output)
        }
        Command::DiscreteArcsine { c, tol, moments, output } => cmd_discrete_arcsine(c, tol, moments, &output),
        Command::Verify { json, out, inject_fault } => cmd_verify(json, &out, inject_fault),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fockspace: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
