//! Command-line driver for the verification pipeline.
//!
//! Every verb is hermetic by default: when no dataset path is given, the
//! fixtures bundled into the binary are used.  The `verdict` verb exits 0
//! only when the outcome is PROVEN_ALL or PROVEN_CONGRUENCE_CLASSES, so
//! scripts can gate on it.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rqfermat_cli::dataset::{load_dataset, load_dataset_str, Dataset};
use rqfermat_cli::fetch::{endpoint_from_env, fetch_and_cache, ENDPOINT_VAR};
use rqfermat_cli::report::{self, Report};
use rqfermat_cli::{PipelineError, Result};

const FIXTURES: &str = include_str!("../fixtures/newforms.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "rqfermat", about = "Fermat-equation verification over real quadratic fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Field invariants: discriminant, class numbers, unit, splitting of 2.
    FieldInfo { d: u64 },
    /// Predicted levels and odd class-group representatives.
    PredictLevels { d: u64 },
    /// Irreducibility evidence for the mod-p representations.
    Irreducibility { d: u64 },
    /// Elimination table for every predicted level.
    Eliminate {
        d: u64,
        /// Dataset path; bundled fixtures when omitted.
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
    /// Full report with theorem-level verdict; exits 0 only for PROVEN_*.
    Verdict {
        d: u64,
        /// Dataset path; bundled fixtures when omitted.
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
    /// Reports for every squarefree d in an inclusive range like 2..23.
    All {
        #[arg(long, default_value = "2..23")]
        range: String,
        /// Dataset path; bundled fixtures when omitted.
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
    /// Fetch one newform group from the remote endpoint and cache it.
    Fetch {
        d: u64,
        level_norm: u64,
        /// Destination dataset file.
        #[arg(long)]
        cache: PathBuf,
        /// Endpoint base URL; falls back to the environment variable.
        #[arg(long)]
        endpoint: Option<String>,
    },
}

fn load(dataset: &Option<PathBuf>) -> Result<Dataset> {
    match dataset {
        Some(path) => load_dataset(path),
        None => load_dataset_str(FIXTURES),
    }
}

fn is_squarefree(d: u64) -> bool {
    let mut p = 2u64;
    while p * p <= d {
        if d % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

fn parse_range(s: &str) -> Result<(u64, u64)> {
    let err = || PipelineError::Schema(format!("range must look like 2..23, got {}", s));
    let (a, b) = s.split_once("..").ok_or_else(err)?;
    let lo: u64 = a.trim().parse().map_err(|_| err())?;
    let hi: u64 = b.trim().parse().map_err(|_| err())?;
    if lo < 2 || hi < lo {
        return Err(err());
    }
    Ok((lo, hi))
}

fn render(reports: &[Report], format: Format) -> Result<String> {
    match format {
        Format::Json => {
            if reports.len() == 1 {
                report::render_json(&reports[0])
            } else {
                Ok(format!("{}\n", serde_json::to_string_pretty(reports)?))
            }
        }
        Format::Text => Ok(reports
            .iter()
            .map(report::render_text)
            .collect::<Vec<_>>()
            .join("\n")),
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{}", text),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut code = ExitCode::SUCCESS;
    let reports: Vec<Report> = match &cli.command {
        Command::FieldInfo { d } => vec![report::field_info(*d)?],
        Command::PredictLevels { d } => vec![report::predict_report(*d)?],
        Command::Irreducibility { d } => vec![report::irred_report(*d)?],
        Command::Eliminate { d, dataset } => {
            let ds = load(dataset)?;
            let mut rep = report::run_pipeline(*d, &ds)?;
            rep.verdict = None;
            vec![rep]
        }
        Command::Verdict { d, dataset } => {
            let ds = load(dataset)?;
            let rep = report::run_pipeline(*d, &ds)?;
            let proven = rep
                .verdict
                .as_ref()
                .map(|v| v.code.starts_with("PROVEN"))
                .unwrap_or(false);
            if !proven {
                code = ExitCode::from(2);
            }
            vec![rep]
        }
        Command::All { range, dataset } => {
            let (lo, hi) = parse_range(range)?;
            let ds = load(dataset)?;
            let mut out = Vec::new();
            for d in lo..=hi {
                if is_squarefree(d) {
                    out.push(report::run_pipeline(d, &ds)?);
                }
            }
            out
        }
        Command::Fetch {
            d,
            level_norm,
            cache,
            endpoint,
        } => {
            let endpoint = endpoint
                .clone()
                .or_else(endpoint_from_env)
                .ok_or_else(|| {
                    PipelineError::Transport(format!(
                        "no endpoint given and {} is unset",
                        ENDPOINT_VAR
                    ))
                })?;
            let file = fetch_and_cache(&endpoint, &[(*d, *level_norm)], cache)?;
            emit(
                &format!(
                    "cached {} group(s) to {}\n",
                    file.groups.len(),
                    cache.display()
                ),
                &cli.out,
            )?;
            return Ok(ExitCode::SUCCESS);
        }
    };
    emit(&render(&reports, cli.format)?, &cli.out)?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}
