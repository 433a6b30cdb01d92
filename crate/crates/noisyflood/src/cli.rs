//! Command implementations behind the `noisyflood` binary.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use noisyflood_core::fixtures::Fixture;
use serde::Serialize;
use thiserror::Error;

use crate::config::load_sweep;
use crate::oracle_check::{run_check, CheckOptions, DEFAULT_RUNS};
use crate::results::{self, Figure};
use crate::runner::{run_scenario, RunOptions};

#[derive(Debug, Parser)]
#[command(
    name = "noisyflood",
    version,
    about = "Probabilistic RREQ flooding over noisy MANET links"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario sweep and write results.csv plus manifest.json.
    Run {
        config: PathBuf,
        /// Overrides the seed in the config file.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads (0 = one per core). Does not affect results.
        #[arg(long, default_value_t = 0)]
        parallelism: usize,
    },
    /// Print the S_RCH / S_RET summary at p_c = 0.5 and 0.6.
    Table { results: PathBuf },
    /// Write one (p_c, value) series file per swept value.
    PlotData {
        results: PathBuf,
        /// rch or ret
        #[arg(long)]
        figure: String,
        /// Defaults to the directory holding the results file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare Monte Carlo floods against exact enumeration.
    OracleCheck {
        /// Comma-separated subset of chain-3, star-4, cycle-4, two-cluster-6.
        #[arg(long, value_delimiter = ',')]
        fixtures: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_RUNS)]
        runs: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, hide = true)]
        mutate_strict_range: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Runtime(String),
    #[error("oracle check failed: {0} cell(s) outside tolerance")]
    OracleFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
            CliError::OracleFailed(_) => 3,
        })
    }
}

/// Provenance written next to every results file.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config_path: String,
    pub config_hash: String,
    pub seed: u64,
    pub output_dir: String,
    pub parallelism: usize,
    pub tool_version: String,
    pub wall_clock_secs: f64,
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            seed,
            out,
            parallelism,
        } => cmd_run(&config, seed, &out, parallelism),
        Command::Table { results } => {
            print!("{}", cmd_table(&results)?);
            Ok(())
        }
        Command::PlotData { results, figure, out } => {
            let dir = out.unwrap_or_else(|| results.parent().map(Path::to_path_buf).unwrap_or_default());
            for path in cmd_plot_data(&results, &figure, &dir)? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::OracleCheck {
            fixtures,
            runs,
            seed,
            mutate_strict_range,
        } => cmd_oracle_check(&fixtures, runs, seed, mutate_strict_range),
    }
}

pub fn cmd_run(config: &Path, seed: Option<u64>, out: &Path, parallelism: usize) -> Result<(), CliError> {
    let started = Instant::now();
    let spec = load_sweep(config).map_err(|e| CliError::Validation(e.to_string()))?;
    let seed = seed.unwrap_or(spec.base.seed);
    let table = run_scenario(&spec, seed, &RunOptions { parallelism }).map_err(|e| CliError::Runtime(e.to_string()))?;

    std::fs::create_dir_all(out).map_err(|e| CliError::Runtime(format!("{}: {e}", out.display())))?;
    results::write_csv_file(&table, &out.join("results.csv")).map_err(|e| CliError::Runtime(e.to_string()))?;

    let manifest = RunManifest {
        command: std::env::args().collect::<Vec<_>>().join(" "),
        config_path: config.display().to_string(),
        config_hash: table.metadata.config_hash.clone(),
        seed,
        output_dir: out.display().to_string(),
        parallelism,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_clock_secs: started.elapsed().as_secs_f64(),
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    let manifest_path = out.join("manifest.json");
    std::fs::write(&manifest_path, json + "\n")
        .map_err(|e| CliError::Runtime(format!("{}: {e}", manifest_path.display())))?;

    eprintln!(
        "{}: {} rows, seed {seed}, {:.1}s -> {}",
        config.display(),
        table.rows.len(),
        table.metadata.runtime_secs,
        out.join("results.csv").display()
    );
    Ok(())
}

pub fn cmd_table(results_path: &Path) -> Result<String, CliError> {
    let res = results::read_csv_file(results_path).map_err(|e| CliError::Validation(e.to_string()))?;
    results::format_table(&res).map_err(|e| CliError::Validation(e.to_string()))
}

pub fn cmd_plot_data(results_path: &Path, figure: &str, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let figure: Figure = figure
        .parse()
        .map_err(|e: results::ResultsError| CliError::Validation(e.to_string()))?;
    let res = results::read_csv_file(results_path).map_err(|e| CliError::Validation(e.to_string()))?;
    results::write_plot_series(&res, figure, dir).map_err(|e| CliError::Runtime(e.to_string()))
}

pub fn cmd_oracle_check(fixtures: &[String], runs: usize, seed: u64, mutate: bool) -> Result<(), CliError> {
    let fixtures = if fixtures.is_empty() {
        Fixture::ALL.to_vec()
    } else {
        fixtures
            .iter()
            .map(|s| {
                s.parse::<Fixture>()
                    .map_err(|e| CliError::Validation(format!("{s}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    if runs < 2 {
        return Err(CliError::Validation("--runs must be at least 2".into()));
    }
    let report = run_check(&CheckOptions {
        fixtures,
        runs,
        seed,
        strict_range_mutation: mutate,
    })
    .map_err(|e| match e {
        noisyflood_core::Error::OracleTooLarge { .. } => CliError::Validation(e.to_string()),
        other => CliError::Runtime(other.to_string()),
    })?;
    println!("{report}");
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::OracleFailed(report.failures()))
    }
}
