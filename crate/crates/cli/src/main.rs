//! `fantappie <subcommand> --scenario <file>`: runs a scenario and writes its
//! result table.
//!
//! Exit codes: 0 ok, 1 a row failed its tolerance, 2 input error, 3 I/O error.

mod config;
mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

use config::{Format, Overrides};
use run::Subcommand;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

/// Evaluate residue pairings, Radon and Fantappiè transforms, Martineau
/// inversions and PDE checks over the test points of a scenario file.
#[derive(Debug, Parser)]
#[command(name = "fantappie", version)]
struct Cli {
    #[arg(value_enum)]
    subcommand: Subcommand,
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Row tolerance; overrides `tol`.
    #[arg(long)]
    tol: Option<f64>,
    /// Tube hierarchy exponent; overrides `schedule.kappa`.
    #[arg(long)]
    kappa: Option<u32>,
    /// Martineau angular grid; overrides `grid`.
    #[arg(long)]
    grid: Option<usize>,
    /// Comma-separated output formats; overrides `output.formats`.
    #[arg(long, value_enum, value_delimiter = ',')]
    format: Option<Vec<Format>>,
}

fn execute(cli: &Cli) -> Result<u8, CliError> {
    let overrides = Overrides {
        out: cli.out.clone(),
        tol: cli.tol,
        kappa: cli.kappa,
        grid: cli.grid,
        formats: cli.format.clone(),
    };
    let scenario = config::load(&cli.scenario, &overrides)?;
    let table = run::run(&scenario, cli.subcommand)?;
    if table.rows.is_empty() {
        eprintln!("warning: scenario {} has no test points", scenario.name);
    }
    let written = report::emit(&table, &scenario.out_dir, &scenario.formats)?;
    let failures = table.failures();
    let skipped = table
        .rows
        .iter()
        .filter(|r| r.status == report::Status::SkippedNearIncidence)
        .count();
    println!(
        "{} {}: {} rows, {} skipped, {} over tolerance {:.1e}",
        scenario.name,
        cli.subcommand.name(),
        table.rows.len(),
        skipped,
        failures,
        scenario.tol
    );
    for path in written {
        println!("  wrote {}", path.display());
    }
    Ok(if failures > 0 { 1 } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
