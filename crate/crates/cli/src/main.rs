use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use nsgm::gmpe::{load_coefficients, CoefficientTable};

mod analyze;
mod predict;
mod records;
mod select;
mod simulate;

#[derive(Parser)]
#[command(name = "nsgm", version, about = "Ground-motion prediction, stochastic simulation and record analysis")]
struct Cli {
    #[command(flatten)]
    tables: TableArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TableArgs {
    /// Replacement spectral-acceleration coefficient table (CSV).
    #[arg(long, global = true, value_name = "CSV")]
    sa_table: Option<PathBuf>,
    /// Replacement AI / duration / central-frequency coefficient table (CSV).
    #[arg(long, global = true, value_name = "CSV")]
    param_table: Option<PathBuf>,
}

impl TableArgs {
    fn load(&self) -> Result<CoefficientTable> {
        load_coefficients(self.sa_table.as_deref(), self.param_table.as_deref())
            .context("loading coefficient tables")
    }
}

#[derive(Subcommand)]
enum Command {
    /// Median and standard deviations for a scenario, as JSON.
    Predict(predict::PredictArgs),
    /// Metrics, central-frequency fit and response spectrum of records, as CSV.
    Analyze(analyze::AnalyzeArgs),
    /// Generate an ensemble of synthetic accelerograms.
    Simulate(simulate::SimulateArgs),
    /// Rank ensemble members against a target spectrum.
    Select(select::SelectArgs),
    /// Convert a strong-motion file to a trace CSV and a header JSON.
    Parse(records::ParseArgs),
    /// Apply the dataset selection rules to a metadata CSV.
    Filter(records::FilterArgs),
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Predict(a) => predict::run(a, &cli.tables.load()?),
        Command::Analyze(a) => analyze::run(a),
        Command::Simulate(a) => simulate::run(a, &cli.tables.load()?),
        Command::Select(a) => select::run(a, &cli.tables.load()?),
        Command::Parse(a) => records::parse(a),
        Command::Filter(a) => records::filter(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Writes to `path`, or to stdout when there is none.
fn emit(path: Option<&std::path::Path>, bytes: &[u8]) -> Result<()> {
    use std::io::Write;
    match path {
        Some(p) => nsgm::io::atomic_write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}
