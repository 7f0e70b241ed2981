//! Experiment front door for the curriculum training toolkit.

mod commands;
mod errors;
mod manifest;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(
    name = "currloss",
    version,
    about = "Curriculum training experiments with closed-form confidence weighting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Stdout rendering for commands that also print a human summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-readable table on stdout.
    Table,
    /// Suppress the table; machine artifacts are written to files either
    /// way.
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic dataset (train/val JSONL files).
    GenData(commands::gen_data::GenDataArgs),
    /// Train one model from a JSON config and JSONL data.
    Train(commands::train::TrainArgs),
    /// Run curriculum-vs-baseline over a seed list and report the gap.
    Compare(commands::compare::CompareArgs),
    /// Score candidate summaries against references with ROUGE-1/2/L.
    Score(commands::score::ScoreArgs),
    /// Tabulate confidence diagnostics over a loss range as CSV.
    SigmaTable(commands::sigma_table::SigmaTableArgs),
}

fn ensure_out_dir(dir: &PathBuf) -> errors::CliResult<()> {
    use errors::Classify;
    std::fs::create_dir_all(dir).or_runtime(&format!("creating {}", dir.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::GenData(args) => commands::gen_data::run(args),
        Command::Train(args) => commands::train::run(args),
        Command::Compare(args) => commands::compare::run(args),
        Command::Score(args) => commands::score::run(args),
        Command::SigmaTable(args) => commands::sigma_table::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => err.report(),
    }
}
