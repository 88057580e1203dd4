//! `ffselect`: choose the number of functional factors in a panel.

mod exit;
mod fixture;
mod input;
mod select;
mod simulate;
mod smooth;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ffselect_core::parallel::{threads_from_env, with_threads};

const AFTER_HELP: &str = "\
Exit codes:
  0  success
  2  usage or configuration error
  3  file system error
  4  malformed or unusable input data
  5  numerical failure (bandwidth too small, eigendecomposition)
  6  selector failure (degenerate bootstrap, fold too small, failure budget)

Environment:
  FFSELECT_THREADS  number of worker threads (default: all cores)";

#[derive(Debug, Parser)]
#[command(name = "ffselect", version, about, after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run order selectors on a CSV panel and write a JSON run report.
    Select(select::SelectArgs),
    /// Monte-Carlo frequency of correct selection over a scenario grid.
    Simulate(simulate::SimulateArgs),
    /// Evaluate the smoothed surface (and optional factors) on a grid.
    Smooth(smooth::SmoothArgs),
    /// Write synthetic input files.
    #[command(subcommand)]
    Fixture(fixture::FixtureCommand),
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Select(args) => select::run(args),
        Command::Simulate(args) => simulate::run(args),
        Command::Smooth(args) => smooth::run(args),
        Command::Fixture(cmd) => fixture::run(cmd),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match threads_from_env() {
        Some(n) => with_threads(n, || run(cli)),
        None => run(cli),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if let Some(ffselect_core::Error::BandwidthTooSmall { .. }) = e.downcast_ref() {
                eprintln!(
                    "hint: pass a wider --bandwidth, `--bandwidth cv`, or `--kernel gaussian`"
                );
            }
            ExitCode::from(exit::code_for(&e))
        }
    }
}
