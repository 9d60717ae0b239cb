//! Command-line front end: CSV ingestion, fitting, analysis tables, and
//! the triage simulator.
//!
//! Exit codes: 0 success, 1 usage/flag error, 2 input-data error,
//! 3 numerical failure.

mod commands;
mod errors;
mod input;
mod output;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::errors::CliResult;

#[derive(Parser)]
#[command(
    name = "eva-triage",
    version,
    about = "Extreme-value arrival analysis and triage simulation for \
             remanufacturing intake"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Aggregate a day series into sub-periods and extract block maxima
    Block(commands::block::BlockArgs),
    /// Fit the extreme value law to block maxima (MLE and/or PWM)
    Fit(commands::fit::FitArgs),
    /// Tabulate return levels from a fit document
    ReturnLevel(commands::return_level::ReturnLevelArgs),
    /// Compare fitted, baseline, and empirical CDFs on a grid
    Compare(commands::compare::CompareArgs),
    /// Chi-squared goodness of fit on binned maxima
    Gof(commands::gof::GofArgs),
    /// Run the capacity-constrained triage simulator
    Simulate(commands::simulate::SimulateArgs),
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Block(args) => commands::block::run(args),
        Command::Fit(args) => commands::fit::run(args),
        Command::ReturnLevel(args) => commands::return_level::run(args),
        Command::Compare(args) => commands::compare::run(args),
        Command::Gof(args) => commands::gof::run(args),
        Command::Simulate(args) => commands::simulate::run(args),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(&cli) {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
}
