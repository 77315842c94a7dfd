//! `bmmx` — Bayesian Mallows mixtures with assessor covariates.
//!
//! Subcommands: `simulate` (synthetic datasets), `fit` (MCMC inference),
//! `summarize` (posterior exports), `benchmark` (method-comparison sweeps).
//! Exit codes: 0 on success, 1 on usage errors, 2 on runtime errors.

mod commands;
mod manifest;
mod settings;

use clap::{Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<bmmx::Error> for CliError {
    fn from(e: bmmx::Error) -> Self {
        match e {
            bmmx::Error::InvalidParam(_) => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

pub type CliResult = Result<(), CliError>;

#[derive(Parser)]
#[command(
    name = "bmmx",
    version,
    about = "Bayesian Mallows mixture modeling of rank data with assessor covariates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic rank-and-covariate dataset with known clusters.
    Simulate(commands::simulate::SimulateArgs),
    /// Run MCMC inference on a rankings file (optionally with covariates).
    Fit(commands::fit::FitArgs),
    /// Export posterior summaries from a sample file.
    Summarize(commands::summarize::SummarizeArgs),
    /// Sweep a (d_rho, d_x) grid with replicated fits of BMM and BMMx.
    Benchmark(commands::benchmark::BenchmarkArgs),
}

fn init_workers() {
    if let Ok(v) = std::env::var("BMMX_WORKERS") {
        if let Ok(k) = v.trim().parse::<usize>() {
            if k >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
        }
    }
}

fn main() {
    init_workers();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprint!("{e}");
            std::process::exit(1);
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate::run(args),
        Command::Fit(args) => commands::fit::run(args),
        Command::Summarize(args) => commands::summarize::run(args),
        Command::Benchmark(args) => commands::benchmark::run(args),
    };
    match result {
        Ok(()) => {}
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}
