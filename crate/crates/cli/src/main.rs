//! `rcldpc`: build, analyze and measure rate-compatible LDPC code families.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod common;
mod error;
mod manifest;

use commands::{analyze, construct, extend, puncture, report, simulate, throughput};
use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "rcldpc",
    version,
    about = "Rate-compatible LDPC codes: construction, puncturing, extension, simulation"
)]
struct Cli {
    /// Worker threads for simulations (default: all cores). Results do not
    /// depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a mother code by progressive edge growth.
    Construct(construct::ConstructArgs),
    /// Count short cycles and their ACE values.
    Analyze(analyze::AnalyzeArgs),
    /// Choose a puncturing pattern for a higher rate.
    Puncture(puncture::PunctureArgs),
    /// Build an extension ladder for lower rates.
    Extend(extend::ExtendArgs),
    /// BER/FER sweep over an SNR grid.
    Simulate(simulate::SimulateArgs),
    /// Incremental-redundancy ARQ throughput.
    Throughput(throughput::ThroughputArgs),
    /// Convert a JSON report to CSV (or re-emit it).
    Report(report::ReportArgs),
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(workers) = cli.workers {
        if workers == 0 {
            return Err(CliError::Config("--workers must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Construct(a) => construct::run(a),
        Command::Analyze(a) => analyze::run(a),
        Command::Puncture(a) => puncture::run(a),
        Command::Extend(a) => extend::run(a),
        Command::Simulate(a) => simulate::run(a),
        Command::Throughput(a) => throughput::run(a),
        Command::Report(a) => report::run(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let message = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {message}", e.kind());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
