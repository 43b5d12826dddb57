mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use gridpos_core::budget::DEFAULT_BUDGET;
use gridpos_core::Budget;

use commands::Command;
use report::{Manifest, Status};

pub const EXIT_VERIFICATION: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Exact experiments on point sets in integer grids that avoid flats.
#[derive(Parser)]
#[command(name = "gridpos", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads
    #[arg(long, default_value_t = 1, global = true)]
    threads: usize,

    /// Work budget (enumerated subsets, search nodes, ...)
    #[arg(long, env = "GRIDPOS_BUDGET", default_value_t = DEFAULT_BUDGET, global = true)]
    budget: u64,

    /// Run the built-in invariant suite and exit
    #[arg(long)]
    selftest: bool,
}

/// Bad arguments detected after parsing.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.max(1))
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    let budget = Budget::new(cli.budget);

    if cli.selftest {
        let checks = gridpos_core::selftest::selftest(&budget);
        let mut failed = 0;
        for c in &checks {
            println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            failed += usize::from(!c.passed);
        }
        println!("{} checks, {failed} failed", checks.len());
        return if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE };
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required\n");
        eprintln!("{}", <Cli as clap::CommandFactory>::command().render_usage());
        return ExitCode::from(EXIT_USAGE);
    };

    let start = Instant::now();
    let outcome = commands::run(&command, &budget);
    let out = match outcome {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                eprintln!("{}", <Cli as clap::CommandFactory>::command().render_usage());
                return ExitCode::from(EXIT_USAGE);
            }
            if matches!(
                e.downcast_ref::<gridpos_core::Error>(),
                Some(gridpos_core::Error::BudgetExceeded { .. })
            ) {
                return ExitCode::from(EXIT_BUDGET);
            }
            return ExitCode::FAILURE;
        }
    };
    let manifest = Manifest {
        subcommand: command.name(),
        params: command.params(),
        seed: command.seed(),
        threads: cli.threads,
        budget: cli.budget,
        version: env!("CARGO_PKG_VERSION"),
        input: command.input_path(),
        output: cli.out.as_ref().map(|p| p.display().to_string()),
        duration_ms: start.elapsed().as_millis() as u64,
    };
    let text = match report::render(&manifest, &out, cli.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::FAILURE;
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(anyhow::Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written.and_then(|_| out.write_points(command.points_out())) {
        eprintln!("error: {e:#}");
        return ExitCode::FAILURE;
    }
    match out.status {
        Status::Ok => ExitCode::SUCCESS,
        Status::VerificationFailed => ExitCode::from(EXIT_VERIFICATION),
        Status::BudgetExhausted => ExitCode::from(EXIT_BUDGET),
    }
}
