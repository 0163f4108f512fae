//! Batch front end for the stochastic-rank goodness-of-fit library.
//!
//! Subcommands: `test`, `exact-dist`, `power`, `sweep`, `ising-diagnose`.
//! Each reads a JSON config, writes CSV/JSON outputs plus a run manifest
//! into `--out`, and exits 0 (not reject / success), 1 (reject), or
//! 2 (error).

mod commands;
mod config;
mod error;
mod iofmt;
mod manifest;
mod registry;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::CommandOutcome;
use error::CliResult;
use manifest::{now_ms, RunManifest};

#[derive(Parser)]
#[command(name = "srs", version, about = "Exact goodness-of-fit tests via stochastic ranks")]
struct Cli {
    /// Path to the JSON config for the chosen subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed override; beats the config's `seed` field (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory for reports, CSVs, and the run manifest.
    #[arg(long, global = true, default_value = "srs-out")]
    out: PathBuf,

    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Goodness-of-fit test of observations against a candidate model.
    Test,
    /// Exact rank pmf for an enumerable (p, q, ordering, m).
    ExactDist,
    /// Monte Carlo power estimate over a sample-size grid.
    Power,
    /// Mixture-weight sweep of power or exact sup-norm per ordering.
    Sweep,
    /// Rank-uniformity trace of an approximate Ising sampler.
    IsingDiagnose,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Test => "test",
            Command::ExactDist => "exact-dist",
            Command::Power => "power",
            Command::Sweep => "sweep",
            Command::IsingDiagnose => "ising-diagnose",
        }
    }
}

fn dispatch(cli: &Cli, config: &std::path::Path, seed: u64) -> CliResult<CommandOutcome> {
    match cli.command {
        Command::Test => commands::run_test(config, seed, &cli.out),
        Command::ExactDist => commands::run_exact_dist(config, seed, &cli.out),
        Command::Power => commands::run_power(config, seed, &cli.out),
        Command::Sweep => commands::run_sweep(config, seed, &cli.out),
        Command::IsingDiagnose => commands::run_ising_diagnose(config, seed, &cli.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: cannot configure {threads} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let Some(config) = cli.config.clone() else {
        eprintln!("error: --config <path> is required");
        return ExitCode::from(2);
    };

    let started = now_ms();
    let seed = commands::resolve_seed(cli.seed, &config);
    let result = dispatch(&cli, &config, seed);

    let (exit_code, outputs, error) = match &result {
        Ok(outcome) => (outcome.exit_code, outcome.outputs.clone(), None),
        Err(e) => (2, Vec::new(), Some(e.to_string())),
    };
    let manifest = RunManifest {
        command: cli.command.name().to_string(),
        config_path: config.display().to_string(),
        resolved_seed: seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        started_unix_ms: started,
        finished_unix_ms: now_ms(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        error,
    };
    if let Err(e) = manifest.write(&cli.out) {
        eprintln!("error: cannot write run manifest: {e}");
        return ExitCode::from(2);
    }
    if let Err(e) = result {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(exit_code)
}
