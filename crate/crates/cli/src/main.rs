use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use stochdiff_cli::output::{OutputDir, DEFAULT_OUTPUT_DIR, OUTPUT_DIR_ENV};
use stochdiff_cli::{commands, CliError, RunConfig};

#[derive(Parser)]
#[command(name = "stochdiff", version, about = "Simulate and check stochastic difference equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Moments of the noise law on an index grid.
    Moments(Args),
    /// Hypothesis checks for the configured theorems.
    Check(Args),
    /// Single-path trajectories.
    Simulate(Args),
    /// Monte Carlo ensemble statistics.
    Ensemble(Args),
    /// Convergence fractions across forcing exponents.
    ProbeConjecture(Args),
}

#[derive(clap::Args)]
struct Args {
    #[arg(long)]
    config: PathBuf,
    /// Overrides `ensemble.master_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `ensemble.horizon`.
    #[arg(long)]
    horizon: Option<usize>,
    /// Overrides `ensemble.replicas`.
    #[arg(long)]
    replicas: Option<usize>,
    /// Print the effective configuration as TOML and exit.
    #[arg(long)]
    dump_config: bool,
    /// Used when the config has no `output.directory`.
    #[arg(long, env = OUTPUT_DIR_ENV, default_value = DEFAULT_OUTPUT_DIR)]
    output_dir: PathBuf,
}

fn load(args: &Args) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::from_file(&args.config)?;
    if let Some(s) = args.seed {
        cfg.ensemble.master_seed = Some(s);
    }
    if let Some(h) = args.horizon {
        cfg.ensemble.horizon = Some(h);
    }
    if let Some(r) = args.replicas {
        cfg.ensemble.replicas = Some(r);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<String, CliError> {
    let (args, cmd): (&Args, fn(&RunConfig, &OutputDir) -> Result<String, CliError>) = match &cli.command {
        Command::Moments(a) => (a, commands::moments),
        Command::Check(a) => (a, commands::check),
        Command::Simulate(a) => (a, commands::simulate),
        Command::Ensemble(a) => (a, commands::ensemble),
        Command::ProbeConjecture(a) => (a, commands::probe_conjecture),
    };
    let cfg = load(args)?;
    if args.dump_config {
        return Ok(cfg.to_toml());
    }
    let dir = cfg.output.directory.clone().unwrap_or_else(|| args.output_dir.clone());
    cmd(&cfg, &OutputDir::create(dir)?)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
