//! Command-line driver: config-driven geometry dumps, bound sweeps, horn
//! counting, eigensolver runs, and full bound-versus-spectrum comparisons.

use clap::{Parser, Subcommand};
use spiralbound::report::{run, RunConfig, Stage};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "spiralbound", version, about = "Spectral bounds and eigenvalues for shrinking spiral domains")]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true, default_value = "spiralbound.toml")]
    config: PathBuf,
    /// Output directory; overrides the config's [output] section.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for independent jobs; overrides the config.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for stochastic estimators and solver start vectors.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the spiral geometry and dump s, θ(s), γ(s), d(s), d·γ tables.
    Geometry,
    /// Evaluate the moment bound over the configured (σ, Λ) sweep.
    Bound,
    /// Weyl-type horn counting over the configured λ list.
    Horn,
    /// Finite-difference Dirichlet eigenvalues and moments.
    Eigs,
    /// Full pipeline: bound vs numerically computed moments, with gates.
    Compare,
    /// Per-arm bounds and totals for a multi-armed spiral.
    Multiarm,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stage = match cli.command {
        Command::Geometry => Stage::Geometry,
        Command::Bound => Stage::Bound,
        Command::Horn => Stage::Horn,
        Command::Eigs => Stage::Eigs,
        Command::Compare => Stage::Compare,
        Command::Multiarm => Stage::MultiArm,
    };

    let mut config = match RunConfig::from_file(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(threads) = cli.threads {
        config.threads = threads;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let out_dir = cli.out.unwrap_or_else(|| PathBuf::from(&config.output.dir));

    match run(&config, stage, &out_dir) {
        Ok(outcome) => {
            println!("report written to {}", outcome.report_path.display());
            for row in &outcome.report.comparison {
                println!(
                    "sigma {:>5.2}  lambda {:>9.2}  moment {:>13.5e}  bound {:>13.5e}  ratio {:>8.3}",
                    row.sigma, row.lambda, row.numerical_moment, row.bound_total, row.ratio
                );
            }
            if outcome.gates_passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("gate failure: the computed moment exceeds the bound somewhere");
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e} (failure manifest written to {})", out_dir.display());
            ExitCode::from(1)
        }
    }
}
