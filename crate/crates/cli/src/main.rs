use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use leakage_lab::{load_config, resolve_seed, run, SEED_ENV};

/// Runs membership- and attribute-inference experiments and writes one CSV
/// row per grid point and strategy, plus a `.manifest.toml` sidecar holding
/// the resolved configuration.
///
/// Experiments: gauss-sweep (exact Bayes attacker on Gaussian linear
/// regression, with lower and upper bounds), nn-mia (membership inference
/// against small networks on blob data), attr-infer (sensitive-attribute
/// recovery on synthetic handwriting or a CSV file), counterexample
/// (vanishing gap with a perfect attacker), bounds (evaluate the bounds for
/// given inputs).
///
/// Defaults: gauss-sweep d = 20, sigma2 = 1, n_grid = 50..10000, 10000
/// trials; nn-mia 5-D blobs, 10 models per n, n_grid = 50, 200, 1000, 4000,
/// 1000 rounds per model, likelihood threshold 0.8; attr-infer 44 writers,
/// 20 models per n, n_grid = 100, 1000, 4000, 8000, 100 attacked records per
/// model; counterexample D = 0.5, eps = 0.1, 100000 trials. See README.md for
/// every key.
#[derive(Debug, Parser)]
#[command(name = "leakage-lab", version, about, long_about)]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Random seed; overrides the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `trials` from the config file.
    #[arg(long)]
    trials: Option<u64>,
    /// Overrides `output_path` from the config file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn main_inner(cli: Cli) -> Result<PathBuf> {
    let mut cfg = load_config(&cli.config)?;
    if cli.trials.is_some() {
        cfg.trials = cli.trials;
    }
    if cli.out.is_some() {
        cfg.output_path = cli.out;
    }
    let env = std::env::var(SEED_ENV).ok();
    let seed = resolve_seed(cli.seed, cfg.seed, env.as_deref())?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .context("starting worker threads")?;
    run(&cfg, seed)
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(path) => {
            println!("wrote {}", path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("leakage-lab: {e:#}");
            ExitCode::FAILURE
        }
    }
}
