//! Experiment runner: configuration, dataset loading, pipelines and CSV
//! output.

pub mod config;
pub mod dataset;
pub mod output;
pub mod pipeline;

pub use config::{load_config, parse_config, Experiment, RunConfig};
pub use pipeline::run;

/// Environment variable consulted when neither `--seed` nor the config
/// gives a seed.
pub const SEED_ENV: &str = "LEAKAGE_LAB_SEED";

/// `flag`, else `config`, else `env`.
pub fn resolve_seed(flag: Option<u64>, config: Option<u64>, env: Option<&str>) -> anyhow::Result<u64> {
    if let Some(s) = flag.or(config) {
        return Ok(s);
    }
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| anyhow::anyhow!("{SEED_ENV} is not an unsigned integer: `{v}`")),
        None => anyhow::bail!("no seed: pass --seed, set `seed` in the config, or set {SEED_ENV}"),
    }
}
