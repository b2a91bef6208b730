//! The experiment pipelines behind `leakage-lab`.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use leakage_core::attacks::{
    counterexample_game, run_attr_sweep, run_attr_sweep_on, run_mia_sweep, AttrStrategy, AttrSweepConfig, CounterexampleConfig, MiaStrategy, MiaSweepConfig,
    SweepPoint,
};
use leakage_core::bounds::{optimize_r_max, thm2_lower_bound, thm5_success_upper_bound, BoundInputs, TailFamily};
use leakage_core::data::{BlobConfig, PenDigitsConfig};
use leakage_core::nn::TrainConfig;
use leakage_core::numerics::{bernoulli_rate, derive_seed, Execution, RngStream};
use leakage_core::regress::{estimate_success_rate, success_bounds, RegressionDesign};

use crate::config::{Experiment, RunConfig, TrainSection};
use crate::dataset::{load_csv_dataset, CsvSchema, LoadedDataset};
use crate::output::{write_rows, SweepRow};

fn train_config(base: TrainConfig, s: &TrainSection) -> TrainConfig {
    TrainConfig {
        lr: s.lr.unwrap_or(base.lr),
        max_epochs: s.max_epochs.unwrap_or(base.max_epochs),
        batch_size: s.batch_size.unwrap_or(base.batch_size),
        early_stop_delta: s.early_stop_delta.unwrap_or(base.early_stop_delta),
        adam_beta1: s.adam_beta1.unwrap_or(base.adam_beta1),
        adam_beta2: s.adam_beta2.unwrap_or(base.adam_beta2),
        adam_eps: s.adam_eps.unwrap_or(base.adam_eps),
        seed: base.seed,
    }
}

fn sweep_rows(points: Vec<SweepPoint>) -> Vec<SweepRow> {
    points
        .into_iter()
        .map(|p| SweepRow {
            n: Some(p.n),
            strategy: p.strategy.to_string(),
            success_rate: Some(p.success_rate),
            stderr: Some(p.stderr),
            lb: p.lb,
            gap: Some(p.gap).filter(|g| !g.is_nan()),
            accuracy: Some(p.accuracy).filter(|a| !a.is_nan()),
            ..Default::default()
        })
        .collect()
}

fn gauss_sweep(cfg: &RunConfig, seed: u64) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for (g, n) in cfg.n_grid().into_iter().enumerate() {
        let mut rng = RngStream::new(derive_seed(seed, g as u64), u64::MAX);
        let design = RegressionDesign::random(cfg.gauss.d, n, cfg.gauss.sigma2, &mut rng).with_context(|| format!("design at n = {n}"))?;
        let (rate, se) = estimate_success_rate(&design, cfg.trials(), derive_seed(seed, 1000 + g as u64))?;
        let report = success_bounds(&design, 0.5)?;
        rows.push(SweepRow {
            n: Some(n),
            strategy: "bayes".into(),
            success_rate: Some(rate),
            stderr: Some(se),
            lb: report.lower(),
            ub: report.ub_thm5,
            mi_nats: report.mi_nats,
            gap: Some(report.gap),
            accuracy: None,
        });
    }
    Ok(rows)
}

fn nn_mia(cfg: &RunConfig, seed: u64) -> Result<Vec<SweepRow>> {
    let base = MiaSweepConfig::default();
    let m = &cfg.mia;
    let sweep = MiaSweepConfig {
        blobs: BlobConfig {
            dim: m.dim,
            separation: m.separation,
            noise: m.noise,
        },
        n_grid: cfg.n_grid(),
        models_per_n: m.models_per_n,
        trials_per_model: cfg.trials(),
        test_size: m.test_size,
        hidden: m.hidden.clone(),
        train: train_config(base.train, &cfg.train),
        prior_t1: m.prior_t1,
        likelihood_threshold: m.likelihood_threshold,
        strategies: m.strategies.iter().map(|s| s.parse::<MiaStrategy>()).collect::<Result<_, _>>().map_err(anyhow::Error::msg)?,
        seed,
    };
    Ok(sweep_rows(run_mia_sweep(&sweep, Execution::default())?))
}

fn attr_infer(cfg: &RunConfig, seed: u64) -> Result<Vec<SweepRow>> {
    let base = AttrSweepConfig::default();
    let a = &cfg.attr;
    let sweep = AttrSweepConfig {
        pen: PenDigitsConfig {
            writers: a.writers,
            samples_per_digit: a.samples_per_digit,
            style_amplitude: a.style_amplitude,
            jitter: a.jitter,
        },
        n_grid: cfg.n_grid(),
        models_per_n: a.models_per_n,
        instances_per_model: cfg.trials() as usize,
        hidden: a.hidden.clone(),
        train: train_config(base.train, &cfg.train),
        strategies: a.strategies.iter().map(|s| s.parse::<AttrStrategy>()).collect::<Result<_, _>>().map_err(anyhow::Error::msg)?,
        eval_size: a.eval_size,
        seed,
    };
    let points = match &a.dataset {
        None => run_attr_sweep(&sweep, Execution::default())?,
        Some(path) => {
            let Some(sensitive) = a.sensitive_column.clone() else {
                bail!("attr.dataset needs attr.sensitive_column");
            };
            let schema = CsvSchema {
                label_column: a.label_column.clone(),
                sensitive_column: Some(sensitive),
                feature_count: a.feature_count,
                classes: None,
            };
            let LoadedDataset::Attribute { data, .. } = load_csv_dataset(path, &schema)? else {
                unreachable!("a sensitive column always yields an attribute dataset")
            };
            run_attr_sweep_on(&data, &sweep, Execution::default())?
        }
    };
    Ok(sweep_rows(points))
}

fn counterexample(cfg: &RunConfig, seed: u64) -> Result<Vec<SweepRow>> {
    let c = &cfg.counterexample;
    let game = CounterexampleConfig::new(c.d, c.eps, c.sigma_x)?;
    let out = counterexample_game(&game, cfg.trials(), seed)?;
    let wins = (out.attack_success * out.trials as f64).round() as u64;
    Ok(vec![SweepRow {
        n: None,
        strategy: "zero-loss".into(),
        success_rate: Some(out.attack_success),
        stderr: Some(bernoulli_rate(wins, out.trials).1),
        gap: Some(out.empirical_gap),
        ..Default::default()
    }])
}

fn bounds(cfg: &RunConfig) -> Result<Vec<SweepRow>> {
    let b = &cfg.bounds;
    let mut rows = Vec::new();
    if let Some(gap) = b.gap {
        let inputs = |loss_max: f64, sigma2: f64| BoundInputs {
            p_m: b.p_m,
            gap_abs: gap.abs(),
            loss_max,
            sigma2_proxy: sigma2,
            r_max: 0.0,
        };
        let row = |strategy: &str, lb: f64| SweepRow {
            strategy: strategy.into(),
            lb: Some(lb),
            gap: Some(gap),
            ..Default::default()
        };
        if let Some(l) = b.loss_max {
            rows.push(row("bounded-loss", thm2_lower_bound(&inputs(l, f64::NAN))?.value));
        }
        if let Some(s2) = b.sigma2_proxy {
            for (name, family) in [("sub-gaussian", TailFamily::SubGaussian), ("sub-exponential", TailFamily::Exponential)] {
                rows.push(row(name, optimize_r_max(family, &inputs(f64::INFINITY, s2))?.1.value));
            }
        }
    }
    if let Some(mi) = b.mi_nats {
        rows.push(SweepRow {
            strategy: "mutual-information".into(),
            ub: Some(thm5_success_upper_bound(mi, b.p_m)?),
            mi_nats: Some(mi),
            ..Default::default()
        });
    }
    if rows.is_empty() {
        bail!("bounds: set `gap` with `loss_max` or `sigma2_proxy`, or set `mi_nats`");
    }
    Ok(rows)
}

/// Runs the configured experiment and returns its rows.
pub fn execute(cfg: &RunConfig, seed: u64) -> Result<Vec<SweepRow>> {
    match cfg.experiment {
        Experiment::GaussSweep => gauss_sweep(cfg, seed),
        Experiment::NnMia => nn_mia(cfg, seed),
        Experiment::AttrInfer => attr_infer(cfg, seed),
        Experiment::Counterexample => counterexample(cfg, seed),
        Experiment::Bounds => bounds(cfg),
    }
}

/// `results.csv` -> `results.manifest.toml`.
pub fn manifest_path(csv: &Path) -> PathBuf {
    csv.with_extension("manifest.toml")
}

fn git_describe() -> String {
    std::process::Command::new("git")
        .args(["describe", "--always", "--dirty", "--tags"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "unknown".into())
}

/// Run manifest: the fully resolved configuration, loadable as a config
/// file, preceded by comment lines naming the tool version and source
/// revision.
pub fn manifest_text(resolved: &RunConfig) -> String {
    format!(
        "# leakage-lab {}\n# git describe: {}\n{}",
        env!("CARGO_PKG_VERSION"),
        git_describe(),
        resolved.to_canonical_string()
    )
}

/// Executes `cfg` with `seed`, writes the CSV and its manifest, and returns
/// the CSV path.
pub fn run(cfg: &RunConfig, seed: u64) -> Result<PathBuf> {
    let resolved = cfg.resolved(seed);
    resolved.validate()?;
    let rows = execute(&resolved, seed)?;
    let path = resolved.output_path();
    let file = std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    write_rows(std::io::BufWriter::new(file), &rows)?;
    let manifest = manifest_path(&path);
    std::fs::write(&manifest, manifest_text(&resolved)).with_context(|| format!("writing {}", manifest.display()))?;
    Ok(path)
}
