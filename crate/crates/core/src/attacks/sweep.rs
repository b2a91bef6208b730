//! Grid experiments: train several target models per training-set size and
//! attack each of them.

use super::attribute::{attr_infer, AttrStrategy, AttributeInstance};
use super::mia::{calibrate_threshold, mia_wins, thm2_lb_from_game, MiaGame};
use super::scores::MiaStrategy;
use crate::data::{blobs, pen_digits, AttributeDataset, BlobConfig, PenDigitsConfig};
use crate::error::{invalid, Result};
use crate::nn::{accuracy, train, Mlp, TrainConfig};
use crate::numerics::{bernoulli_rate, derive_seed, map_indexed, mean_and_stderr, Execution, RngStream};

/// One grid point for one strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub n: usize,
    pub strategy: &'static str,
    pub success_rate: f64,
    pub stderr: f64,
    /// Mean lower bound on the Bayes attacker's success, where one applies.
    pub lb: Option<f64>,
    /// Mean held-out minus training loss.
    pub gap: f64,
    /// Mean held-out accuracy of the target models.
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MiaSweepConfig {
    pub blobs: BlobConfig,
    pub n_grid: Vec<usize>,
    pub models_per_n: usize,
    pub trials_per_model: u64,
    /// Size of the non-member pool the challenger draws from.
    pub test_size: usize,
    pub hidden: Vec<usize>,
    pub train: TrainConfig,
    pub prior_t1: f64,
    /// Fixed threshold of the likelihood score. Loss and modified-entropy
    /// thresholds are calibrated per model.
    pub likelihood_threshold: f64,
    pub strategies: Vec<MiaStrategy>,
    pub seed: u64,
}

impl Default for MiaSweepConfig {
    fn default() -> Self {
        Self {
            blobs: BlobConfig {
                dim: 5,
                separation: 3.0,
                noise: 1.0,
            },
            n_grid: vec![50, 200, 1000, 4000],
            models_per_n: 10,
            trials_per_model: 1000,
            test_size: 1000,
            hidden: vec![64, 64],
            train: TrainConfig {
                max_epochs: 500,
                early_stop_delta: 1e-4,
                ..TrainConfig::default()
            },
            prior_t1: 0.5,
            likelihood_threshold: 0.8,
            strategies: MiaStrategy::ALL.to_vec(),
            seed: 0,
        }
    }
}

fn model_seed(seed: u64, grid_index: usize, model: usize) -> u64 {
    derive_seed(seed, ((grid_index as u64) << 32) | model as u64)
}

fn check_grid(n_grid: &[usize], models: usize) -> Result<()> {
    if n_grid.is_empty() || n_grid.contains(&0) {
        return Err(invalid("n_grid", "must be a nonempty list of positive sizes"));
    }
    if models == 0 {
        return Err(invalid("models_per_n", "must be positive"));
    }
    Ok(())
}

struct MiaModelResult {
    wins: Vec<u64>,
    lb: f64,
    gap: f64,
    accuracy: f64,
}

fn mia_model(cfg: &MiaSweepConfig, n: usize, seed: u64) -> Result<MiaModelResult> {
    let data = blobs(&cfg.blobs, 2 * n + cfg.test_size, derive_seed(seed, 1))?;
    let rows: Vec<usize> = (0..data.len()).collect();
    let train_set = data.subset(&rows[..n]);
    let test_set = data.subset(&rows[n..n + cfg.test_size]);
    let calibration = data.subset(&rows[n + cfg.test_size..]);

    let mut dims = vec![cfg.blobs.dim];
    dims.extend(&cfg.hidden);
    dims.push(2);
    let init = Mlp::new(&dims, derive_seed(seed, 2))?;
    let tc = TrainConfig {
        seed: derive_seed(seed, 3),
        ..cfg.train
    };
    let (model, _) = train(init, &train_set, &tc)?;

    let game = MiaGame::new(&model, &train_set, &test_set, cfg.prior_t1, cfg.likelihood_threshold)?;
    let (lb, risks) = thm2_lb_from_game(&game, &test_set)?;
    let mut wins = Vec::with_capacity(cfg.strategies.len());
    for (k, &s) in cfg.strategies.iter().enumerate() {
        let h = match s {
            MiaStrategy::Likelihood => cfg.likelihood_threshold,
            _ => calibrate_threshold(&model, s, &train_set, &calibration)?,
        };
        let g = game.with_threshold(h);
        wins.push(mia_wins(&g, s, cfg.trials_per_model, derive_seed(seed, 10 + k as u64), Execution::Sequential)?);
    }
    Ok(MiaModelResult {
        wins,
        lb,
        gap: risks.gap,
        accuracy: accuracy(&model, &test_set)?,
    })
}

/// Membership-inference sweep on two-class blob data. For each `n`,
/// `models_per_n` models are trained on fresh samples and each is attacked
/// for `trials_per_model` rounds per strategy. Success rates pool all rounds
/// at a grid point.
pub fn run_mia_sweep(cfg: &MiaSweepConfig, exec: Execution) -> Result<Vec<SweepPoint>> {
    check_grid(&cfg.n_grid, cfg.models_per_n)?;
    if cfg.trials_per_model == 0 || cfg.test_size == 0 {
        return Err(invalid("trials_per_model", "trials and test size must be positive"));
    }
    let mut out = Vec::new();
    for (g, &n) in cfg.n_grid.iter().enumerate() {
        let results = map_indexed(exec, cfg.models_per_n as u64, |m| mia_model(cfg, n, model_seed(cfg.seed, g, m as usize)))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let mean = |f: &dyn Fn(&MiaModelResult) -> f64| results.iter().map(f).sum::<f64>() / results.len() as f64;
        let (lb, gap, acc) = (mean(&|r| r.lb), mean(&|r| r.gap), mean(&|r| r.accuracy));
        for (k, s) in cfg.strategies.iter().enumerate() {
            let wins: u64 = results.iter().map(|r| r.wins[k]).sum();
            let (rate, se) = bernoulli_rate(wins, cfg.trials_per_model * results.len() as u64);
            out.push(SweepPoint {
                n,
                strategy: s.name(),
                success_rate: rate,
                stderr: se,
                lb: Some(lb),
                gap,
                accuracy: acc,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttrSweepConfig {
    pub pen: PenDigitsConfig,
    pub n_grid: Vec<usize>,
    pub models_per_n: usize,
    pub instances_per_model: usize,
    pub hidden: Vec<usize>,
    pub train: TrainConfig,
    pub strategies: Vec<AttrStrategy>,
    /// Held-out samples used for accuracy and the loss gap.
    pub eval_size: usize,
    pub seed: u64,
}

impl Default for AttrSweepConfig {
    fn default() -> Self {
        Self {
            pen: PenDigitsConfig::default(),
            n_grid: vec![100, 1000, 4000, 8000],
            models_per_n: 20,
            instances_per_model: 100,
            hidden: vec![32, 16, 20],
            train: TrainConfig {
                max_epochs: 2500,
                early_stop_delta: 1e-4,
                ..TrainConfig::default()
            },
            strategies: AttrStrategy::ALL.to_vec(),
            eval_size: 1000,
            seed: 0,
        }
    }
}

/// Fraction of the listed rows whose sensitive attribute `strategy`
/// recovers from `model`.
pub fn attr_success_count(model: &Mlp, data: &AttributeDataset, rows: &[usize], strategy: AttrStrategy) -> Result<u64> {
    let mut hits = 0;
    for &i in rows {
        let inst = AttributeInstance::new(
            data.public().features(i).to_vec(),
            data.sensitive(i),
            data.public().label(i),
            data.candidate_count(),
        )?;
        hits += (attr_infer(model, &inst, strategy)?.t == inst.t_true) as u64;
    }
    Ok(hits)
}

struct AttrModelResult {
    wins: Vec<u64>,
    attacked: u64,
    gap: f64,
    accuracy: f64,
}

fn attr_model(cfg: &AttrSweepConfig, pool: &AttributeDataset, n: usize, seed: u64) -> Result<AttrModelResult> {
    let mut rng = RngStream::new(seed, 0);
    let rows = rng.sample_indices(pool.len(), (n + cfg.eval_size).min(pool.len()));
    let (train_rows, eval_rows) = rows.split_at(n);
    let train_set = pool.subset(train_rows).model_dataset();

    let mut dims = vec![pool.input_dim()];
    dims.extend(&cfg.hidden);
    dims.push(pool.public().classes());
    let init = Mlp::new(&dims, derive_seed(seed, 2))?;
    let tc = TrainConfig {
        seed: derive_seed(seed, 3),
        ..cfg.train
    };
    let (model, _) = train(init, &train_set, &tc)?;

    let k = cfg.instances_per_model.min(n);
    let targets: Vec<usize> = rng.sample_indices(n, k).into_iter().map(|i| train_rows[i]).collect();
    let wins = cfg
        .strategies
        .iter()
        .map(|&s| attr_success_count(&model, pool, &targets, s))
        .collect::<Result<Vec<_>>>()?;

    let (gap, acc) = if eval_rows.is_empty() {
        (f64::NAN, f64::NAN)
    } else {
        let eval_set = pool.subset(eval_rows).model_dataset();
        let train_loss = crate::nn::mean_loss(&model, &train_set)?;
        (crate::nn::mean_loss(&model, &eval_set)? - train_loss, accuracy(&model, &eval_set)?)
    };
    Ok(AttrModelResult {
        wins,
        attacked: k as u64,
        gap,
        accuracy: acc,
    })
}

/// Attribute-inference sweep on the synthetic handwriting corpus. For each
/// `n`, models are trained on random size-`n` subsets and attacked on up to
/// `instances_per_model` of their own training samples.
pub fn run_attr_sweep(cfg: &AttrSweepConfig, exec: Execution) -> Result<Vec<SweepPoint>> {
    let pool = pen_digits(&cfg.pen, derive_seed(cfg.seed, u64::MAX))?;
    run_attr_sweep_on(&pool, cfg, exec)
}

/// As [`run_attr_sweep`], drawing training sets from `pool` instead of the
/// synthetic generator. `cfg.pen` is ignored.
pub fn run_attr_sweep_on(pool: &AttributeDataset, cfg: &AttrSweepConfig, exec: Execution) -> Result<Vec<SweepPoint>> {
    check_grid(&cfg.n_grid, cfg.models_per_n)?;
    if let Some(&n) = cfg.n_grid.iter().find(|&&n| n > pool.len()) {
        return Err(invalid("n_grid", format!("{n} exceeds the {} generated samples", pool.len())));
    }
    let mut out = Vec::new();
    for (g, &n) in cfg.n_grid.iter().enumerate() {
        let results = map_indexed(exec, cfg.models_per_n as u64, |m| attr_model(cfg, pool, n, model_seed(cfg.seed, g, m as usize)))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let (gap, _) = mean_and_stderr(&results.iter().map(|r| r.gap).collect::<Vec<_>>());
        let (acc, _) = mean_and_stderr(&results.iter().map(|r| r.accuracy).collect::<Vec<_>>());
        let attacked: u64 = results.iter().map(|r| r.attacked).sum();
        for (k, s) in cfg.strategies.iter().enumerate() {
            let wins: u64 = results.iter().map(|r| r.wins[k]).sum();
            let (rate, se) = bernoulli_rate(wins, attacked);
            out.push(SweepPoint {
                n,
                strategy: s.name(),
                success_rate: rate,
                stderr: se,
                lb: None,
                gap,
                accuracy: acc,
            });
        }
    }
    Ok(out)
}
