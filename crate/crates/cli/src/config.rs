//! Run configuration: a TOML file of `key = value` lines with `[section]`
//! tables. Unknown keys are rejected. Every section is optional and falls
//! back to the defaults below.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use leakage_core::attacks::{AttrStrategy, MiaStrategy};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    GaussSweep,
    NnMia,
    AttrInfer,
    Counterexample,
    Bounds,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::GaussSweep => "gauss-sweep",
            Experiment::NnMia => "nn-mia",
            Experiment::AttrInfer => "attr-infer",
            Experiment::Counterexample => "counterexample",
            Experiment::Bounds => "bounds",
        }
    }

    fn default_grid(self) -> Vec<usize> {
        match self {
            Experiment::GaussSweep => vec![50, 100, 200, 500, 1000, 2000, 5000, 10_000],
            Experiment::NnMia => vec![50, 200, 1000, 4000],
            Experiment::AttrInfer => vec![100, 1000, 4000, 8000],
            Experiment::Counterexample | Experiment::Bounds => Vec::new(),
        }
    }

    fn default_trials(self) -> u64 {
        match self {
            Experiment::GaussSweep => 10_000,
            Experiment::NnMia => 1000,
            Experiment::AttrInfer => 100,
            Experiment::Counterexample => 100_000,
            Experiment::Bounds => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    /// Must fit in a signed 64-bit TOML integer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Monte-Carlo rounds per grid point (gauss-sweep, counterexample),
    /// per model (nn-mia), or attacked records per model (attr-infer).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_grid: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub gauss: GaussSection,
    #[serde(default)]
    pub train: TrainSection,
    #[serde(default)]
    pub mia: MiaSection,
    #[serde(default)]
    pub attr: AttrSection,
    #[serde(default)]
    pub counterexample: CounterexampleSection,
    #[serde(default)]
    pub bounds: BoundsSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GaussSection {
    pub d: usize,
    pub sigma2: f64,
}

impl Default for GaussSection {
    fn default() -> Self {
        Self { d: 20, sigma2: 1.0 }
    }
}

/// Optimizer settings for trained targets. Unset fields take the
/// experiment's own defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_epochs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub batch_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub early_stop_delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adam_beta1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adam_beta2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adam_eps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MiaSection {
    pub dim: usize,
    pub separation: f64,
    pub noise: f64,
    pub models_per_n: usize,
    pub test_size: usize,
    pub hidden: Vec<usize>,
    pub prior_t1: f64,
    pub likelihood_threshold: f64,
    pub strategies: Vec<String>,
}

impl Default for MiaSection {
    fn default() -> Self {
        let d = leakage_core::attacks::MiaSweepConfig::default();
        Self {
            dim: d.blobs.dim,
            separation: d.blobs.separation,
            noise: d.blobs.noise,
            models_per_n: d.models_per_n,
            test_size: d.test_size,
            hidden: d.hidden,
            prior_t1: d.prior_t1,
            likelihood_threshold: d.likelihood_threshold,
            strategies: d.strategies.iter().map(|s| s.name().to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AttrSection {
    pub writers: usize,
    pub samples_per_digit: usize,
    pub style_amplitude: f64,
    pub jitter: f64,
    pub models_per_n: usize,
    pub hidden: Vec<usize>,
    pub eval_size: usize,
    pub strategies: Vec<String>,
    /// CSV file to attack instead of the synthetic generator.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dataset: Option<PathBuf>,
    pub label_column: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sensitive_column: Option<String>,
    /// Expected number of feature columns, if checked.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub feature_count: Option<usize>,
}

impl Default for AttrSection {
    fn default() -> Self {
        let d = leakage_core::attacks::AttrSweepConfig::default();
        Self {
            writers: d.pen.writers,
            samples_per_digit: d.pen.samples_per_digit,
            style_amplitude: d.pen.style_amplitude,
            jitter: d.pen.jitter,
            models_per_n: d.models_per_n,
            hidden: d.hidden,
            eval_size: d.eval_size,
            strategies: d.strategies.iter().map(|s| s.name().to_string()).collect(),
            dataset: None,
            label_column: "label".into(),
            sensitive_column: None,
            feature_count: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CounterexampleSection {
    pub d: f64,
    pub eps: f64,
    pub sigma_x: f64,
}

impl Default for CounterexampleSection {
    fn default() -> Self {
        Self {
            d: 0.5,
            eps: 0.1,
            sigma_x: 1.0,
        }
    }
}

/// Inputs for the bound calculator. Each bound is evaluated only when its
/// inputs are present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsSection {
    pub p_m: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loss_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma2_proxy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mi_nats: Option<f64>,
}

impl Default for BoundsSection {
    fn default() -> Self {
        Self {
            p_m: 0.5,
            gap: None,
            loss_max: None,
            sigma2_proxy: None,
            mi_nats: None,
        }
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| {
        let msg = e.message().trim().replace('\n', "; ");
        match e.span() {
            Some(span) => {
                let before = &text[..span.start.min(text.len())];
                let line = before.matches('\n').count() + 1;
                let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
                anyhow::anyhow!("line {line}, column {column}: {msg}")
            }
            None => anyhow::anyhow!("{msg}"),
        }
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text).with_context(|| format!("in {}", path.display()))
}

impl RunConfig {
    /// Configuration with every field at its default.
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            seed: None,
            trials: None,
            n_grid: None,
            output_path: None,
            gauss: GaussSection::default(),
            train: TrainSection::default(),
            mia: MiaSection::default(),
            attr: AttrSection::default(),
            counterexample: CounterexampleSection::default(),
            bounds: BoundsSection::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(seed) = self.seed {
            if seed > i64::MAX as u64 {
                bail!("seed {seed} does not fit in a signed 64-bit integer");
            }
        }
        if self.trials == Some(0) {
            bail!("trials must be positive");
        }
        if let Some(grid) = &self.n_grid {
            if grid.is_empty() || grid.contains(&0) {
                bail!("n_grid must be a nonempty list of positive sizes");
            }
        }
        for s in &self.mia.strategies {
            s.parse::<MiaStrategy>().map_err(anyhow::Error::msg)?;
        }
        for s in &self.attr.strategies {
            s.parse::<AttrStrategy>().map_err(anyhow::Error::msg)?;
        }
        if self.mia.strategies.is_empty() || self.attr.strategies.is_empty() {
            bail!("strategy lists must not be empty");
        }
        Ok(())
    }

    pub fn trials(&self) -> u64 {
        self.trials.unwrap_or_else(|| self.experiment.default_trials())
    }

    pub fn n_grid(&self) -> Vec<usize> {
        self.n_grid.clone().unwrap_or_else(|| self.experiment.default_grid())
    }

    pub fn output_path(&self) -> PathBuf {
        self.output_path
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("{}.csv", self.experiment.name())))
    }

    /// Copy with the seed, trial count, grid and output path filled in.
    pub fn resolved(&self, seed: u64) -> Self {
        let grid = self.n_grid();
        let trials = self.trials();
        Self {
            seed: Some(seed),
            trials: (trials > 0).then_some(trials),
            n_grid: (!grid.is_empty()).then_some(grid),
            output_path: Some(self.output_path()),
            ..self.clone()
        }
    }

    /// Canonical text form; parsing it gives back an equal configuration.
    pub fn to_canonical_string(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }
}
