//! Numerics and probability primitives shared by every other module.

mod exec;
mod gaussian;
mod golden;
mod kl;
mod risk;
mod rng;

pub use exec::{map_indexed, Execution};
pub use gaussian::{mvn_logpdf, MultivariateGaussian};
pub use golden::{golden_section, golden_section_with, Extremum, Mode, DEFAULT_MAX_ITER, DEFAULT_TOL};
pub use kl::{binary_entropy, binary_kl};
pub use risk::{estimate_risk_pair, RiskPair};
pub use rng::{derive_seed, RngStream};

/// Mean and standard error of a Bernoulli success count.
pub fn bernoulli_rate(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (f64::NAN, f64::NAN);
    }
    let rate = successes as f64 / trials as f64;
    (rate, (rate * (1.0 - rate) / trials as f64).sqrt())
}

/// Sample mean and standard error of the mean.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
