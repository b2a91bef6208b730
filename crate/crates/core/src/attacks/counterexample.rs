use crate::error::{invalid, Result};
use crate::numerics::{map_indexed, Execution, RngStream};

/// A learner that reproduces training labels exactly and otherwise predicts
/// `x + D + U'` with `U'` uniform on `[-eps/2, eps/2]`, for data
/// `Y = X + U`, `X ~ N(0, sigma_x^2)`. The absolute loss is zero on members
/// and triangular on `[D - eps, D + eps]` for non-members.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleConfig {
    pub d: f64,
    pub eps: f64,
    pub sigma_x: f64,
}

impl CounterexampleConfig {
    pub fn new(d: f64, eps: f64, sigma_x: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < d && d.is_finite()) {
            return Err(invalid("eps", format!("need 0 < eps < D, got eps = {eps}, D = {d}")));
        }
        if !(sigma_x > 0.0 && sigma_x.is_finite()) {
            return Err(invalid("sigma_x", format!("must be positive, got {sigma_x}")));
        }
        Ok(Self { d, eps, sigma_x })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleOutcome {
    pub attack_success: f64,
    /// Mean non-member loss minus mean member loss.
    pub empirical_gap: f64,
    pub gap_stderr: f64,
    pub trials: u64,
}

/// Membership bit and realized loss of each trial; trial `i` uses stream
/// `(seed, i)`.
pub fn counterexample_losses(cfg: &CounterexampleConfig, trials: u64, seed: u64, exec: Execution) -> Vec<(bool, f64)> {
    let half = cfg.eps / 2.0;
    map_indexed(exec, trials, |i| {
        let mut rng = RngStream::new(seed, i);
        let t = rng.bernoulli(0.5);
        let x = rng.normal(0.0, cfg.sigma_x);
        let y = x + rng.uniform(-half, half);
        let prediction = if t { y } else { x + cfg.d + rng.uniform(-half, half) };
        (t, (y - prediction).abs())
    })
}

/// Plays the zero-loss membership test: predict member iff the loss is 0.
pub fn counterexample_game(cfg: &CounterexampleConfig, trials: u64, seed: u64) -> Result<CounterexampleOutcome> {
    if trials < 2 {
        return Err(invalid("trials", "need at least two"));
    }
    let losses = counterexample_losses(cfg, trials, seed, Execution::default());
    let wins = losses.iter().filter(|(t, r)| (*r == 0.0) == *t).count();
    let split = |member: bool| -> Vec<f64> { losses.iter().filter(|(t, _)| *t == member).map(|&(_, r)| r).collect() };
    let (members, others) = (split(true), split(false));
    let stats = |v: &[f64]| -> (f64, f64) {
        if v.is_empty() {
            return (0.0, 0.0);
        }
        let (m, se) = crate::numerics::mean_and_stderr(v);
        (m, se * se)
    };
    let (m1, v1) = stats(&members);
    let (m0, v0) = stats(&others);
    Ok(CounterexampleOutcome {
        attack_success: wins as f64 / trials as f64,
        empirical_gap: m0 - m1,
        gap_stderr: (v0 + v1).sqrt(),
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates() {
        assert!(CounterexampleConfig::new(0.5, 0.6, 1.0).is_err());
        assert!(CounterexampleConfig::new(0.5, 0.0, 1.0).is_err());
        assert!(CounterexampleConfig::new(0.5, 0.1, 0.0).is_err());
    }

    #[test]
    fn perfect_success_small_gap() {
        let cfg = CounterexampleConfig::new(0.01, 0.005, 1.0).unwrap();
        let out = counterexample_game(&cfg, 20_000, 2).unwrap();
        assert_eq!(out.attack_success, 1.0);
        assert!((out.empirical_gap - 0.01).abs() < 3.0 * out.gap_stderr);
    }

    #[test]
    fn non_member_support() {
        let cfg = CounterexampleConfig::new(0.5, 0.1, 2.0).unwrap();
        for (t, r) in counterexample_losses(&cfg, 20_000, 1, Execution::Sequential) {
            if t {
                assert_eq!(r, 0.0);
            } else {
                assert!((0.4 - 1e-12..=0.6 + 1e-12).contains(&r), "{r}");
            }
        }
    }
}
