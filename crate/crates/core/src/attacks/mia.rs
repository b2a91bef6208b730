use std::collections::HashSet;

use super::scores::MiaStrategy;
use crate::bounds::{thm2_lower_bound, BoundInputs};
use crate::data::Dataset;
use crate::error::{check_probability, invalid, Error, Result};
use crate::nn::Mlp;
use crate::numerics::{bernoulli_rate, estimate_risk_pair, map_indexed, Execution, RiskPair, RngStream};

/// The MSE between a probability vector and a one-hot label never reaches 2.
pub const MSE_LOSS_MAX: f64 = 2.0;

/// Membership game: the challenger flips `t ~ Bernoulli(prior_t1)` and
/// hands the attacker a sample from the training pool (`t = 1`) or the
/// test pool (`t = 0`).
#[derive(Debug, Clone, Copy)]
pub struct MiaGame<'a> {
    target: &'a Mlp,
    train_pool: &'a Dataset,
    test_pool: &'a Dataset,
    prior_t1: f64,
    threshold: f64,
}

fn row_key(d: &Dataset, i: usize) -> Vec<u64> {
    let mut k: Vec<u64> = d.features(i).iter().map(|v| v.to_bits()).collect();
    k.push(d.label(i) as u64);
    k
}

/// Fails if any sample appears in both sets.
pub(crate) fn check_disjoint(a: &Dataset, b: &Dataset, what: &'static str) -> Result<()> {
    let seen: HashSet<Vec<u64>> = (0..a.len()).map(|i| row_key(a, i)).collect();
    if let Some(i) = (0..b.len()).find(|&i| seen.contains(&row_key(b, i))) {
        return Err(invalid(what, format!("row {i} also appears in the training pool")));
    }
    Ok(())
}

impl<'a> MiaGame<'a> {
    pub fn new(target: &'a Mlp, train_pool: &'a Dataset, test_pool: &'a Dataset, prior_t1: f64, threshold: f64) -> Result<Self> {
        check_probability("prior_t1", prior_t1)?;
        if prior_t1 == 0.0 || prior_t1 == 1.0 {
            return Err(invalid("prior_t1", "must lie strictly inside (0, 1)"));
        }
        if threshold.is_nan() {
            return Err(invalid("threshold", "is NaN"));
        }
        if train_pool.is_empty() {
            return Err(Error::Empty("training pool"));
        }
        if test_pool.is_empty() {
            return Err(Error::Empty("test pool"));
        }
        for d in [train_pool, test_pool] {
            if d.dim() != target.input_dim() {
                return Err(Error::DimensionMismatch {
                    expected: target.input_dim(),
                    got: d.dim(),
                });
            }
        }
        check_disjoint(train_pool, test_pool, "test_pool")?;
        Ok(Self {
            target,
            train_pool,
            test_pool,
            prior_t1,
            threshold,
        })
    }

    pub fn target(&self) -> &Mlp {
        self.target
    }

    pub fn train_pool(&self) -> &Dataset {
        self.train_pool
    }

    pub fn test_pool(&self) -> &Dataset {
        self.test_pool
    }

    pub fn prior_t1(&self) -> f64 {
        self.prior_t1
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn with_threshold(self, threshold: f64) -> Self {
        Self { threshold, ..self }
    }

    /// One round on stream `rng`; returns whether the attacker was right.
    pub fn play(&self, strategy: MiaStrategy, rng: &mut RngStream) -> Result<bool> {
        let t = rng.bernoulli(self.prior_t1);
        let pool = if t { self.train_pool } else { self.test_pool };
        let i = rng.index(pool.len());
        let score = strategy.score(self.target, pool.features(i), pool.label(i))?;
        Ok(strategy.predicts_member(score, self.threshold) == t)
    }
}

pub fn run_mia(game: &MiaGame, strategy: MiaStrategy, trials: u64, seed: u64) -> Result<(f64, f64)> {
    run_mia_with(game, strategy, trials, seed, Execution::default())
}

/// Success rate and binomial standard error over `trials` rounds; round `i`
/// draws from stream `(seed, i)`.
pub fn run_mia_with(game: &MiaGame, strategy: MiaStrategy, trials: u64, seed: u64, exec: Execution) -> Result<(f64, f64)> {
    let wins = mia_wins(game, strategy, trials, seed, exec)?;
    Ok(bernoulli_rate(wins, trials))
}

pub(crate) fn mia_wins(game: &MiaGame, strategy: MiaStrategy, trials: u64, seed: u64, exec: Execution) -> Result<u64> {
    if trials == 0 {
        return Err(invalid("trials", "must be positive"));
    }
    let outcomes = map_indexed(exec, trials, |i| game.play(strategy, &mut RngStream::new(seed, i)));
    let mut wins = 0;
    for o in outcomes {
        wins += o? as u64;
    }
    Ok(wins)
}

/// Median of the scores of `members` and `non_members` pooled together.
pub fn calibrate_threshold(model: &Mlp, strategy: MiaStrategy, members: &Dataset, non_members: &Dataset) -> Result<f64> {
    let mut scores = Vec::with_capacity(members.len() + non_members.len());
    for d in [members, non_members] {
        for i in 0..d.len() {
            scores.push(strategy.score(model, d.features(i), d.label(i))?);
        }
    }
    if scores.is_empty() {
        return Err(Error::Empty("calibration set"));
    }
    scores.sort_by(f64::total_cmp);
    let m = scores.len();
    Ok(if m % 2 == 1 {
        scores[m / 2]
    } else {
        0.5 * (scores[m / 2 - 1] + scores[m / 2])
    })
}

/// True- and false-positive rates of the membership decision at threshold
/// `h`.
pub fn roc_point(model: &Mlp, strategy: MiaStrategy, h: f64, members: &Dataset, non_members: &Dataset) -> Result<(f64, f64)> {
    let rate = |d: &Dataset| -> Result<f64> {
        if d.is_empty() {
            return Err(Error::Empty("roc set"));
        }
        let mut hits = 0usize;
        for i in 0..d.len() {
            hits += strategy.predicts_member(strategy.score(model, d.features(i), d.label(i))?, h) as usize;
        }
        Ok(hits as f64 / d.len() as f64)
    };
    Ok((rate(members)?, rate(non_members)?))
}

/// Bounded-loss lower bound for an MSE gap, with `P_m` the larger prior.
pub fn thm2_lb_for_gap(gap: f64, prior_t1: f64) -> Result<f64> {
    check_probability("prior_t1", prior_t1)?;
    let lb = thm2_lower_bound(&BoundInputs {
        p_m: prior_t1.max(1.0 - prior_t1),
        gap_abs: gap.abs(),
        loss_max: MSE_LOSS_MAX,
        sigma2_proxy: f64::NAN,
        r_max: f64::NAN,
    })?;
    Ok(lb.value)
}

/// Lower bound on the Bayes attacker's success from the target's MSE gap
/// between its training pool and `eval`. Returns the bound and the risks.
pub fn thm2_lb_from_game(game: &MiaGame, eval: &Dataset) -> Result<(f64, RiskPair)> {
    check_disjoint(game.train_pool, eval, "eval_set")?;
    let loss_of = |d: &Dataset| -> Result<Vec<f64>> { (0..d.len()).map(|i| game.target.mse_loss(d.features(i), d.label(i))).collect() };
    let train = loss_of(game.train_pool)?;
    let held = loss_of(eval)?;
    let risks = estimate_risk_pair(|&l: &f64| l, &train, &held)?;
    Ok((thm2_lb_for_gap(risks.gap, game.prior_t1)?, risks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{blobs, BlobConfig};

    fn pools() -> (Dataset, Dataset) {
        let all = blobs(&BlobConfig::default(), 400, 3).unwrap();
        let idx: Vec<usize> = (0..400).collect();
        (all.subset(&idx[..200]), all.subset(&idx[200..]))
    }

    #[test]
    fn rejects_overlapping_pools() {
        let (train, test) = pools();
        let m = Mlp::zeros(&[2, 2]).unwrap();
        let overlap = train.subset(&[0, 1]);
        assert!(MiaGame::new(&m, &train, &overlap, 0.5, 0.8).is_err());
        assert!(MiaGame::new(&m, &train, &test, 0.0, 0.8).is_err());
        assert!(MiaGame::new(&m, &train, &test, 0.5, 0.8).is_ok());
    }

    #[test]
    fn constant_member_guess_matches_prior() {
        let (train, test) = pools();
        let m = Mlp::new(&[2, 4, 2], 1).unwrap();
        let game = MiaGame::new(&m, &train, &test, 0.3, f64::NEG_INFINITY).unwrap();
        let (rate, se) = run_mia(&game, MiaStrategy::Likelihood, 20_000, 9).unwrap();
        assert!((rate - 0.3).abs() < 3.0 * se + 1e-12, "{rate} {se}");
    }

    #[test]
    fn zero_model_is_uninformative() {
        let (train, test) = pools();
        let m = Mlp::zeros(&[2, 2]).unwrap();
        for s in MiaStrategy::ALL {
            let h = calibrate_threshold(&m, s, &train, &test).unwrap();
            let game = MiaGame::new(&m, &train, &test, 0.5, h).unwrap();
            let (rate, se) = run_mia(&game, s, 20_000, 4).unwrap();
            assert!((rate - 0.5).abs() < 3.0 * se, "{s:?} {rate}");
        }
    }

    #[test]
    fn execution_modes_agree() {
        let (train, test) = pools();
        let m = Mlp::new(&[2, 3, 2], 2).unwrap();
        let game = MiaGame::new(&m, &train, &test, 0.5, 0.6).unwrap();
        let a = run_mia_with(&game, MiaStrategy::Likelihood, 500, 1, Execution::Sequential).unwrap();
        let b = run_mia_with(&game, MiaStrategy::Likelihood, 500, 1, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bounded_loss_bound_from_gap() {
        assert_eq!(thm2_lb_for_gap(0.0, 0.5).unwrap(), 0.5);
        assert!((thm2_lb_for_gap(0.4, 0.5).unwrap() - 0.55).abs() < 1e-12);
        assert!((thm2_lb_for_gap(-0.4, 0.5).unwrap() - 0.55).abs() < 1e-12);
    }

    #[test]
    fn calibrated_median() {
        let (train, test) = pools();
        let m = Mlp::new(&[2, 2], 5).unwrap();
        let h = calibrate_threshold(&m, MiaStrategy::Loss, &train, &test).unwrap();
        let (tpr, fpr) = roc_point(&m, MiaStrategy::Loss, h, &train, &test).unwrap();
        // exactly half of the pooled scores sit strictly below the median
        assert!(((tpr + fpr) / 2.0 - 0.5).abs() <= 1.0 / 400.0);
    }
}
