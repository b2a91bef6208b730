//! Exact computations on finite joint distributions of
//! (model parameters, side information, hidden attribute).

use crate::error::{invalid, Error, Result};

/// Cap on `|T|^(|Theta| |S|)` for [`exhaustive_strategy_success`].
pub const MAX_ENUMERATED_STRATEGIES: u128 = 20_000;

const MASS_TOL: f64 = 1e-12;

/// Probability mass function over `Theta x S x T`, stored with `t` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteJoint {
    n_theta: usize,
    n_side: usize,
    n_target: usize,
    pmf: Vec<f64>,
}

impl FiniteJoint {
    pub fn new(n_theta: usize, n_side: usize, n_target: usize, pmf: Vec<f64>) -> Result<Self> {
        if n_theta == 0 || n_side == 0 || n_target == 0 {
            return Err(invalid("support", "every support size must be positive"));
        }
        let len = n_theta * n_side * n_target;
        if pmf.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                got: pmf.len(),
            });
        }
        if pmf.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(invalid("pmf", "entries must be finite and nonnegative"));
        }
        let total: f64 = pmf.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(invalid("pmf", format!("total mass {total} is not 1")));
        }
        Ok(Self {
            n_theta,
            n_side,
            n_target,
            pmf,
        })
    }

    /// Builds from unnormalized nonnegative weights.
    pub fn from_weights(n_theta: usize, n_side: usize, n_target: usize, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(invalid("weights", "total weight must be positive"));
        }
        Self::new(n_theta, n_side, n_target, weights.iter().map(|w| w / total).collect())
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.n_theta, self.n_side, self.n_target)
    }

    pub fn p(&self, theta: usize, side: usize, target: usize) -> f64 {
        self.pmf[(theta * self.n_side + side) * self.n_target + target]
    }

    /// Distribution of `T` given one `(theta, s)` cell, unnormalized.
    fn cell(&self, theta: usize, side: usize) -> &[f64] {
        let start = (theta * self.n_side + side) * self.n_target;
        &self.pmf[start..start + self.n_target]
    }

    fn cells(&self) -> impl Iterator<Item = &[f64]> {
        self.pmf.chunks(self.n_target)
    }
}

/// Bayes decision per `(theta, s)` cell, flattened with `s` fastest.
/// Ties go to the lowest target index.
pub fn bayes_strategy(joint: &FiniteJoint) -> Vec<usize> {
    joint
        .cells()
        .map(|cell| {
            let mut best = 0;
            for (t, &p) in cell.iter().enumerate() {
                if p > cell[best] {
                    best = t;
                }
            }
            best
        })
        .collect()
}

/// `sum_{theta, s} p(theta, s) max_t p(t | theta, s)`: the success
/// probability of the Bayes-optimal attacker.
pub fn bayes_success_finite(joint: &FiniteJoint) -> f64 {
    let mut total = 0.0;
    for theta in 0..joint.n_theta {
        for side in 0..joint.n_side {
            let cell = joint.cell(theta, side);
            let marginal: f64 = cell.iter().sum();
            if marginal == 0.0 {
                continue;
            }
            let best = cell.iter().map(|p| p / marginal).fold(0.0, f64::max);
            total += marginal * best;
        }
    }
    total
}

/// Success probability of a deterministic strategy `(theta, s) -> t`,
/// given as a table flattened with `s` fastest.
pub fn strategy_success(joint: &FiniteJoint, strategy: &[usize]) -> Result<f64> {
    let cells = joint.n_theta * joint.n_side;
    if strategy.len() != cells {
        return Err(Error::DimensionMismatch {
            expected: cells,
            got: strategy.len(),
        });
    }
    let mut total = 0.0;
    for (cell, &t) in joint.cells().zip(strategy) {
        if t >= joint.n_target {
            return Err(invalid("strategy", format!("target {t} out of range")));
        }
        total += cell[t];
    }
    Ok(total)
}

/// Maximum success over all `|T|^(|Theta| |S|)` deterministic strategies,
/// by plain enumeration. Rejects instances above
/// [`MAX_ENUMERATED_STRATEGIES`].
pub fn exhaustive_strategy_success(joint: &FiniteJoint) -> Result<f64> {
    let cells = joint.n_theta * joint.n_side;
    let count = (joint.n_target as u128).checked_pow(cells as u32).unwrap_or(u128::MAX);
    if count > MAX_ENUMERATED_STRATEGIES {
        return Err(Error::TooLarge(count));
    }
    let mut strategy = vec![0usize; cells];
    let mut best = f64::NEG_INFINITY;
    loop {
        best = best.max(strategy_success(joint, &strategy)?);
        // odometer increment
        let mut k = 0;
        loop {
            if k == cells {
                return Ok(best);
            }
            strategy[k] += 1;
            if strategy[k] < joint.n_target {
                break;
            }
            strategy[k] = 0;
            k += 1;
        }
    }
}

fn check_pmf(name: &'static str, p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::Empty(name));
    }
    if p.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(invalid(name, "entries must be finite and nonnegative"));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > MASS_TOL {
        return Err(invalid(name, format!("total mass {total} is not 1")));
    }
    Ok(())
}

fn check_pair(p1: &[f64], p0: &[f64]) -> Result<()> {
    check_pmf("p1", p1)?;
    check_pmf("p0", p0)?;
    if p1.len() != p0.len() {
        return Err(Error::DimensionMismatch {
            expected: p1.len(),
            got: p0.len(),
        });
    }
    Ok(())
}

/// `eps_1(R) + eps_0(R^c)` for a decision region `R` (decide `T = 1` on
/// `R`): false positives under `p0` plus misses under `p1`.
pub fn region_error_sum(p1: &[f64], p0: &[f64], region: &[bool]) -> Result<f64> {
    check_pair(p1, p0)?;
    if region.len() != p1.len() {
        return Err(Error::DimensionMismatch {
            expected: p1.len(),
            got: region.len(),
        });
    }
    Ok(p1
        .iter()
        .zip(p0)
        .zip(region)
        .map(|((a, b), &r)| if r { *b } else { *a })
        .sum())
}

/// Total variation between the two hypotheses and the optimal error sum,
/// attained by the likelihood-ratio region `{p1 > p0}`.
pub fn tv_tradeoff_finite(p1: &[f64], p0: &[f64]) -> Result<(f64, f64)> {
    check_pair(p1, p0)?;
    let tv = 0.5 * p1.iter().zip(p0).map(|(a, b)| (a - b).abs()).sum::<f64>();
    let region: Vec<bool> = p1.iter().zip(p0).map(|(a, b)| a > b).collect();
    let err = region_error_sum(p1, p0, &region)?;
    Ok((tv, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn independent_target_gives_max_prior() {
        // T independent of (theta, S) with prior (0.7, 0.3)
        let mut w = Vec::new();
        for _ in 0..2 * 3 {
            w.extend([0.7, 0.3]);
        }
        let j = FiniteJoint::from_weights(2, 3, 2, w).unwrap();
        assert!((bayes_success_finite(&j) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn binary_channel() {
        // T uniform, theta = T flipped w.p. 0.1, no side information
        let pmf = vec![0.45, 0.05, 0.05, 0.45];
        let j = FiniteJoint::new(2, 1, 2, pmf).unwrap();
        assert!((bayes_success_finite(&j) - 0.9).abs() < 1e-15);
        assert_eq!(bayes_strategy(&j), vec![0, 1]);
        assert!((exhaustive_strategy_success(&j).unwrap() - 0.9).abs() < 1e-15);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let j = FiniteJoint::new(1, 1, 3, vec![0.2, 0.4, 0.4]).unwrap();
        assert_eq!(bayes_strategy(&j), vec![1]);
    }

    #[test]
    fn zero_cells_are_skipped() {
        let j = FiniteJoint::new(2, 1, 2, vec![0.0, 0.0, 0.25, 0.75]).unwrap();
        assert_eq!(bayes_success_finite(&j), 0.75);
    }

    #[test]
    fn rejects_invalid() {
        assert!(FiniteJoint::new(1, 1, 2, vec![0.5, 0.6]).is_err());
        assert!(FiniteJoint::new(1, 1, 2, vec![1.5, -0.5]).is_err());
        assert!(FiniteJoint::new(1, 1, 2, vec![1.0]).is_err());
        let big = FiniteJoint::from_weights(3, 4, 3, vec![1.0; 36]).unwrap();
        assert!(matches!(exhaustive_strategy_success(&big), Err(Error::TooLarge(531_441))));
    }

    #[test]
    fn tv_examples() {
        assert_eq!(tv_tradeoff_finite(&[0.3, 0.7], &[0.3, 0.7]).unwrap(), (0.0, 1.0));
        assert_eq!(tv_tradeoff_finite(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), (1.0, 0.0));
        let (tv, err) = tv_tradeoff_finite(&[0.8, 0.2], &[0.3, 0.7]).unwrap();
        assert!((tv - 0.5).abs() < 1e-15 && (err - 0.5).abs() < 1e-15);
        assert!(tv_tradeoff_finite(&[1.0], &[0.5, 0.5]).is_err());
        assert!(tv_tradeoff_finite(&[0.5, 0.6], &[0.5, 0.5]).is_err());
    }
}
