use nalgebra::DVector;

use super::design::RegressionDesign;
use crate::bounds::{
    optimize_r_max, thm5_success_upper_bound, BoundInputs, BoundReport, Provenance, Source, TailFamily,
};
use crate::error::{check_probability, invalid, Result};
use crate::numerics::{
    bernoulli_rate, estimate_risk_pair, map_indexed, Execution, RiskPair, RngStream,
};

/// One round of the membership game against the regression lab.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    /// True membership of the challenge response.
    pub t: bool,
    pub j: usize,
    /// Challenge response shown to the attacker.
    pub s: f64,
    /// Fitted parameters.
    pub theta: Vec<f64>,
    pub decision: bool,
    /// `x_j^T theta - s`.
    pub loss_r: f64,
}

impl TrialRecord {
    pub fn success(&self) -> bool {
        self.decision == self.t
    }
}

impl RegressionDesign {
    /// Bayes decision from `(j, s, theta)`: member iff
    /// `log Q_j(theta | s) > log Q(theta)`.
    ///
    /// The test-response density `p_{Y_j}(s)` and the `1/n` index weight are
    /// common to both hypotheses and never evaluated. Exact ties, including
    /// the degenerate noiseless design, decide non-member.
    pub fn membership_decision(&self, j: usize, s: f64, theta: &[f64]) -> Result<bool> {
        if self.sigma2() == 0.0 {
            return Ok(false);
        }
        let log_qj = self.posterior_qj(j, s)?.logpdf(theta)?;
        let log_q = self.with_q(|q| q.logpdf(theta))?;
        Ok(log_qj > log_q)
    }

    fn draw_responses(&self, rng: &mut RngStream) -> Vec<f64> {
        let sd = self.sigma2().sqrt();
        self.mean_response().iter().map(|m| m + sd * rng.standard_normal()).collect()
    }
}

/// Draws membership, index, training noise and challenge, fits, and lets
/// the Bayes attacker decide.
pub fn run_trial(design: &RegressionDesign, rng: &mut RngStream) -> Result<TrialRecord> {
    let t = rng.bernoulli(0.5);
    let j = rng.index(design.n());
    let y = design.draw_responses(rng);
    let s = if t {
        y[j]
    } else {
        design.mean_response()[j] + design.sigma2().sqrt() * rng.standard_normal()
    };
    let theta = design.ols_fit(&y)?;
    let decision = design.membership_decision(j, s, theta.as_slice())?;
    let loss_r = design.x().column(j).dot(&theta) - s;
    Ok(TrialRecord {
        t,
        j,
        s,
        theta: theta.as_slice().to_vec(),
        decision,
        loss_r,
    })
}

pub fn estimate_success_rate(design: &RegressionDesign, trials: u64, seed: u64) -> Result<(f64, f64)> {
    estimate_success_rate_with(design, trials, seed, Execution::default())
}

/// Monte-Carlo success rate of the Bayes attacker; trial `i` uses stream
/// `(seed, i)`. Returns `(rate, binomial standard error)`.
pub fn estimate_success_rate_with(
    design: &RegressionDesign,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(invalid("trials", "must be positive"));
    }
    let outcomes = map_indexed(exec, trials, |i| {
        run_trial(design, &mut RngStream::new(seed, i)).map(|r| r.success())
    });
    let mut wins = 0u64;
    for o in outcomes {
        wins += o? as u64;
    }
    Ok(bernoulli_rate(wins, trials))
}

/// One resampled training set: empirical risk on `y`, expected risk
/// estimated on a fresh draw `y'` at the same features.
pub fn sample_risk_pair(design: &RegressionDesign, rng: &mut RngStream) -> Result<RiskPair> {
    let y = design.draw_responses(rng);
    let y_fresh = design.draw_responses(rng);
    let theta = design.ols_fit(&y)?;
    let fitted: DVector<f64> = design.x().transpose() * theta;
    let idx: Vec<usize> = (0..design.n()).collect();
    let train = estimate_risk_pair(|&i: &usize| (y[i] - fitted[i]).powi(2), &idx, &idx)?;
    let fresh = estimate_risk_pair(|&i: &usize| (y_fresh[i] - fitted[i]).powi(2), &idx, &idx)?;
    Ok(RiskPair::new(train.empirical, fresh.expected, design.n(), design.n()))
}

/// `2 d sigma^2 / n`.
pub fn gap_closed_form(design: &RegressionDesign) -> f64 {
    2.0 * design.dim() as f64 * design.sigma2() / design.n() as f64
}

/// `(Var[R | T = 0], Var[R | T = 1]) = (sigma^2 (1 + d/n), sigma^2 (1 - d/n))`.
pub fn residual_variances(design: &RegressionDesign) -> (f64, f64) {
    let s2 = design.sigma2();
    let ratio = design.dim() as f64 / design.n() as f64;
    (s2 * (1.0 + ratio), s2 * (1.0 - ratio))
}

/// `I(S_J; theta | T) = P{T=1} / (2n) sum_j log(|Sigma| / |Sigma_j|)` in nats.
pub fn mi_conditional(design: &RegressionDesign, p_t1: f64) -> Result<f64> {
    check_probability("p_t1", p_t1)?;
    if p_t1 == 0.0 {
        return Ok(0.0);
    }
    let logdet_q = design.with_q(|q| Ok(q.logdet()))?;
    let mut total = 0.0;
    for j in 0..design.n() {
        // Sigma_j does not depend on s
        total += logdet_q - design.posterior_qj(j, 0.0)?.logdet();
    }
    Ok(p_t1 * total / (2.0 * design.n() as f64))
}

/// Lower bound from the exponential-tail family with `sigma_R^2 = sigma^2`
/// and the closed-form gap, and upper bound from inverting the binary KL
/// against the conditional mutual information. Uniform prior only.
pub fn success_bounds(design: &RegressionDesign, p_m: f64) -> Result<BoundReport> {
    if p_m != 0.5 {
        return Err(invalid("p_m", "the regression lab uses a uniform membership prior"));
    }
    let gap = gap_closed_form(design);
    let (r_star, lb) = optimize_r_max(
        TailFamily::Exponential,
        &BoundInputs {
            p_m,
            gap_abs: gap,
            loss_max: f64::INFINITY,
            sigma2_proxy: design.sigma2(),
            r_max: 0.0,
        },
    )?;
    let mi = mi_conditional(design, 0.5)?;
    let ub = thm5_success_upper_bound(mi, p_m)?;
    Ok(BoundReport {
        lb_thm2: None,
        lb_thm3: None,
        lb_thm4: Some(lb.value),
        ub_thm5: Some(ub),
        r_max_star: Some(r_star),
        mi_nats: Some(mi),
        gap,
        prior_binds: lb.prior_binds,
        provenance: Provenance {
            gap: Source::ClosedForm,
            mutual_information: Source::ClosedForm,
        },
    })
}
