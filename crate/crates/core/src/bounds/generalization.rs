//! Lower bounds on membership-inference success from the generalization gap.
//!
//! All three share the form `max{P_m, P_m * (|gap| / (2 R) - slack - 1) + 1}`
//! where `R` is the loss bound (bounded losses) or a truncation level
//! `R_max` (tail-bounded losses), and `slack` is the tail mass beyond it.

use crate::error::{check_probability, invalid, Result};
use crate::numerics::{golden_section, Mode, DEFAULT_TOL};

/// Inputs shared by the generalization-gap bounds. Fields a given bound
/// does not use are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    /// Largest prior probability of the membership hypothesis.
    pub p_m: f64,
    /// Absolute generalization gap, in loss units.
    pub gap_abs: f64,
    /// Bound on the absolute loss.
    pub loss_max: f64,
    /// Variance proxy of the loss tail.
    pub sigma2_proxy: f64,
    /// Truncation level for tail-bounded losses.
    pub r_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBound {
    pub value: f64,
    /// The interior expression fell below `P_m`, so the prior guess wins.
    pub prior_binds: bool,
    /// An input or the result had to be clamped into its valid range.
    pub clamped: bool,
}

/// Tail assumption on the loss random variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TailFamily {
    /// `P{|R| >= r} <= 2 exp(-r^2 / 2 s^2)`
    SubGaussian,
    /// `P{|R| >= r} <= 2 exp(-r / 2 s^2)`
    Exponential,
}

fn check_p_m(p_m: f64) -> Result<()> {
    check_probability("p_m", p_m)?;
    if p_m < 0.5 {
        return Err(invalid("p_m", format!("{p_m} is below 1/2 for a binary hypothesis")));
    }
    Ok(())
}

fn check_gap(gap: f64) -> Result<()> {
    if !(gap >= 0.0) || !gap.is_finite() {
        return Err(invalid("gap_abs", format!("must be finite and nonnegative, got {gap}")));
    }
    Ok(())
}

fn finish(p_m: f64, interior: f64, clamped: bool) -> LowerBound {
    let prior_binds = !(interior > p_m);
    let raw = if prior_binds { p_m } else { interior };
    LowerBound {
        value: raw.min(1.0),
        prior_binds,
        clamped: clamped || raw > 1.0,
    }
}

/// Bounded-loss lower bound: `max{P_m, P_m (|gap| / 2 l_max - 1) + 1}`.
///
/// A gap larger than `2 l_max` is impossible for a loss bounded by
/// `l_max`; it is clamped and flagged.
pub fn thm2_lower_bound(inputs: &BoundInputs) -> Result<LowerBound> {
    let BoundInputs {
        p_m,
        gap_abs,
        loss_max,
        ..
    } = *inputs;
    if !(loss_max > 0.0) {
        return Err(invalid("loss_max", format!("must be positive, got {loss_max}")));
    }
    check_p_m(p_m)?;
    check_gap(gap_abs)?;
    let clamped = gap_abs > 2.0 * loss_max;
    let gap = gap_abs.min(2.0 * loss_max);
    let interior = p_m * (gap / (2.0 * loss_max) - 1.0) + 1.0;
    Ok(finish(p_m, interior, clamped))
}

/// Smallest admissible truncation level for a tail family.
pub fn r0(family: TailFamily, sigma2: f64) -> Result<f64> {
    if !(sigma2 > 0.0) {
        return Err(invalid("sigma2_proxy", format!("must be positive, got {sigma2}")));
    }
    Ok(match family {
        TailFamily::SubGaussian => (2.0 * sigma2 * std::f64::consts::LN_2).sqrt(),
        TailFamily::Exponential => 2.0 * sigma2 * std::f64::consts::LN_2,
    })
}

/// Tail-mass factor `C(R_max, sigma)` of the given family.
pub fn c_factor(family: TailFamily, r_max: f64, sigma2: f64) -> f64 {
    match family {
        TailFamily::SubGaussian => {
            let q = r_max * r_max;
            (-q / (2.0 * sigma2)).exp() * (1.0 + sigma2 / q)
        }
        TailFamily::Exponential => (-r_max / (2.0 * sigma2)).exp() * (1.0 + 2.0 * sigma2 / r_max),
    }
}

fn tail_interior(family: TailFamily, p_m: f64, gap: f64, r_max: f64, sigma2: f64) -> f64 {
    p_m * (gap / (2.0 * r_max) - c_factor(family, r_max, sigma2) / (1.0 - p_m) - 1.0) + 1.0
}

fn tail_lower_bound(family: TailFamily, inputs: &BoundInputs) -> Result<LowerBound> {
    let BoundInputs {
        p_m,
        gap_abs,
        sigma2_proxy,
        r_max,
        ..
    } = *inputs;
    check_p_m(p_m)?;
    if p_m == 1.0 {
        return Err(invalid("p_m", "must be below 1 for tail-bounded losses"));
    }
    check_gap(gap_abs)?;
    let lo = r0(family, sigma2_proxy)?;
    if !(r_max >= lo) {
        return Err(invalid("r_max", format!("{r_max} is below r0 = {lo}")));
    }
    let interior = tail_interior(family, p_m, gap_abs, r_max, sigma2_proxy);
    Ok(finish(p_m, interior, false))
}

/// Sub-Gaussian-loss lower bound, valid for `r_max >= sqrt(2 s^2 ln 2)`.
pub fn thm3_lower_bound(inputs: &BoundInputs) -> Result<LowerBound> {
    tail_lower_bound(TailFamily::SubGaussian, inputs)
}

/// Exponentially-tailed-loss lower bound, valid for `r_max >= 2 s^2 ln 2`.
pub fn thm4_lower_bound(inputs: &BoundInputs) -> Result<LowerBound> {
    tail_lower_bound(TailFamily::Exponential, inputs)
}

/// Maximizes the tail-family lower bound over `R_max` in `[r0, 1e6 r0]` by
/// golden-section search. `inputs.r_max` is ignored.
///
/// Returns `(r_max_star, bound at r_max_star)`.
pub fn optimize_r_max(family: TailFamily, inputs: &BoundInputs) -> Result<(f64, LowerBound)> {
    let BoundInputs {
        p_m,
        gap_abs,
        sigma2_proxy,
        ..
    } = *inputs;
    check_p_m(p_m)?;
    check_gap(gap_abs)?;
    let lo = r0(family, sigma2_proxy)?;
    let best = golden_section(
        |r| tail_interior(family, p_m, gap_abs, r, sigma2_proxy),
        lo,
        lo * 1e6,
        DEFAULT_TOL,
        Mode::Max,
    )?;
    let bound = tail_lower_bound(
        family,
        &BoundInputs {
            r_max: best.x,
            ..*inputs
        },
    )?;
    Ok((best.x, bound))
}
