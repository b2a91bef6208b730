//! Gaussian linear-regression laboratory.
//!
//! Fixed features `x` (d x n), responses `y_i = beta^T x_i + W_i` with
//! `W_i ~ N(0, sigma^2)`, and the least-squares estimator. Everything the
//! Bayes-optimal membership attacker needs is available in closed form:
//! the parameter law `Q = N(beta, sigma^2 xbar^-1)` for non-members and
//! `Q_j(. | s)` once sample `j` is pinned to `s`.

mod design;
mod lab;

pub use design::{least_squares, RegressionDesign};
pub use lab::{
    estimate_success_rate, estimate_success_rate_with, gap_closed_form, mi_conditional,
    residual_variances, run_trial, sample_risk_pair, success_bounds, TrialRecord,
};
