//! Closed-form bounds on attacker success, and brute-force finite-case
//! oracles for the Bayes-optimal attacker and the optimal error tradeoff.

mod finite;
mod generalization;
mod information;
mod report;

pub use finite::{
    bayes_strategy, bayes_success_finite, exhaustive_strategy_success, region_error_sum,
    strategy_success, tv_tradeoff_finite, FiniteJoint, MAX_ENUMERATED_STRATEGIES,
};
pub use generalization::{
    c_factor, optimize_r_max, r0, thm2_lower_bound, thm3_lower_bound, thm4_lower_bound,
    BoundInputs, LowerBound, TailFamily,
};
pub use information::{psi_star_subgaussian, thm5_gap_tail_bound, thm5_success_upper_bound};
pub use report::{BoundReport, Provenance, Source};
