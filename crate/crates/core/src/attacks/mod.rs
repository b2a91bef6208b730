//! Attack games against trained models.
//!
//! Membership inference uses the black-box scores in [`scores`] inside the
//! [`MiaGame`] harness. Attribute inference enumerates every candidate
//! value of the sensitive attribute and ranks them by a black-box or
//! white-box criterion. [`counterexample_game`] simulates a learner whose
//! generalization gap can be made arbitrarily small while membership stays
//! perfectly detectable.

mod attribute;
mod counterexample;
mod mia;
mod scores;
mod sweep;

pub use attribute::{attr_infer, AttrGuess, AttrStrategy, AttributeInstance};
pub use counterexample::{counterexample_game, counterexample_losses, CounterexampleConfig, CounterexampleOutcome};
pub use mia::{calibrate_threshold, roc_point, run_mia, run_mia_with, thm2_lb_for_gap, thm2_lb_from_game, MiaGame, MSE_LOSS_MAX};
pub use scores::{likelihood_score, loss_score, mentr_score, MiaStrategy};
pub use sweep::{attr_success_count, run_attr_sweep, run_attr_sweep_on, run_mia_sweep, AttrSweepConfig, MiaSweepConfig, SweepPoint};
