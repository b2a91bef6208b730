//! Membership and attribute inference analysis.
//!
//! * [`numerics`]: Gaussian densities, golden-section search, binary KL,
//!   risk estimators and reproducible random streams.
//! * [`bounds`]: generalization-gap lower bounds and mutual-information
//!   upper bounds on attacker success, plus finite-case oracles.
//! * [`regress`]: the Gaussian linear-regression lab with an exact Bayes
//!   membership attacker.
//! * [`nn`]: a small fully-connected classifier used as an attack target.
//! * [`attacks`]: black-box and white-box attack games.
//! * [`data`]: labeled datasets and synthetic generators.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod attacks;
pub mod bounds;
pub mod data;
mod error;
pub mod nn;
pub mod numerics;
pub mod regress;

pub use error::{Error, Result};
