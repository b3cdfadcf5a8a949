//! Bayes factors for n-fold Bernoulli experiments.
//!
//! * [`seqbf`]: the recursive worksheet estimator (running deviation,
//!   indicator series, rule-of-succession posterior, BF₁₀).
//! * [`gof`]: Pearson chi-square and the indicator threshold it implies.
//! * [`exactbf`]: exact binomial-test BF₁₀ under a uniform prior, plus the
//!   sample-size scan.
//! * [`calib`]: piecewise cubic calibration from worksheet values to the
//!   exact scale.
//! * [`stats`]: Levene's test and pooled/Welch t-tests.
//! * [`special`]: log-gamma, incomplete beta, t and F tails.

// `!(x > 0.0)` style guards are used deliberately so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calib;
pub mod error;
pub mod exactbf;
pub mod gof;
pub mod seqbf;
pub mod special;
pub mod stats;

pub use error::{Error, Result};

/// Worksheet and reference Bayes factors for n = 200 (CSV,
/// `frequency,source_bf,reference_bf`).
pub const N200_CSV: &str = include_str!("../data/n200.csv");
