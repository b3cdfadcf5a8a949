use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty sample")]
    EmptySample,
    #[error("non-binary observation at position {position}: {value}")]
    NonBinary { position: usize, value: String },
    #[error("invalid threshold {0}: must lie in (0, 0.5]")]
    InvalidThreshold(f64),
    #[error("degenerate posterior {0}: must lie strictly inside (0, 1)")]
    DegeneratePosterior(f64),
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("threshold exceeds deviation range: k = {k} for n = {n}")]
    ThresholdExceedsRange { n: u64, k: f64 },
    #[error("invalid counts: {0}")]
    InvalidCounts(String),
    #[error("underdetermined fit: {0}")]
    UnderdeterminedFit(String),
    #[error("non-invertible source fit (leading coefficient is zero)")]
    NonInvertibleFit,
    #[error("outside calibrated domain: x = {0}")]
    OutsideDomain(f64),
    #[error("no segments")]
    NoSegments,
    #[error("invalid segments: {0}")]
    InvalidSegments(String),
    #[error("degenerate deviations: within-group variance of absolute deviations is zero")]
    DegenerateDeviations,
    #[error("degenerate samples: both groups have zero variance")]
    DegenerateSamples,
    #[error("group too small: need at least 2 observations, got {0}")]
    GroupTooSmall(usize),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("model format: {0}")]
    Format(String),
}
