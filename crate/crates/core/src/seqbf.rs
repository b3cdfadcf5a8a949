//! The recursive worksheet estimator of BF₁₀ for an n-fold Bernoulli sample.
//!
//! For each prefix `x_1..x_i` the running deviation `r_i = |mean - 0.5|` is
//! compared against a threshold `k`; prefixes with `r_i < k` count as
//! "frequency is one half" (`y_i = 1`). The posterior probability of the null
//! is the rule-of-succession estimate `(Σy + 1) / (n + 2)` and, with unit
//! prior odds, `BF₁₀ = (1 - P(H₀|x)) / P(H₀|x) = (n + 1 - Σy) / (Σy + 1)`.
//!
//! The estimator is order sensitive. [`canonical_order`] puts every 1 before
//! every 0, which makes the result a function of `(n, Σx)` only.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gof;

/// Threshold used by the worksheet for `n = 200`.
pub const WORKSHEET_THRESHOLD: f64 = 0.07;

/// Ordered binary observations of event A.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SampleSequence {
    values: Vec<u8>,
}

impl SampleSequence {
    pub fn new(values: Vec<u8>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| **v > 1) {
            return Err(Error::NonBinary {
                position: i + 1,
                value: v.to_string(),
            });
        }
        Ok(Self { values })
    }

    /// Canonically ordered sample with `successes` ones followed by zeros.
    pub fn from_counts(n: u64, successes: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySample);
        }
        if successes > n {
            return Err(Error::InvalidCounts(format!(
                "successes {successes} exceed sample size {n}"
            )));
        }
        let mut values = vec![1u8; successes as usize];
        values.resize(n as usize, 0);
        Ok(Self { values })
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn successes(&self) -> u64 {
        self.values.iter().map(|&v| u64::from(v)).sum()
    }

    /// Observed frequency of A, `Σx / n`.
    pub fn frequency(&self) -> f64 {
        self.successes() as f64 / self.len() as f64
    }
}

impl TryFrom<Vec<u8>> for SampleSequence {
    type Error = Error;

    fn try_from(values: Vec<u8>) -> Result<Self> {
        Self::new(values)
    }
}

/// Running deviations `r_i` of the prefix frequency from one half.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationSeries {
    r: Vec<f64>,
}

impl DeviationSeries {
    pub fn values(&self) -> &[f64] {
        &self.r
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }
}

/// Validated indicator threshold `k ∈ (0, 0.5]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Threshold(f64);

impl Threshold {
    pub fn new(k: f64) -> Result<Self> {
        if k > 0.0 && k <= 0.5 {
            Ok(Self(k))
        } else {
            Err(Error::InvalidThreshold(k))
        }
    }

    /// Default threshold for a sample of size `n`: the worksheet constant
    /// 0.07 at `n = 200`, otherwise the chi-square threshold rounded up to
    /// two decimals. Samples too small for the chi-square bound fall back
    /// to 0.5.
    pub fn default_for(n: u64) -> Self {
        if n == 200 {
            return Self(WORKSHEET_THRESHOLD);
        }
        match gof::solve_unbiased_k(n, gof::DEFAULT_CRITICAL_VALUE) {
            Ok(sol) => Self(sol.k_working.min(0.5)),
            Err(_) => Self(0.5),
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Threshold {
    type Error = Error;

    fn try_from(k: f64) -> Result<Self> {
        Self::new(k)
    }
}

impl From<Threshold> for f64 {
    fn from(k: Threshold) -> f64 {
        k.0
    }
}

/// Indicators `y_i` of the event "prefix frequency is one half", with the
/// threshold that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorSeries {
    y: Vec<u8>,
    k: Threshold,
}

impl IndicatorSeries {
    pub fn values(&self) -> &[u8] {
        &self.y
    }

    pub fn threshold(&self) -> Threshold {
        self.k
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.y.iter().map(|&v| u64::from(v)).sum()
    }
}

/// Where a Bayes factor came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Sequential,
    Exact,
    Corrected,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Sequential => "sequential",
            Method::Exact => "exact",
            Method::Corrected => "corrected",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sequential" => Ok(Method::Sequential),
            "exact" => Ok(Method::Exact),
            "corrected" => Ok(Method::Corrected),
            other => Err(Error::Domain(format!("unknown method {other:?}"))),
        }
    }
}

/// A BF₁₀ value together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BayesFactorResult {
    pub bf10: f64,
    /// `P(H₀ | data)` under unit prior odds; `None` when `bf10` is not a
    /// valid Bayes factor.
    pub posterior_null: Option<f64>,
    /// Indicator count Σy (sequential method only).
    pub y_sum: Option<u64>,
    /// Number of observations equal to 1, when known.
    pub successes: Option<u64>,
    pub n: Option<u64>,
    pub method: Method,
    /// Exact `(numerator, denominator)` of `bf10` (sequential method only).
    pub ratio: Option<(u64, u64)>,
    /// Whether the sample was put in canonical order first (sequential only).
    pub canonicalized: Option<bool>,
    /// `false` when `bf10` is non-positive or not finite.
    pub valid: bool,
}

impl BayesFactorResult {
    /// `BF₀₁ = 1 / BF₁₀`.
    pub fn bf01(&self) -> f64 {
        1.0 / self.bf10
    }

    pub(crate) fn from_value(
        bf10: f64,
        successes: Option<u64>,
        n: Option<u64>,
        method: Method,
    ) -> Self {
        let valid = bf10.is_finite() && bf10 > 0.0;
        Self {
            bf10,
            posterior_null: valid.then(|| 1.0 / (1.0 + bf10)),
            y_sum: None,
            successes,
            n,
            method,
            ratio: None,
            canonicalized: None,
            valid,
        }
    }
}

/// `r_i = |(Σ_{j≤i} x_j)/i − 0.5|` for every prefix.
///
/// Each value is computed as the correctly rounded quotient `|2c − i| / 2i`
/// of exact integers, so ties with a decimal threshold are decided exactly.
pub fn running_deviation(xs: &SampleSequence) -> DeviationSeries {
    let mut count: i64 = 0;
    let r = xs
        .values()
        .iter()
        .enumerate()
        .map(|(idx, &x)| {
            count += i64::from(x);
            let i = idx as i64 + 1;
            (2 * count - i).abs() as f64 / (2 * i) as f64
        })
        .collect();
    DeviationSeries { r }
}

/// `y_i = 1` iff `r_i < k`.
pub fn indicator_series(rs: &DeviationSeries, k: Threshold) -> IndicatorSeries {
    let y = rs
        .values()
        .iter()
        .map(|&r| u8::from(r < k.value()))
        .collect();
    IndicatorSeries { y, k }
}

/// Rule-of-succession estimate `(Σy + 1) / (n + 2)` of `P(H₀ | x)`.
pub fn posterior_null(ys: &IndicatorSeries) -> Result<f64> {
    if ys.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok((ys.sum() + 1) as f64 / (ys.len() + 2) as f64)
}

/// `BF₁₀ = (1 − p₀) / p₀` under unit prior odds.
pub fn bayes_factor_from_posterior(p0: f64) -> Result<f64> {
    if p0 > 0.0 && p0 < 1.0 {
        Ok((1.0 - p0) / p0)
    } else {
        Err(Error::DegeneratePosterior(p0))
    }
}

/// All ones first, then all zeros.
pub fn canonical_order(xs: &SampleSequence) -> SampleSequence {
    let n = xs.len() as u64;
    SampleSequence::from_counts(n, xs.successes()).expect("counts come from a valid sample")
}

/// Worksheet BF₁₀ for a sample, optionally canonicalizing its order first.
pub fn sequential_bf(xs: &SampleSequence, k: Threshold, canonicalize: bool) -> BayesFactorResult {
    let ordered;
    let xs = if canonicalize {
        ordered = canonical_order(xs);
        &ordered
    } else {
        xs
    };
    let ys = indicator_series(&running_deviation(xs), k);
    let n = ys.len() as u64;
    let y_sum = ys.sum();
    let numerator = n + 1 - y_sum;
    let denominator = y_sum + 1;
    BayesFactorResult {
        bf10: numerator as f64 / denominator as f64,
        posterior_null: Some(denominator as f64 / (n + 2) as f64),
        y_sum: Some(y_sum),
        successes: Some(xs.successes()),
        n: Some(n),
        method: Method::Sequential,
        ratio: Some((numerator, denominator)),
        canonicalized: Some(canonicalize),
        valid: true,
    }
}
