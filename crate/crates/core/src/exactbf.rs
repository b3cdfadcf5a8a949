//! Exact binomial-test Bayes factor against a point null `p = p₀`.
//!
//! Under H₁ the success probability has a uniform prior restricted to the
//! side of `p₀` named by the alternative (and renormalized). The marginal
//! likelihood is a beta integral, so
//!
//! ```text
//! greater:   m₁ = B(s+1, n−s+1) · (1 − I_{p₀}(s+1, n−s+1)) / (1 − p₀)
//! less:      m₁ = B(s+1, n−s+1) · I_{p₀}(s+1, n−s+1) / p₀
//! two-sided: m₁ = B(s+1, n−s+1)
//! m₀ = p₀^s (1 − p₀)^(n−s)
//! ```
//!
//! Everything is evaluated in log space.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqbf::{BayesFactorResult, Method};
use crate::special;

pub use crate::special::ln_reg_inc_beta as log_reg_incomplete_beta;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinomialData {
    pub successes: u64,
    pub n: u64,
    pub test_value: f64,
}

impl BinomialData {
    pub fn new(successes: u64, n: u64, test_value: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidCounts("n must be at least 1".into()));
        }
        if successes > n {
            return Err(Error::InvalidCounts(format!(
                "s = {successes} exceeds n = {n}"
            )));
        }
        if !(test_value > 0.0 && test_value < 1.0) {
            return Err(Error::InvalidCounts(format!(
                "test value {test_value} must lie in (0, 1)"
            )));
        }
        Ok(Self {
            successes,
            n,
            test_value,
        })
    }

    pub fn half(successes: u64, n: u64) -> Result<Self> {
        Self::new(successes, n, 0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alternative {
    #[default]
    Greater,
    Less,
    TwoSided,
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Alternative::Greater => "greater",
            Alternative::Less => "less",
            Alternative::TwoSided => "two-sided",
        })
    }
}

impl FromStr for Alternative {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greater" => Ok(Alternative::Greater),
            "less" => Ok(Alternative::Less),
            "two-sided" | "two_sided" => Ok(Alternative::TwoSided),
            other => Err(Error::Domain(format!(
                "unknown alternative {other:?} (expected greater, less or two-sided)"
            ))),
        }
    }
}

/// How a canonically ordered sample is handed to the reference computation.
///
/// Tabulated reference values (n = 200, and the 0.57 sample-size scan) agree to
/// every printed digit with the exact Bayes factor of the sample *minus its
/// first observation*, as happens when the first data row of a one-column
/// file is read as the column name. `HeaderRowDropped` reproduces that.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    #[default]
    Exact,
    HeaderRowDropped,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Exact => "exact",
            Convention::HeaderRowDropped => "header-dropped",
        })
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Convention::Exact),
            "header-dropped" => Ok(Convention::HeaderRowDropped),
            other => Err(Error::Domain(format!(
                "unknown convention {other:?} (expected exact or header-dropped)"
            ))),
        }
    }
}

impl Convention {
    /// Counts actually seen by the reference computation for a canonically
    /// ordered sample (ones first).
    pub fn effective(self, data: BinomialData) -> Result<BinomialData> {
        match self {
            Convention::Exact => Ok(data),
            Convention::HeaderRowDropped => {
                if data.n < 2 {
                    return Err(Error::InvalidCounts(
                        "need at least two observations when the first row is dropped".into(),
                    ));
                }
                let s = data.successes.saturating_sub(1);
                BinomialData::new(s, data.n - 1, data.test_value)
            }
        }
    }
}

/// `ln m₁` for the given alternative.
pub fn ln_marginal_alternative(data: BinomialData, alternative: Alternative) -> Result<f64> {
    let s = data.successes as f64;
    let f = (data.n - data.successes) as f64;
    let p0 = data.test_value;
    let ln_b = special::ln_beta(s + 1.0, f + 1.0);
    Ok(match alternative {
        Alternative::TwoSided => ln_b,
        Alternative::Greater => {
            ln_b + special::ln_reg_inc_beta_upper(p0, s + 1.0, f + 1.0)? - (-p0).ln_1p()
        }
        Alternative::Less => ln_b + special::ln_reg_inc_beta(p0, s + 1.0, f + 1.0)? - p0.ln(),
    })
}

/// `ln m₀ = s ln p₀ + (n − s) ln(1 − p₀)`.
pub fn ln_marginal_null(data: BinomialData) -> f64 {
    let s = data.successes as f64;
    let f = (data.n - data.successes) as f64;
    s * data.test_value.ln() + f * (-data.test_value).ln_1p()
}

pub fn ln_binomial_bf10(data: BinomialData, alternative: Alternative) -> Result<f64> {
    Ok(ln_marginal_alternative(data, alternative)? - ln_marginal_null(data))
}

pub fn binomial_bf10(data: BinomialData, alternative: Alternative) -> Result<BayesFactorResult> {
    let bf10 = ln_binomial_bf10(data, alternative)?.exp();
    Ok(BayesFactorResult::from_value(
        bf10,
        Some(data.successes),
        Some(data.n),
        Method::Exact,
    ))
}

/// Reference BF₁₀ for a canonically ordered sample under a convention. The
/// result reports the original `(s, n)`.
pub fn reference_bf10(
    data: BinomialData,
    alternative: Alternative,
    convention: Convention,
) -> Result<BayesFactorResult> {
    let seen = convention.effective(data)?;
    let mut result = binomial_bf10(seen, alternative)?;
    result.successes = Some(data.successes);
    result.n = Some(data.n);
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: u64,
    pub s: u64,
    pub bf10: f64,
}

/// `round(proportion · n)` with halves rounded up.
///
/// The product is snapped to 9 decimals first so that e.g. `0.57 · 350`,
/// which is `199.49999999999997` in binary, rounds to 200.
pub fn successes_for(proportion: f64, n: u64) -> u64 {
    let v = proportion * n as f64;
    let snapped = (v * 1e9).round() / 1e9;
    (snapped + 0.5).floor().max(0.0) as u64
}

pub fn bf_scan(
    proportion: f64,
    ns: &[u64],
    alternative: Alternative,
    convention: Convention,
) -> Result<Vec<ScanRow>> {
    if !(proportion > 0.0 && proportion < 1.0) {
        return Err(Error::Domain(format!(
            "proportion {proportion} must lie in (0, 1)"
        )));
    }
    ns.iter()
        .map(|&n| {
            let s = successes_for(proportion, n).min(n);
            let data = BinomialData::half(s, n)?;
            let bf10 = reference_bf10(data, alternative, convention)?.bf10;
            Ok(ScanRow { n, s, bf10 })
        })
        .collect()
}
