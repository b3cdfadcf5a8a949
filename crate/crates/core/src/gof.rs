//! Pearson chi-square statistic and the threshold `k` for the indicator
//! series.
//!
//! For a two-cell table with expected counts `n/2` and observed counts
//! `n(1/2 ± k)` the statistic is `4nk²`. Setting it equal to a critical
//! value `c` gives `k = sqrt(c / 4n)`.
//!
//! The default critical value 3.84 is the 5% point of χ² with one degree of
//! freedom, even though a two-cell table is sometimes described as having two.
//! The value is a parameter so either reading can be used.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_CRITICAL_VALUE: f64 = 3.84;

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTable {
    observed: Vec<f64>,
    expected: Vec<f64>,
}

impl FrequencyTable {
    pub fn new(observed: Vec<f64>, expected: Vec<f64>) -> Result<Self> {
        if observed.len() != expected.len() {
            return Err(Error::InvalidTable(format!(
                "{} observed vs {} expected cells",
                observed.len(),
                expected.len()
            )));
        }
        if observed.len() < 2 {
            return Err(Error::InvalidTable("need at least two cells".into()));
        }
        if let Some(e) = expected.iter().find(|e| !(**e > 0.0) || !e.is_finite()) {
            return Err(Error::InvalidTable(format!(
                "expected frequency {e} is not positive"
            )));
        }
        if let Some(o) = observed.iter().find(|o| !(**o >= 0.0) || !o.is_finite()) {
            return Err(Error::InvalidTable(format!(
                "observed frequency {o} is negative"
            )));
        }
        Ok(Self { observed, expected })
    }

    /// Two-cell table for a sample of size `n` whose frequency sits `k` away
    /// from one half.
    pub fn symmetric_deviation(n: f64, k: f64) -> Result<Self> {
        Self::new(vec![n * (0.5 + k), n * (0.5 - k)], vec![0.5 * n, 0.5 * n])
    }

    pub fn observed(&self) -> &[f64] {
        &self.observed
    }

    pub fn expected(&self) -> &[f64] {
        &self.expected
    }
}

/// `Σ (γ_i − np_i)² / np_i`.
pub fn pearson_chi2(t: &FrequencyTable) -> f64 {
    t.observed
        .iter()
        .zip(&t.expected)
        .map(|(o, e)| (o - e).powi(2) / e)
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSolution {
    pub n: u64,
    pub crit: f64,
    pub k_exact: f64,
    /// `k_exact` rounded up at the second decimal.
    pub k_working: f64,
}

pub fn solve_unbiased_k(n: u64, crit: f64) -> Result<ThresholdSolution> {
    if n == 0 {
        return Err(Error::InvalidCounts(
            "sample size must be at least 1".into(),
        ));
    }
    if !(crit > 0.0) || !crit.is_finite() {
        return Err(Error::Domain(format!(
            "critical value must be positive (got {crit})"
        )));
    }
    let k_exact = (crit / (4.0 * n as f64)).sqrt();
    if k_exact >= 0.5 {
        return Err(Error::ThresholdExceedsRange { n, k: k_exact });
    }
    // 1e-9 absorbs representation error, e.g. 0.1 * 100 = 10.000000000000002
    let k_working = (k_exact * 100.0 - 1e-9).ceil() / 100.0;
    if k_working >= 0.5 {
        return Err(Error::ThresholdExceedsRange { n, k: k_working });
    }
    Ok(ThresholdSolution {
        n,
        crit,
        k_exact,
        k_working,
    })
}
