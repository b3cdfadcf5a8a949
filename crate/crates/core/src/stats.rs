//! Two-sample comparison: Levene's test (mean-centered) and the pooled and
//! Welch independent-samples t-tests, all two-tailed.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeveneResult {
    pub f: f64,
    pub p: f64,
    pub df1: f64,
    pub df2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TTestRow {
    pub t: f64,
    pub df: f64,
    pub p: f64,
    pub mean_diff: f64,
    pub se: f64,
    pub ci95_lo: f64,
    pub ci95_hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TTestReport {
    pub levene: LeveneResult,
    /// Equal variances assumed; `df = n₁ + n₂ − 2`.
    pub pooled: TTestRow,
    /// Welch–Satterthwaite.
    pub welch: TTestRow,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

fn check_size(xs: &[f64]) -> Result<()> {
    if xs.len() < 2 {
        return Err(Error::GroupTooSmall(xs.len()));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("samples must be finite".into()));
    }
    Ok(())
}

/// Levene's test with absolute deviations from the group means.
pub fn levene_test(a: &[f64], b: &[f64]) -> Result<LeveneResult> {
    check_size(a)?;
    check_size(b)?;
    let dev = |xs: &[f64]| {
        let m = mean(xs);
        xs.iter().map(|x| (x - m).abs()).collect::<Vec<_>>()
    };
    let (za, zb) = (dev(a), dev(b));
    let (ma, mb) = (mean(&za), mean(&zb));
    let total = (za.len() + zb.len()) as f64;
    let grand = (za.iter().sum::<f64>() + zb.iter().sum::<f64>()) / total;
    let between = za.len() as f64 * (ma - grand).powi(2) + zb.len() as f64 * (mb - grand).powi(2);
    let within = za.iter().map(|z| (z - ma).powi(2)).sum::<f64>()
        + zb.iter().map(|z| (z - mb).powi(2)).sum::<f64>();
    let df1 = 1.0;
    let df2 = total - 2.0;
    if within == 0.0 {
        if between == 0.0 {
            return Ok(LeveneResult {
                f: 0.0,
                p: 1.0,
                df1,
                df2,
            });
        }
        return Err(Error::DegenerateDeviations);
    }
    let f = (between / df1) / (within / df2);
    let p = special::f_upper_tail(f, df1, df2)?;
    Ok(LeveneResult { f, p, df1, df2 })
}

fn t_row(mean_diff: f64, se: f64, df: f64) -> Result<TTestRow> {
    let t = mean_diff / se;
    let p = special::student_t_two_tailed(t, df)?;
    let q = special::student_t_quantile(0.975, df)?;
    Ok(TTestRow {
        t,
        df,
        p,
        mean_diff,
        se,
        ci95_lo: mean_diff - q * se,
        ci95_hi: mean_diff + q * se,
    })
}

/// Levene's test plus pooled and Welch t-tests of `mean(a) − mean(b)`.
pub fn two_sample_ttest(a: &[f64], b: &[f64]) -> Result<TTestReport> {
    check_size(a)?;
    check_size(b)?;
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let (v1, v2) = (sample_variance(a), sample_variance(b));
    if v1 == 0.0 && v2 == 0.0 {
        return Err(Error::DegenerateSamples);
    }
    let diff = mean(a) - mean(b);

    let pooled_df = n1 + n2 - 2.0;
    let pooled_var = ((n1 - 1.0) * v1 + (n2 - 1.0) * v2) / pooled_df;
    let pooled = t_row(diff, (pooled_var * (1.0 / n1 + 1.0 / n2)).sqrt(), pooled_df)?;

    let (w1, w2) = (v1 / n1, v2 / n2);
    let welch_df = (w1 + w2).powi(2) / (w1 * w1 / (n1 - 1.0) + w2 * w2 / (n2 - 1.0));
    let welch = t_row(diff, (w1 + w2).sqrt(), welch_df)?;

    Ok(TTestReport {
        levene: levene_test(a, b)?,
        pooled,
        welch,
    })
}
