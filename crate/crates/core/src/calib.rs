//! Piecewise cubic calibration of worksheet Bayes factors onto the
//! reference scale.
//!
//! For each frequency segment two cubics are fitted by least squares: the
//! source fit `f_E(x) = a₁x³ + a₂x² + a₃x + a₄` through the worksheet values
//! and the reference fit `f_J(x) = b₁x³ + b₂x² + b₃x + b₄` through the
//! reference values. Eliminating `x³` between them maps a source value `y`
//! observed at frequency `x` to
//!
//! ```text
//! (b₁/a₁)·y + ((a₁b₂ − a₂b₁)/a₁)·x² + ((a₁b₃ − a₃b₁)/a₁)·x + (a₁b₄ − a₄b₁)/a₁
//! ```
//!
//! which equals `f_J(x) + (b₁/a₁)(y − f_E(x))`.

use std::io::Read;

use nalgebra::{DMatrix, DVector, Matrix4, Vector4};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::seqbf::{BayesFactorResult, Method};

pub const MODEL_VERSION: u32 = 1;
pub const DEFAULT_EXCLUSION_BELOW: f64 = 0.15;
pub const DEFAULT_SEGMENTS: [(f64, f64); 2] = [(0.15, 0.45), (0.45, 0.55)];

/// Above this condition number of the normal matrix the fit is redone with
/// a QR factorization of the design matrix.
const NORMAL_EQUATIONS_MAX_CONDITION: f64 = 1e12;

/// `c3·x³ + c2·x² + c1·x + c0` fitted over `domain`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicFit {
    /// `[c3, c2, c1, c0]`
    pub coeffs: [f64; 4],
    pub domain: (f64, f64),
    pub r2: f64,
}

impl CubicFit {
    pub fn eval(&self, x: f64) -> f64 {
        let [c3, c2, c1, c0] = self.coeffs;
        ((c3 * x + c2) * x + c1) * x + c0
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationPoint {
    pub frequency: f64,
    pub source_bf: f64,
    pub reference_bf: f64,
}

/// Ordinary least-squares cubic through `(x, y)` points.
///
/// Points are sorted before accumulation so the coefficients do not depend
/// on input order.
pub fn fit_cubic(points: &[(f64, f64)]) -> Result<CubicFit> {
    let mut pts: Vec<(f64, f64)> = points.to_vec();
    if pts.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::UnderdeterminedFit("non-finite point".into()));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut distinct = pts.iter().map(|p| p.0).collect::<Vec<_>>();
    distinct.dedup();
    if distinct.len() < 4 {
        return Err(Error::UnderdeterminedFit(format!(
            "need at least 4 distinct x values, got {}",
            distinct.len()
        )));
    }

    let coeffs = solve_normal_equations(&pts).unwrap_or_else(|| solve_qr(&pts));

    let fit = CubicFit {
        coeffs,
        domain: (distinct[0], distinct[distinct.len() - 1]),
        r2: 0.0,
    };
    let mean = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - mean).powi(2)).sum();
    let ss_res: f64 = pts.iter().map(|p| (p.1 - fit.eval(p.0)).powi(2)).sum();
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    Ok(CubicFit { r2, ..fit })
}

fn design_row(x: f64) -> [f64; 4] {
    [x * x * x, x * x, x, 1.0]
}

fn solve_normal_equations(pts: &[(f64, f64)]) -> Option<[f64; 4]> {
    let mut gram = Matrix4::<f64>::zeros();
    let mut rhs = Vector4::<f64>::zeros();
    for &(x, y) in pts {
        let row = Vector4::from(design_row(x));
        gram += row * row.transpose();
        rhs += row * y;
    }
    let sv = gram.singular_values();
    let cond = sv.max() / sv.min();
    if !(cond <= NORMAL_EQUATIONS_MAX_CONDITION) {
        return None;
    }
    let sol = gram.cholesky()?.solve(&rhs);
    Some([sol[0], sol[1], sol[2], sol[3]])
}

fn solve_qr(pts: &[(f64, f64)]) -> [f64; 4] {
    // center and scale x so the QR solve sees a well-conditioned basis,
    // then expand back to monomial coefficients
    let lo = pts.first().map(|p| p.0).unwrap_or(0.0);
    let hi = pts.last().map(|p| p.0).unwrap_or(1.0);
    let mid = 0.5 * (lo + hi);
    let half = (0.5 * (hi - lo)).max(f64::MIN_POSITIVE);
    let design = DMatrix::from_fn(pts.len(), 4, |i, j| {
        let t = (pts[i].0 - mid) / half;
        t.powi(3 - j as i32)
    });
    let y = DVector::from_iterator(pts.len(), pts.iter().map(|p| p.1));
    let qr = design.qr();
    let qty = qr.q().transpose() * y;
    let r = qr.r();
    let g = r
        .solve_upper_triangular(&qty)
        .expect("design has full column rank with 4 distinct x");
    // y = g0 t³ + g1 t² + g2 t + g3 with t = (x - m)/h
    let (g0, g1, g2, g3) = (g[0], g[1], g[2], g[3]);
    let (m, h) = (mid, half);
    let c3 = g0 / h.powi(3);
    let c2 = -3.0 * g0 * m / h.powi(3) + g1 / (h * h);
    let c1 = 3.0 * g0 * m * m / h.powi(3) - 2.0 * g1 * m / (h * h) + g2 / h;
    let c0 = -g0 * m.powi(3) / h.powi(3) + g1 * m * m / (h * h) - g2 * m / h + g3;
    [c3, c2, c1, c0]
}

/// Map a source value `y` at frequency `x` onto the reference scale.
pub fn correct_value(x: f64, y: f64, source: &CubicFit, reference: &CubicFit) -> Result<f64> {
    let [a1, a2, a3, a4] = source.coeffs;
    let [b1, b2, b3, b4] = reference.coeffs;
    if a1 == 0.0 {
        return Err(Error::NonInvertibleFit);
    }
    Ok((b1 / a1) * y
        + ((a1 * b2 - a2 * b1) / a1) * x * x
        + ((a1 * b3 - a3 * b1) / a1) * x
        + (a1 * b4 - a4 * b1) / a1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub domain: (f64, f64),
    pub source: CubicFit,
    pub reference: CubicFit,
}

/// Ordered, contiguous segments plus the frequency below which no
/// correction is attempted.
///
/// The first segment is closed on both ends; every later segment is
/// open on the left, so a shared boundary belongs to the earlier segment.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationModel {
    pub segments: Vec<Segment>,
    pub exclusion_below: f64,
}

fn in_segment(index: usize, (lo, hi): (f64, f64), x: f64) -> bool {
    let left = if index == 0 { x >= lo } else { x > lo };
    left && x <= hi
}

fn validate_bounds(bounds: &[(f64, f64)]) -> Result<()> {
    if bounds.is_empty() {
        return Err(Error::NoSegments);
    }
    for (i, &(lo, hi)) in bounds.iter().enumerate() {
        if !(lo < hi) {
            return Err(Error::InvalidSegments(format!(
                "segment {lo}-{hi} is empty"
            )));
        }
        if i > 0 && bounds[i - 1].1 != lo {
            return Err(Error::InvalidSegments(format!(
                "segments {}-{} and {lo}-{hi} are not contiguous",
                bounds[i - 1].0,
                bounds[i - 1].1
            )));
        }
    }
    Ok(())
}

impl CalibrationModel {
    /// Index of the segment owning frequency `x`.
    pub fn segment_index(&self, x: f64) -> Result<usize> {
        if self.segments.is_empty() {
            return Err(Error::NoSegments);
        }
        if !(x >= self.exclusion_below) {
            return Err(Error::OutsideDomain(x));
        }
        self.segments
            .iter()
            .enumerate()
            .position(|(i, s)| in_segment(i, s.domain, x))
            .ok_or(Error::OutsideDomain(x))
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = ModelDoc {
            version: MODEL_VERSION,
            exclusion_below: number(self.exclusion_below)?,
            segments: self
                .segments
                .iter()
                .map(|s| {
                    Ok(SegmentDoc {
                        domain: [number(s.domain.0)?, number(s.domain.1)?],
                        source: FitDoc::from_fit(&s.source)?,
                        reference: FitDoc::from_fit(&s.reference)?,
                    })
                })
                .collect::<Result<_>>()?,
        };
        serde_json::to_string_pretty(&doc).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocIn =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if doc.version != MODEL_VERSION {
            return Err(Error::Format(format!(
                "unsupported model version {} (expected {MODEL_VERSION})",
                doc.version
            )));
        }
        let segments: Vec<Segment> = doc
            .segments
            .into_iter()
            .map(|s| {
                let domain = (s.domain[0], s.domain[1]);
                Segment {
                    domain,
                    source: s.source.into_fit(domain),
                    reference: s.reference.into_fit(domain),
                }
            })
            .collect();
        if !segments.is_empty() {
            let bounds: Vec<_> = segments.iter().map(|s| s.domain).collect();
            validate_bounds(&bounds)?;
        }
        Ok(Self {
            segments,
            exclusion_below: doc.exclusion_below,
        })
    }
}

/// Drop points below `exclusion_below`, then fit source and reference cubics
/// in every segment.
pub fn build_calibration(
    points: &[CalibrationPoint],
    bounds: &[(f64, f64)],
    exclusion_below: f64,
) -> Result<CalibrationModel> {
    validate_bounds(bounds)?;
    let kept: Vec<&CalibrationPoint> = points
        .iter()
        .filter(|p| p.frequency >= exclusion_below)
        .collect();
    let segments = bounds
        .iter()
        .enumerate()
        .map(|(i, &domain)| {
            let members: Vec<&CalibrationPoint> = kept
                .iter()
                .copied()
                .filter(|p| in_segment(i, domain, p.frequency))
                .collect();
            let name = |e: Error| match e {
                Error::UnderdeterminedFit(msg) => {
                    Error::UnderdeterminedFit(format!("segment {}-{}: {msg}", domain.0, domain.1))
                }
                other => other,
            };
            let src: Vec<_> = members.iter().map(|p| (p.frequency, p.source_bf)).collect();
            let refr: Vec<_> = members
                .iter()
                .map(|p| (p.frequency, p.reference_bf))
                .collect();
            let mut source = fit_cubic(&src).map_err(name)?;
            let mut reference = fit_cubic(&refr).map_err(name)?;
            source.domain = domain;
            reference.domain = domain;
            Ok(Segment {
                domain,
                source,
                reference,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CalibrationModel {
        segments,
        exclusion_below,
    })
}

/// Corrected BF₁₀ for source value `y` at frequency `x`.
///
/// Negative or zero corrected values are returned as computed with
/// `valid = false`.
pub fn apply_calibration(x: f64, y: f64, model: &CalibrationModel) -> Result<BayesFactorResult> {
    let seg = &model.segments[model.segment_index(x)?];
    let corrected = correct_value(x, y, &seg.source, &seg.reference)?;
    Ok(BayesFactorResult::from_value(
        corrected,
        None,
        None,
        Method::Corrected,
    ))
}

/// Read calibration points from CSV with header
/// `frequency,source_bf,reference_bf`. Lines starting with `#` are skipped.
pub fn read_points<R: Read>(reader: R) -> Result<Vec<CalibrationPoint>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Format(e.to_string()))?
        .clone();
    let expected = ["frequency", "source_bf", "reference_bf"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::Format(format!(
            "expected header {}, got {}",
            expected.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    rdr.deserialize()
        .map(|r| r.map_err(|e: csv::Error| Error::Format(e.to_string())))
        .collect()
}

/// The bundled n = 200 reference table.
pub fn bundled_points() -> Vec<CalibrationPoint> {
    read_points(crate::N200_CSV.as_bytes()).expect("bundled table parses")
}

/// One row of fitted-curve output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitRow {
    pub segment: usize,
    pub x: f64,
    pub source_fit: f64,
    pub reference_fit: f64,
    /// Observed values when this row is a data point rather than a grid point.
    pub source_observed: Option<f64>,
    pub reference_observed: Option<f64>,
}

/// Fitted curves of every segment on a grid of spacing `step`, followed by
/// the observed points of that segment (with their fitted values).
pub fn fit_curves(
    model: &CalibrationModel,
    step: f64,
    points: &[CalibrationPoint],
) -> Result<Vec<FitRow>> {
    if model.segments.is_empty() {
        return Err(Error::NoSegments);
    }
    if !(step > 0.0) {
        return Err(Error::Domain(format!(
            "grid step must be positive (got {step})"
        )));
    }
    let mut rows = Vec::new();
    for (i, seg) in model.segments.iter().enumerate() {
        let (lo, hi) = seg.domain;
        let count = ((hi - lo) / step + 1e-9).floor() as usize;
        for j in 0..=count {
            let x = lo + j as f64 * step;
            rows.push(FitRow {
                segment: i,
                x,
                source_fit: seg.source.eval(x),
                reference_fit: seg.reference.eval(x),
                source_observed: None,
                reference_observed: None,
            });
        }
        for p in points.iter().filter(|p| {
            p.frequency >= model.exclusion_below && in_segment(i, seg.domain, p.frequency)
        }) {
            rows.push(FitRow {
                segment: i,
                x: p.frequency,
                source_fit: seg.source.eval(p.frequency),
                reference_fit: seg.reference.eval(p.frequency),
                source_observed: Some(p.source_bf),
                reference_observed: Some(p.reference_bf),
            });
        }
    }
    Ok(rows)
}

// JSON document. Numbers are written with 17 significant digits.

fn number(v: f64) -> Result<Box<RawValue>> {
    if !v.is_finite() {
        return Err(Error::Format(format!(
            "cannot serialize non-finite number {v}"
        )));
    }
    RawValue::from_string(format!("{v:.16e}")).map_err(|e| Error::Format(e.to_string()))
}

#[derive(Serialize)]
struct ModelDoc {
    version: u32,
    exclusion_below: Box<RawValue>,
    segments: Vec<SegmentDoc>,
}

#[derive(Serialize)]
struct SegmentDoc {
    domain: [Box<RawValue>; 2],
    source: FitDoc,
    reference: FitDoc,
}

#[derive(Serialize)]
struct FitDoc {
    coeffs: Vec<Box<RawValue>>,
    r2: Box<RawValue>,
}

impl FitDoc {
    fn from_fit(fit: &CubicFit) -> Result<Self> {
        Ok(Self {
            coeffs: fit
                .coeffs
                .iter()
                .map(|&c| number(c))
                .collect::<Result<_>>()?,
            r2: number(fit.r2)?,
        })
    }
}

#[derive(Deserialize)]
struct ModelDocIn {
    version: u32,
    exclusion_below: f64,
    segments: Vec<SegmentDocIn>,
}

#[derive(Deserialize)]
struct SegmentDocIn {
    domain: [f64; 2],
    source: FitDocIn,
    reference: FitDocIn,
}

#[derive(Deserialize)]
struct FitDocIn {
    coeffs: [f64; 4],
    r2: f64,
}

impl FitDocIn {
    fn into_fit(self, domain: (f64, f64)) -> CubicFit {
        CubicFit {
            coeffs: self.coeffs,
            domain,
            r2: self.r2,
        }
    }
}
