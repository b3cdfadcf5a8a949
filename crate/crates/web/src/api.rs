use std::sync::OnceLock;

use seqbf::calib::{
    apply_calibration, build_calibration, bundled_points, fit_curves, CalibrationModel, FitRow,
    DEFAULT_EXCLUSION_BELOW, DEFAULT_SEGMENTS,
};
use seqbf::exactbf::{reference_bf10, Alternative, BinomialData, Convention};
use seqbf::seqbf::{
    canonical_order, indicator_series, running_deviation, sequential_bf, SampleSequence, Threshold,
};
use serde::Serialize;

type ApiResult = Result<String, String>;

/// Largest sample accepted by the curve and trace views.
pub const MAX_N: u64 = 5000;

fn to_json<T: Serialize>(v: &T) -> ApiResult {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

fn model() -> Result<&'static CalibrationModel, String> {
    static MODEL: OnceLock<Result<CalibrationModel, String>> = OnceLock::new();
    MODEL
        .get_or_init(|| {
            build_calibration(
                &bundled_points(),
                &DEFAULT_SEGMENTS,
                DEFAULT_EXCLUSION_BELOW,
            )
            .map_err(|e| e.to_string())
        })
        .as_ref()
        .map_err(Clone::clone)
}

#[derive(Serialize)]
struct Curve {
    n: u64,
    k: f64,
    s: Vec<u64>,
    sequential: Vec<f64>,
    /// `None` where the exact value is unavailable.
    exact: Vec<Option<f64>>,
}

pub fn bf_curve(n: u64, k: f64, alternative: &str, convention: &str) -> ApiResult {
    if n == 0 || n > MAX_N {
        return Err(format!("n must lie in 1..={MAX_N}"));
    }
    let k = Threshold::new(k).map_err(|e| e.to_string())?;
    let alt: Alternative = alternative
        .parse()
        .map_err(|e: seqbf::Error| e.to_string())?;
    let conv: Convention = convention
        .parse()
        .map_err(|e: seqbf::Error| e.to_string())?;
    let mut curve = Curve {
        n,
        k: k.value(),
        s: Vec::new(),
        sequential: Vec::new(),
        exact: Vec::new(),
    };
    for s in 0..=n {
        let xs = SampleSequence::from_counts(n, s).map_err(|e| e.to_string())?;
        curve.s.push(s);
        curve.sequential.push(sequential_bf(&xs, k, true).bf10);
        let data = BinomialData::half(s, n).map_err(|e| e.to_string())?;
        curve
            .exact
            .push(reference_bf10(data, alt, conv).ok().map(|r| r.bf10));
    }
    to_json(&curve)
}

fn parse_samples(text: &str) -> Result<SampleSequence, String> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        for t in line.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match t {
                "0" => values.push(0),
                "1" => values.push(1),
                _ => return Err(format!("non-binary observation at line {}", i + 1)),
            }
        }
    }
    if values.len() as u64 > MAX_N {
        return Err(format!("at most {MAX_N} observations"));
    }
    SampleSequence::new(values).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Trace {
    n: usize,
    successes: u64,
    deviation: Vec<f64>,
    indicator: Vec<u8>,
    y_sum: u64,
    bf10: f64,
}

pub fn deviation_trace(samples: &str, k: f64, canonical: bool) -> ApiResult {
    let xs = parse_samples(samples)?;
    let k = Threshold::new(k).map_err(|e| e.to_string())?;
    let ordered = if canonical {
        canonical_order(&xs)
    } else {
        xs.clone()
    };
    let rs = running_deviation(&ordered);
    let ys = indicator_series(&rs, k);
    let r = sequential_bf(&xs, k, canonical);
    to_json(&Trace {
        n: xs.len(),
        successes: xs.successes(),
        deviation: rs.values().to_vec(),
        indicator: ys.values().to_vec(),
        y_sum: ys.sum(),
        bf10: r.bf10,
    })
}

#[derive(Serialize)]
struct Corrected {
    frequency: f64,
    value: f64,
    segment: usize,
    bf10: f64,
    valid: bool,
}

pub fn correct(frequency: f64, value: f64) -> ApiResult {
    let m = model()?;
    let segment = m.segment_index(frequency).map_err(|e| e.to_string())?;
    let r = apply_calibration(frequency, value, m).map_err(|e| e.to_string())?;
    to_json(&Corrected {
        frequency,
        value,
        segment,
        bf10: r.bf10,
        valid: r.valid,
    })
}

#[derive(Serialize)]
struct Curves {
    segments: Vec<(f64, f64)>,
    rows: Vec<FitRow>,
}

pub fn calibration_curves(step: f64) -> ApiResult {
    if step.is_nan() || step < 1e-4 {
        return Err("step must be at least 0.0001".into());
    }
    let m = model()?;
    let rows = fit_curves(m, step, &bundled_points()).map_err(|e| e.to_string())?;
    to_json(&Curves {
        segments: m.segments.iter().map(|s| s.domain).collect(),
        rows,
    })
}
