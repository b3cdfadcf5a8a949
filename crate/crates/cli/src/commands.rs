//! One function per subcommand; each returns a [`Document`].

use std::fs;
use std::path::Path;

use seqbf::calib::{
    self, apply_calibration, build_calibration, fit_curves, CalibrationModel, CalibrationPoint,
    DEFAULT_EXCLUSION_BELOW, DEFAULT_SEGMENTS,
};
use seqbf::exactbf::{bf_scan, reference_bf10, BinomialData};
use seqbf::seqbf::{sequential_bf, SampleSequence, Threshold};
use seqbf::stats::{two_sample_ttest, TTestRow};
use seqbf::Error;

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::input::{parse_number_file, parse_sample_file, parse_segments, parse_sizes};
use crate::output::{Cell, Document};

pub const STRONG_EVIDENCE: &str = "strong evidence — no further verification required";

/// Bayes factors above this are flagged in scans.
pub const RELIABLE_EVIDENCE: f64 = 3.0;

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn threshold(arg: &ThresholdArgs, n: u64) -> CliResult<Threshold> {
    match arg.k {
        KArg::Fixed(k) => Ok(Threshold::new(k)?),
        KArg::Auto => Ok(Threshold::default_for(n)),
    }
}

fn read_model(path: &Path) -> CliResult<CalibrationModel> {
    let text = fs::read_to_string(path)
        .map_err(|e| validation(format!("cannot read {}: {e}", path.display())))?;
    CalibrationModel::from_json(&text).map_err(|e| validation(format!("{}: {e}", path.display())))
}

fn read_points(path: Option<&Path>) -> CliResult<Vec<CalibrationPoint>> {
    match path {
        None => Ok(calib::bundled_points()),
        Some(p) => {
            let file = fs::File::open(p)
                .map_err(|e| validation(format!("cannot read {}: {e}", p.display())))?;
            calib::read_points(file).map_err(|e| validation(format!("{}: {e}", p.display())))
        }
    }
}

/// The decision rule: more than 325 observations and a success share above 57%.
pub fn strong_evidence(n: u64, s: u64) -> bool {
    n > 325 && 100 * s > 57 * n
}

pub fn seqbf(args: &SeqbfArgs) -> CliResult<Document> {
    let xs = parse_sample_file(&args.input)?;
    let k = threshold(&args.threshold, xs.len() as u64)?;
    let r = sequential_bf(&xs, k, !args.threshold.no_canonical);
    let (num, den) = r.ratio.expect("sequential result carries its ratio");
    let mut doc = Document::new(&[
        "n",
        "s",
        "frequency",
        "k",
        "y_sum",
        "bf10",
        "bf10_ratio",
        "bf01",
        "posterior_null",
        "canonical",
    ]);
    doc.push(vec![
        Cell::Int(xs.len() as u64),
        Cell::Int(xs.successes()),
        Cell::Num(xs.frequency()),
        Cell::Num(k.value()),
        Cell::Int(r.y_sum.unwrap_or(0)),
        Cell::Num(r.bf10),
        Cell::text(format!("{num}/{den}")),
        Cell::Num(r.bf01()),
        Cell::opt_num(r.posterior_null),
        Cell::Bool(!args.threshold.no_canonical),
    ]);
    Ok(doc)
}

pub fn exactbf(args: &ExactbfArgs) -> CliResult<Document> {
    let data = BinomialData::new(args.s, args.n, args.test_value)?;
    let r = reference_bf10(data, args.alt, args.convention)?;
    let mut doc = Document::new(&[
        "n",
        "s",
        "test_value",
        "alternative",
        "convention",
        "bf10",
        "bf01",
        "posterior_null",
    ]);
    doc.push(vec![
        Cell::Int(args.n),
        Cell::Int(args.s),
        Cell::Num(args.test_value),
        Cell::text(args.alt.to_string()),
        Cell::text(args.convention.to_string()),
        Cell::Num(r.bf10),
        Cell::Num(r.bf01()),
        Cell::opt_num(r.posterior_null),
    ]);
    Ok(doc)
}

fn model_table(model: &CalibrationModel, points: &[CalibrationPoint]) -> Document {
    let mut doc = Document::new(&[
        "segment", "lo", "hi", "curve", "points", "c3", "c2", "c1", "c0", "r2",
    ]);
    for (i, seg) in model.segments.iter().enumerate() {
        let count = points
            .iter()
            .filter(|p| model.segment_index(p.frequency) == Ok(i))
            .count() as u64;
        for (name, fit) in [("source", &seg.source), ("reference", &seg.reference)] {
            let mut row = vec![
                Cell::Int(i as u64),
                Cell::Num(seg.domain.0),
                Cell::Num(seg.domain.1),
                Cell::text(name),
                Cell::Int(count),
            ];
            row.extend(fit.coeffs.iter().map(|&c| Cell::Num(c)));
            row.push(Cell::Num(fit.r2));
            doc.push(row);
        }
    }
    doc
}

pub fn calibrate(args: &CalibrateArgs) -> CliResult<Document> {
    let bounds = parse_segments(&args.segments)?;
    let points = read_points(args.data.as_deref())?;
    let model = build_calibration(&points, &bounds, args.exclude_below)?;
    fs::write(&args.out, model.to_json()?)
        .map_err(|e| validation(format!("cannot write {}: {e}", args.out.display())))?;
    Ok(model_table(&model, &points))
}

pub fn correct(args: &CorrectArgs) -> CliResult<Document> {
    let model = read_model(&args.model)?;
    let segment = model.segment_index(args.freq)?;
    let r = apply_calibration(args.freq, args.value, &model)?;
    let mut doc = Document::new(&["frequency", "source_bf", "segment", "bf10", "valid"]);
    doc.push(vec![
        Cell::Num(args.freq),
        Cell::Num(args.value),
        Cell::Int(segment as u64),
        Cell::Num(r.bf10),
        Cell::Bool(r.valid),
    ]);
    Ok(doc)
}

pub fn scan(args: &ScanArgs) -> CliResult<Document> {
    let ns = parse_sizes(&args.n)?;
    let rows = bf_scan(args.proportion, &ns, args.alt, args.convention)?;
    let mut doc = Document::new(&["n", "s", "bf10", "bf01", "above_3"]);
    for r in rows {
        doc.push(vec![
            Cell::Int(r.n),
            Cell::Int(r.s),
            Cell::Num(r.bf10),
            Cell::Num(1.0 / r.bf10),
            Cell::Bool(r.bf10 > RELIABLE_EVIDENCE),
        ]);
    }
    Ok(doc)
}

pub fn ttest(args: &TtestArgs) -> CliResult<Document> {
    let a = parse_number_file(&args.a)?;
    let b = parse_number_file(&args.b)?;
    let r = two_sample_ttest(&a, &b)?;
    let mut doc = Document::new(&[
        "test",
        "statistic",
        "df",
        "df2",
        "p",
        "mean_diff",
        "se",
        "ci95_lo",
        "ci95_hi",
    ]);
    doc.push(vec![
        Cell::text("levene"),
        Cell::Num(r.levene.f),
        Cell::Num(r.levene.df1),
        Cell::Num(r.levene.df2),
        Cell::Num(r.levene.p),
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
    ]);
    for (name, t) in [("pooled", &r.pooled), ("welch", &r.welch)] {
        let TTestRow {
            t,
            df,
            p,
            mean_diff,
            se,
            ci95_lo,
            ci95_hi,
        } = *t;
        doc.push(vec![
            Cell::text(name),
            Cell::Num(t),
            Cell::Num(df),
            Cell::Empty,
            Cell::Num(p),
            Cell::Num(mean_diff),
            Cell::Num(se),
            Cell::Num(ci95_lo),
            Cell::Num(ci95_hi),
        ]);
    }
    Ok(doc)
}

/// One report row for an already-parsed sample.
pub fn report_row(
    xs: &SampleSequence,
    args: &ReportArgs,
    model: Option<&CalibrationModel>,
) -> CliResult<Vec<Cell>> {
    let n = xs.len() as u64;
    let s = xs.successes();
    let x = xs.frequency();
    let k = threshold(&args.threshold, n)?;
    let seq = sequential_bf(xs, k, !args.threshold.no_canonical);
    let exact = match reference_bf10(BinomialData::half(s, n)?, args.alt, args.convention) {
        Ok(r) => Cell::Num(r.bf10),
        // header-dropped evaluation needs at least two observations
        Err(Error::InvalidCounts(_)) => Cell::NotAvailable,
        Err(e) => return Err(e.into()),
    };
    let mut row = vec![
        Cell::Int(n),
        Cell::Int(s),
        Cell::Num(x),
        Cell::Num(k.value()),
        Cell::Num(seq.bf10),
        exact,
    ];
    if let Some(model) = model {
        match apply_calibration(x, seq.bf10, model) {
            Ok(r) => row.extend([Cell::Num(r.bf10), Cell::Bool(r.valid)]),
            Err(Error::OutsideDomain(_)) => row.extend([Cell::NotAvailable, Cell::NotAvailable]),
            Err(e) => return Err(e.into()),
        }
    }
    row.push(Cell::text(if strong_evidence(n, s) {
        STRONG_EVIDENCE
    } else {
        ""
    }));
    Ok(row)
}

pub fn report(args: &ReportArgs) -> CliResult<Document> {
    let model = args.model.as_deref().map(read_model).transpose()?;
    let mut columns = vec![
        "input",
        "n",
        "s",
        "frequency",
        "k",
        "bf_sequential",
        "bf_exact",
    ];
    if model.is_some() {
        columns.extend(["bf_corrected", "corrected_valid"]);
    }
    columns.push("note");
    let mut doc = Document::new(&columns);
    for path in &args.input {
        let xs = parse_sample_file(path)?;
        let mut row = vec![Cell::text(path.display().to_string())];
        row.extend(report_row(&xs, args, model.as_ref())?);
        doc.push(row);
    }
    Ok(doc)
}

pub fn fitdata(args: &FitdataArgs) -> CliResult<Document> {
    let points = read_points(args.data.as_deref())?;
    let model = match &args.model {
        Some(p) => read_model(p)?,
        None => build_calibration(&points, &DEFAULT_SEGMENTS, DEFAULT_EXCLUSION_BELOW)?,
    };
    emit_fit_data(&model, args.step, &points)
}

pub fn emit_fit_data(
    model: &CalibrationModel,
    step: f64,
    points: &[CalibrationPoint],
) -> CliResult<Document> {
    let mut doc = Document::new(&[
        "segment",
        "kind",
        "x",
        "source_fit",
        "reference_fit",
        "source_observed",
        "reference_observed",
    ]);
    for r in fit_curves(model, step, points)? {
        doc.push(vec![
            Cell::Int(r.segment as u64),
            Cell::text(if r.source_observed.is_some() {
                "point"
            } else {
                "grid"
            }),
            Cell::Num(r.x),
            Cell::Num(r.source_fit),
            Cell::Num(r.reference_fit),
            Cell::opt_num(r.source_observed),
            Cell::opt_num(r.reference_observed),
        ]);
    }
    Ok(doc)
}
