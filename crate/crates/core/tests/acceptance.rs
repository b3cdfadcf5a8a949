//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test -p seqbf --test acceptance -- --nocapture` to see the
//! report lines.

mod common;

use seqbf::calib::{
    apply_calibration, build_calibration, bundled_points, correct_value, DEFAULT_EXCLUSION_BELOW,
    DEFAULT_SEGMENTS,
};
use seqbf::exactbf::{
    bf_scan, binomial_bf10, reference_bf10, Alternative, BinomialData, Convention,
};
use seqbf::gof::{pearson_chi2, solve_unbiased_k, FrequencyTable};
use seqbf::seqbf::{sequential_bf, SampleSequence, Threshold};
use seqbf::stats::{levene_test, two_sample_ttest};

/// Worksheet column for n = 200: (s, printed value, reduced rational).
/// Rationals frozen from an independent brute-force prefix evaluation.
const WORKSHEET: [(u64, &str, (u64, u64)); 14] = [
    (10, "27.85714", (195, 7)),
    (20, "15.83333", (95, 6)),
    (30, "10.22222", (92, 9)),
    (40, "7.416667", (89, 12)),
    (50, "5.733333", (86, 15)),
    (60, "4.771429", (167, 35)),
    (70, "3.926829", (161, 41)),
    (80, "3.297872", (155, 47)),
    (90, "3.590909", (79, 22)),
    (100, "6.769231", (88, 13)),
    (102, "7.782609", (179, 23)),
    (105, "10.88235", (185, 17)),
    (107, "13.42857", (94, 7)),
    (110, "21.44444", (193, 9)),
];

/// Reference column for n = 200, alternative "greater", test value 0.5.
const REFERENCE: [(u64, f64); 14] = [
    (10, 0.005),
    (20, 0.006),
    (30, 0.007),
    (40, 0.008),
    (50, 0.01),
    (60, 0.012),
    (70, 0.016),
    (80, 0.022),
    (90, 0.037),
    (100, 0.084),
    (102, 0.106),
    (105, 0.16),
    (107, 0.222),
    (110, 0.398),
];

/// Corrected and reference columns for x = 0.15 .. 0.55.
const CORRECTED: [(f64, f64, f64, f64); 12] = [
    // (frequency, source, corrected, reference)
    (0.15, 10.22222, -0.00946, 0.007),
    (0.2, 7.416667, 0.00831, 0.008),
    (0.25, 5.733333, 0.008857, 0.01),
    (0.3, 4.771429, 0.02209, 0.012),
    (0.35, 3.926829, 0.031817, 0.016),
    (0.4, 3.297872, 0.047038, 0.022),
    (0.45, 3.590909, 0.068992, 0.037),
    (0.5, 6.769231, 0.133632, 0.084),
    (0.51, 7.782609, 0.165269, 0.106),
    (0.525, 10.88235, 0.289614, 0.16),
    (0.535, 13.42857, 0.41727, 0.222),
    (0.55, 21.44444, 1.494681, 0.398),
];

const SCAN: [(u64, u64, f64); 8] = [
    (300, 171, 2.381),
    (325, 185, 2.736),
    (350, 200, 4.163),
    (400, 228, 5.545),
    (450, 257, 9.843),
    (500, 285, 13.281),
    (1000, 570, 1282.612),
    (2000, 1140, 1.689e7),
];

fn verdict(id: &str, what: &str, ok: bool) {
    println!("[{}] {id}: {what}", if ok { "PASS" } else { "FAIL" });
}

fn within(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol
}

#[test]
fn c1_worksheet_column_exact() {
    let k = Threshold::new(0.07).unwrap();
    let mut ok = true;
    for (s, printed, (num, den)) in WORKSHEET {
        let r = sequential_bf(&SampleSequence::from_counts(200, s).unwrap(), k, true);
        let (a, b) = r.ratio.unwrap();
        let rational_ok = a * den == b * num;
        let decimals = printed.split('.').nth(1).map_or(0, str::len);
        let rendered = format!("{:.*}", decimals, r.bf10);
        let digits_ok = rendered == printed;
        if !(rational_ok && digits_ok) {
            println!("  s={s}: got {a}/{b} = {rendered}, want {num}/{den} = {printed}");
        }
        ok &= rational_ok && digits_ok;
    }
    // above the tabulated range the estimate saturates at n + 1
    for s in 120..=200 {
        let r = sequential_bf(&SampleSequence::from_counts(200, s).unwrap(), k, true);
        ok &= r.y_sum == Some(0) && r.bf10 == 201.0;
    }
    verdict(
        "C1",
        "worksheet column reproduced as exact rationals (14 rows)",
        ok,
    );
    assert!(ok);
}

#[test]
fn c2_reference_column() {
    let mut ok = true;
    println!("  s     target     header-dropped  exact(s,n)");
    for (s, want) in REFERENCE {
        let data = BinomialData::half(s, 200).unwrap();
        let got = reference_bf10(data, Alternative::Greater, Convention::HeaderRowDropped)
            .unwrap()
            .bf10;
        let exact = binomial_bf10(data, Alternative::Greater).unwrap().bf10;
        let row_ok = within(got, want, 0.0015) || (got - want).abs() <= 0.02 * want;
        println!("  {s:<5} {want:<10} {got:<15.6} {exact:.6}");
        ok &= row_ok;
    }
    verdict(
        "C2",
        "reference column within ±0.0015 abs or ±2% rel (header-dropped convention)",
        ok,
    );
    assert!(ok);
}

#[test]
fn c3_threshold() {
    let sol = solve_unbiased_k(200, 3.84).unwrap();
    let table = FrequencyTable::symmetric_deviation(200.0, sol.k_exact).unwrap();
    let chi2 = pearson_chi2(&table);
    let ok =
        within(sol.k_exact, 0.069282, 1e-4) && sol.k_working == 0.07 && within(chi2, 3.84, 1e-9);
    println!(
        "  k_exact = {:.6}, k_working = {}, chi2 round trip = {:.12}",
        sol.k_exact, sol.k_working, chi2
    );
    verdict(
        "C3",
        "k = 0.069282 ± 1e-4, working k = 0.07, chi2 = 3.84 ± 1e-9",
        ok,
    );
    assert!(ok);
}

#[test]
fn c4_calibration_table() {
    let model = build_calibration(
        &bundled_points(),
        &DEFAULT_SEGMENTS,
        DEFAULT_EXCLUSION_BELOW,
    )
    .unwrap();
    let r2_ok = model
        .segments
        .iter()
        .all(|s| s.source.r2 > 0.99 && s.reference.r2 > 0.99);
    for (i, s) in model.segments.iter().enumerate() {
        println!(
            "  segment {i} [{}, {}]: source r2 = {:.6}, reference r2 = {:.6}",
            s.domain.0, s.domain.1, s.source.r2, s.reference.r2
        );
    }

    println!("  residual report (tolerance = max(0.02, 10% of target)):");
    println!("  x       target      refit       residual    tol      ok");
    let mut values_ok = true;
    let mut refit = Vec::new();
    for (x, y, want, _) in CORRECTED {
        let got = apply_calibration(x, y, &model).unwrap().bf10;
        let tol = (0.1 * want.abs()).max(0.02);
        let row_ok = (got - want).abs() <= tol;
        values_ok &= row_ok;
        refit.push(got);
        println!(
            "  {x:<7} {want:<11.6} {got:<11.6} {:<+11.6} {tol:<8.4} {}",
            got - want,
            if row_ok { "yes" } else { "NO" }
        );
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let reference: Vec<f64> = CORRECTED.iter().map(|r| r.3).collect();
    let diff = mean(&refit) - mean(&reference);
    let diff_ok = within(diff, 0.1330, 1e-3);
    println!(
        "  mean(refit) − mean(reference) = {diff:.8} (tabulated corrected column gives 0.13300950)"
    );
    verdict("C4", "all four segment fits have R² > 0.99", r2_ok);
    verdict(
        "C4",
        "12 corrected values within max(±0.02, ±10%) of the target column",
        values_ok,
    );
    verdict(
        "C4",
        "mean(corrected) − mean(reference) = 0.1330 ± 1e-3",
        diff_ok,
    );
    assert!(r2_ok, "segment R² below 0.99");
    assert!(
        values_ok,
        "refit corrected values outside tolerance; see residual report"
    );
    assert!(
        diff_ok,
        "mean difference of refit corrected values is {diff}"
    );
}

#[test]
fn c5_two_sample_table() {
    let a: Vec<f64> = CORRECTED.iter().map(|r| r.2).collect();
    let b: Vec<f64> = CORRECTED.iter().map(|r| r.3).collect();
    let r = two_sample_ttest(&a, &b).unwrap();
    let checks = [
        ("Levene F", r.levene.f, 3.020, 0.01),
        ("Levene p", r.levene.p, 0.096, 0.005),
        ("pooled t", r.pooled.t, 1.053, 0.005),
        ("pooled df", r.pooled.df, 22.0, 0.0),
        ("pooled p", r.pooled.p, 0.304, 0.005),
        ("Welch df", r.welch.df, 12.756, 0.01),
        ("Welch p", r.welch.p, 0.312, 0.005),
        ("mean diff", r.pooled.mean_diff, 0.13300950, 1e-6),
        ("SE", r.pooled.se, 0.12627344, 1e-6),
        ("Welch SE", r.welch.se, 0.12627344, 1e-6),
        ("pooled CI lo", r.pooled.ci95_lo, -0.128866, 5e-4),
        ("pooled CI hi", r.pooled.ci95_hi, 0.39488459, 5e-4),
        ("Welch CI lo", r.welch.ci95_lo, -0.140320, 5e-4),
        ("Welch CI hi", r.welch.ci95_hi, 0.40633866, 5e-4),
    ];
    let mut ok = true;
    for (name, got, want, tol) in checks {
        let row_ok = within(got, want, tol);
        println!(
            "  {name:<13} {got:<14.8} want {want} ± {tol} {}",
            if row_ok { "" } else { "<-- off" }
        );
        ok &= row_ok;
    }
    // same via the standalone Levene entry point
    let l = levene_test(&a, &b).unwrap();
    ok &= l == r.levene;
    verdict("C5", "Levene, pooled and Welch rows reproduced", ok);
    assert!(ok);
}

#[test]
fn c6_sample_size_scan() {
    let ns: Vec<u64> = SCAN.iter().map(|r| r.0).collect();
    let rows = bf_scan(
        0.57,
        &ns,
        Alternative::Greater,
        Convention::HeaderRowDropped,
    )
    .unwrap();
    let exact = bf_scan(0.57, &ns, Alternative::Greater, Convention::Exact).unwrap();
    let mut ok = true;
    println!("  n     s     target        header-dropped   exact(s,n)");
    for ((row, ex), (n, s, want)) in rows.iter().zip(&exact).zip(SCAN) {
        let row_ok = row.n == n && row.s == s && (row.bf10 - want).abs() <= 0.02 * want;
        println!(
            "  {n:<5} {:<5} {want:<13} {:<16.6} {:.6}",
            row.s, row.bf10, ex.bf10
        );
        ok &= row_ok;
    }
    let first_flagged = rows.iter().find(|r| r.bf10 > 3.0).map(|r| r.n);
    println!("  smallest n with BF > 3: {first_flagged:?}");
    ok &= first_flagged == Some(350);
    verdict("C6", "scan within ±2% and first BF > 3 at n = 350", ok);
    assert!(ok);
}

#[test]
fn c7_property_suites() {
    let mut results = Vec::new();

    // sequential bounds over every s for a few n, all orders collapse to canonical
    let k = Threshold::new(0.07).unwrap();
    let mut bounds_ok = true;
    for n in [1u64, 10, 57, 200, 401] {
        for s in 0..=n {
            let r = sequential_bf(&SampleSequence::from_counts(n, s).unwrap(), k, true);
            let nf = n as f64;
            bounds_ok &= r.bf10 >= 1.0 / (nf + 1.0) && r.bf10 <= nf + 1.0;
            if n == 200 && s >= 120 {
                bounds_ok &= r.bf10 == 201.0;
            }
        }
    }
    results.push((
        "sequential BF in [1/(n+1), n+1]; cap 201 for s ≥ 120 at n = 200",
        bounds_ok,
    ));

    let mut eq_ok = true;
    for (x, y, e, j) in common::random_fit_pairs(1000, 2024) {
        let got = correct_value(x, y, &e, &j).unwrap();
        let want = common::correction_oracle(x, y, &e, &j);
        let scale = want.abs().max(
            e.coeffs
                .iter()
                .chain(&j.coeffs)
                .fold(0.0f64, |m, c| m.max(c.abs())),
        );
        eq_ok &= (got - want).abs() <= 1e-10 * scale;
    }
    results.push((
        "expanded correction equals f_J + (b1/a1)(y − f_E) on 1000 random pairs",
        eq_ok,
    ));

    let mut quad_ok = true;
    let mut inverse_ok = true;
    for n in 1..=50u64 {
        for s in 0..=n {
            for alt in [
                Alternative::Greater,
                Alternative::Less,
                Alternative::TwoSided,
            ] {
                let r = binomial_bf10(BinomialData::half(s, n).unwrap(), alt).unwrap();
                let want = common::bf_oracle(s, n, alt);
                quad_ok &= (r.bf10 - want).abs() <= 1e-8 * want;
                inverse_ok &= (r.bf10 * r.bf01() - 1.0).abs() < 1e-12;
            }
        }
    }
    results.push((
        "exact BF equals quadrature to 1e-8 for all s, n ≤ 50",
        quad_ok,
    ));
    results.push(("BF10 · BF01 = 1", inverse_ok));

    let g = [0.2, 1.7, 3.1, 0.9, 2.2];
    let t = two_sample_ttest(&g, &g).unwrap();
    let l = levene_test(&g, &g).unwrap();
    let trivial_ok = t.pooled.t == 0.0
        && t.pooled.p == 1.0
        && t.welch.p == 1.0
        && t.pooled.mean_diff == 0.0
        && l.f == 0.0
        && l.p == 1.0;
    results.push((
        "t-test and Levene identities on identical groups",
        trivial_ok,
    ));

    let mut all = true;
    for (what, ok) in results {
        verdict("C7", what, ok);
        all &= ok;
    }
    assert!(all);
}
