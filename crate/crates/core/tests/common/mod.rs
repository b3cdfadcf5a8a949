//! Independent oracles shared by the integration suites.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seqbf::calib::CubicFit;
use seqbf::exactbf::Alternative;

const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// 15-point Kronrod estimate and its difference from the embedded 7-point
/// Gauss rule.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (i, (&x, &w)) in KRONROD_NODES.iter().zip(&KRONROD_WEIGHTS).enumerate() {
        let vals = if x == 0.0 {
            f(c)
        } else {
            f(c - h * x) + f(c + h * x)
        };
        kronrod += w * vals;
        if i % 2 == 1 {
            gauss += GAUSS_WEIGHTS[i / 2] * vals;
        }
    }
    (kronrod * h, (kronrod - gauss).abs() * h)
}

/// Globally adaptive Gauss–Kronrod on `[a, b]`: keep bisecting the panel
/// with the largest error estimate until the summed estimate is below
/// `rel · |integral|` or the panel budget runs out.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel: f64) -> f64 {
    const MAX_PANELS: usize = 4000;
    let mut panels = vec![(a, b, gauss_kronrod(f, a, b))];
    loop {
        let total: f64 = panels.iter().map(|p| p.2 .0).sum();
        let err: f64 = panels.iter().map(|p| p.2 .1).sum();
        if err <= rel * total.abs() || panels.len() >= MAX_PANELS {
            return total;
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .expect("non-empty");
        let (lo, hi, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        panels.push((lo, mid, gauss_kronrod(f, lo, mid)));
        panels.push((mid, hi, gauss_kronrod(f, mid, hi)));
    }
}

/// BF₁₀ straight from the defining integral, with the likelihood ratio
/// to the null inside the integrand so nothing underflows for n ≤ 50.
pub fn bf_oracle(s: u64, n: u64, alt: Alternative) -> f64 {
    let p0: f64 = 0.5;
    let (sf, ff) = (s as f64, (n - s) as f64);
    let ratio = |p: f64| {
        if p <= 0.0 || p >= 1.0 {
            let v = if p <= 0.0 { s == 0 } else { s == n };
            return if v { (1.0 / p0).powf(n as f64) } else { 0.0 };
        }
        (sf * (p / p0).ln() + ff * ((1.0 - p) / (1.0 - p0)).ln()).exp()
    };
    // split at p0 and at the mode so Simpson sees smooth pieces
    let mode = sf / n as f64;
    let piece = |a: f64, b: f64| {
        let mut cuts = vec![a, b];
        if mode > a && mode < b {
            cuts.insert(1, mode);
        }
        cuts.windows(2)
            .map(|w| integrate(&ratio, w[0], w[1], 1e-12))
            .sum::<f64>()
    };
    match alt {
        Alternative::Greater => piece(p0, 1.0) / (1.0 - p0),
        Alternative::Less => piece(0.0, p0) / p0,
        Alternative::TwoSided => piece(0.0, p0) + piece(p0, 1.0),
    }
}

/// `f_J(x) + (b₁/a₁)(y − f_E(x))`, the unexpanded form of the correction.
pub fn correction_oracle(x: f64, y: f64, e: &CubicFit, j: &CubicFit) -> f64 {
    let fe = e.coeffs.iter().fold(0.0, |acc, c| acc * x + c);
    let fj = j.coeffs.iter().fold(0.0, |acc, c| acc * x + c);
    fj + (j.coeffs[0] / e.coeffs[0]) * (y - fe)
}

pub fn random_fit_pairs(count: usize, seed: u64) -> Vec<(f64, f64, CubicFit, CubicFit)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut coeffs = || {
                let mut c = [0.0f64; 4];
                for v in c.iter_mut() {
                    *v = rng.gen_range(-100.0..100.0);
                }
                c
            };
            let mut e = coeffs();
            let j = coeffs();
            if e[0].abs() < 1e-6 {
                e[0] = 1.0;
            }
            let x = rng.gen_range(0.15..0.55);
            let y = rng.gen_range(0.0..30.0);
            let fit = |coeffs| CubicFit {
                coeffs,
                domain: (0.15, 0.55),
                r2: 1.0,
            };
            (x, y, fit(e), fit(j))
        })
        .collect()
}
