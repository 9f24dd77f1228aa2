//! Globally adaptive Gauss-Kronrod (7/15) quadrature for vector-valued
//! integrands on finite intervals.
//!
//! Every component shares the same subdivision. The embedded Gauss rule gives
//! the per-interval error estimate `|K15 - G7|`, which is conservative for
//! smooth integrands.

use rayon::prelude::*;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
    /// Evaluate the 15 nodes of each rule on the rayon pool.
    pub parallel: bool,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 0.0, max_intervals: 4000, parallel: false }
    }
}

impl QuadOptions {
    pub fn rel(rel_tol: f64) -> Self {
        Self { rel_tol, ..Self::default() }
    }
}

#[derive(Debug, Clone)]
pub struct QuadOutput {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub evaluations: usize,
    pub intervals: usize,
    pub converged: bool,
}

impl QuadOutput {
    /// Largest ratio `error / |value|` over the components (0 for exact zeros).
    pub fn worst_relative_error(&self) -> f64 {
        self.values.iter().zip(&self.errors).map(|(v, e)| if *e == 0.0 { 0.0 } else { e / v.abs() }).fold(0.0, f64::max)
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: Vec<f64>,
    error: Vec<f64>,
}

fn nodes(a: f64, b: f64) -> [f64; 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut x = [0.0; 15];
    for i in 0..7 {
        x[2 * i] = c - h * XGK[i];
        x[2 * i + 1] = c + h * XGK[i];
    }
    x[14] = c;
    x
}

fn rule<F>(f: &F, a: f64, b: f64, dim: usize, parallel: bool) -> Segment
where
    F: Fn(f64, &mut [f64]) + Sync,
{
    let x = nodes(a, b);
    let eval = |xi: &f64| {
        let mut out = vec![0.0; dim];
        f(*xi, &mut out);
        out
    };
    let fx: Vec<Vec<f64>> = if parallel { x.par_iter().map(eval).collect() } else { x.iter().map(eval).collect() };
    let h = 0.5 * (b - a);
    let mut kron = vec![0.0; dim];
    let mut gauss = vec![0.0; dim];
    for c in 0..dim {
        let mut k = WGK[7] * fx[14][c];
        let mut g = WG[3] * fx[14][c];
        for i in 0..7 {
            let pair = fx[2 * i][c] + fx[2 * i + 1][c];
            k += WGK[i] * pair;
            if i % 2 == 1 {
                g += WG[i / 2] * pair;
            }
        }
        kron[c] = k * h;
        gauss[c] = g * h;
    }
    let error = kron.iter().zip(&gauss).map(|(k, g)| (k - g).abs()).collect();
    Segment { a, b, value: kron, error }
}

/// Integrates a `dim`-component integrand over `[a, b]`.
///
/// `f(x, out)` must write all `dim` components into `out`. The loop bisects
/// the interval with the largest tolerance-normalised error until every
/// component satisfies `err <= max(abs_tol, rel_tol * |value|)` or the
/// interval budget runs out (`converged = false`).
pub fn integrate_vec<F>(f: F, a: f64, b: f64, dim: usize, opts: QuadOptions) -> QuadOutput
where
    F: Fn(f64, &mut [f64]) + Sync,
{
    if a == b {
        return QuadOutput {
            values: vec![0.0; dim],
            errors: vec![0.0; dim],
            evaluations: 0,
            intervals: 0,
            converged: true,
        };
    }
    let mut segs = vec![rule(&f, a, b, dim, opts.parallel)];
    let mut evaluations = 15;
    loop {
        let mut total = vec![0.0; dim];
        let mut err = vec![0.0; dim];
        for s in &segs {
            for c in 0..dim {
                total[c] += s.value[c];
                err[c] += s.error[c];
            }
        }
        let tol: Vec<f64> = total.iter().map(|v| opts.abs_tol.max(opts.rel_tol * v.abs())).collect();
        let done = (0..dim).all(|c| err[c] <= tol[c]);
        if done || segs.len() >= opts.max_intervals {
            return QuadOutput { values: total, errors: err, evaluations, intervals: segs.len(), converged: done };
        }
        let score = |s: &Segment| {
            (0..dim)
                .map(|c| {
                    if s.error[c] == 0.0 {
                        0.0
                    } else if tol[c] > 0.0 {
                        s.error[c] / tol[c]
                    } else {
                        f64::INFINITY
                    }
                })
                .fold(0.0, f64::max)
        };
        let (worst, _) = segs.iter().enumerate().map(|(i, s)| (i, score(s))).fold((0, f64::NEG_INFINITY), |acc, x| {
            if x.1 > acc.1 {
                x
            } else {
                acc
            }
        });
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // interval exhausted at machine precision
            return QuadOutput { values: total, errors: err, evaluations, intervals: segs.len() + 1, converged: false };
        }
        segs.push(rule(&f, s.a, mid, dim, opts.parallel));
        segs.push(rule(&f, mid, s.b, dim, opts.parallel));
        evaluations += 30;
    }
}

/// Scalar convenience wrapper around [`integrate_vec`].
pub fn integrate<F>(f: F, a: f64, b: f64, opts: QuadOptions) -> (f64, f64, bool)
where
    F: Fn(f64) -> f64 + Sync,
{
    let out = integrate_vec(|x, o| o[0] = f(x), a, b, 1, opts);
    (out.values[0], out.errors[0], out.converged)
}
