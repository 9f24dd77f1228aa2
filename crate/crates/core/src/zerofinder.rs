//! Certified zero search for kernels on one-complex-dimensional slices.
//!
//! A cell of the search region is certified zero-free when the argument of
//! the slice function winds zero times around its boundary and the boundary
//! modulus stays above the evaluation error bound everywhere it was sampled;
//! winding `>= 1` yields a [`ZeroCertificate`] with Newton-refined locations.

use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::kernels::{kq_of_product, EvaluatedValue, KernelEvaluator};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

type C = Complex64;

/// Quadtree depth after which inconclusive cells are reported as unknown.
pub const MAX_DEPTH: usize = 12;
/// Split position inside a cell, off 1/2.
const SPLIT: f64 = 0.537;
/// Start angle of full-turn sectors.
const ANGLE_OFFSET: f64 = 0.1 - PI;
const NEWTON_STEP: f64 = 1e-6;
const NEWTON_TOL: f64 = 1e-10;
const NEWTON_ITERS: usize = 60;

/// A scalar function of the slice parameter with an error bound per value.
pub trait SliceFunction: Sync {
    fn eval(&self, s: C) -> Result<EvaluatedValue>;
}

impl<F: Fn(C) -> Result<EvaluatedValue> + Sync> SliceFunction for F {
    fn eval(&self, s: C) -> Result<EvaluatedValue> {
        self(s)
    }
}

/// `K_q` as a function of `s = x conj(y)`.
#[derive(Debug, Clone, Copy)]
pub struct KqSlice {
    pub q: f64,
}

impl SliceFunction for KqSlice {
    fn eval(&self, s: C) -> Result<EvaluatedValue> {
        if s.norm() >= 1.0 {
            return Err(Error::PointOutside);
        }
        Ok(EvaluatedValue::exact(kq_of_product(self.q, s)))
    }
}

/// Adds a fixed amount to every tail bound of the wrapped function.
pub struct InflatedTail<F> {
    pub inner: F,
    pub extra: f64,
}

impl<F: SliceFunction> SliceFunction for InflatedTail<F> {
    fn eval(&self, s: C) -> Result<EvaluatedValue> {
        let mut v = self.inner.eval(s)?;
        v.tail_bound += self.extra;
        Ok(v)
    }
}

/// One-parameter families along which the kernel is holomorphic in `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SliceSpec {
    /// `s` is the product `z_axis conj(w_axis)`; the other products are pinned.
    Product { axis: usize, pinned: Vec<C> },
    /// `z = s * direction`, `w = anchor`.
    DiagonalRay { direction: Vec<C>, anchor: Vec<C> },
}

impl SliceSpec {
    /// Product slice along `axis` with every other product zero.
    pub fn axis(n: usize, axis: usize) -> Self {
        SliceSpec::Product { axis, pinned: vec![C::new(0.0, 0.0); n] }
    }

    pub fn dim(&self) -> usize {
        match self {
            SliceSpec::Product { pinned, .. } => pinned.len(),
            SliceSpec::DiagonalRay { direction, .. } => direction.len(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SliceSpec::Product { axis, pinned } => {
                let others: Vec<String> = pinned
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| i != axis)
                    .map(|(i, p)| format!("p{}={}", i + 1, p))
                    .collect();
                if others.is_empty() {
                    format!("s = z{0} conj(w{0})", axis + 1)
                } else {
                    format!("s = z{0} conj(w{0}), {1}", axis + 1, others.join(", "))
                }
            }
            SliceSpec::DiagonalRay { .. } => "z = s u, w fixed".into(),
        }
    }
}

/// A kernel restricted to a slice, with an optional series budget.
pub struct KernelSlice<'a> {
    pub kernel: &'a KernelEvaluator,
    pub slice: SliceSpec,
    pub budget: Option<usize>,
}

impl<'a> KernelSlice<'a> {
    pub fn new(kernel: &'a KernelEvaluator, slice: SliceSpec) -> Result<Self> {
        if slice.dim() != kernel.dim() {
            return Err(Error::DimensionMismatch { expected: kernel.dim(), got: slice.dim() });
        }
        if let SliceSpec::Product { axis, .. } = &slice {
            if *axis >= kernel.dim() {
                return Err(Error::DimensionMismatch { expected: kernel.dim(), got: axis + 1 });
            }
        }
        Ok(Self { kernel, slice, budget: None })
    }
}

impl SliceFunction for KernelSlice<'_> {
    fn eval(&self, s: C) -> Result<EvaluatedValue> {
        match &self.slice {
            SliceSpec::Product { axis, pinned } => {
                let mut p = pinned.clone();
                p[*axis] = s;
                // the products must come from a pair of points of the domain
                let probe: Vec<C> = p.iter().map(|x| C::new(x.norm().sqrt(), 0.0)).collect();
                if !self.kernel.domain().contains(&probe)? {
                    return Err(Error::PointOutside);
                }
                self.kernel.eval_products_budget(&p, self.budget)
            }
            SliceSpec::DiagonalRay { direction, anchor } => {
                let z: Vec<C> = direction.iter().map(|u| u * s).collect();
                self.kernel.eval_budget(&z, anchor, self.budget)
            }
        }
    }
}

/// The zeros `s_m = -tan^2(pi m / (q + 2))`, `1 <= m < (q + 2) / 4`, of `K_q` in the unit disk.
pub fn kq_zero_locus(q: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut m = 1;
    while 4.0 * (m as f64) < q + 2.0 {
        out.push(-(PI * m as f64 / (q + 2.0)).tan().powi(2));
        m += 1;
    }
    out
}

/// A piece of a contour, parametrised on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Piece {
    Segment { from: C, to: C },
    Arc { center: C, radius: f64, from: f64, to: f64 },
}

impl Piece {
    fn at(&self, tau: f64) -> C {
        match *self {
            Piece::Segment { from, to } => from + (to - from) * tau,
            Piece::Arc { center, radius, from, to } => center + C::from_polar(radius, from + (to - from) * tau),
        }
    }
}

/// A positively oriented cycle made of pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub pieces: Vec<Piece>,
}

impl Contour {
    pub fn circle(center: C, radius: f64) -> Self {
        Self { pieces: vec![Piece::Arc { center, radius, from: 0.0, to: 2.0 * PI }] }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct WindingOptions {
    /// Initial samples per contour piece.
    pub initial_samples: usize,
    /// Largest accepted argument increment between neighbouring samples.
    pub max_step: f64,
    /// Sample cap for the whole contour.
    pub max_samples: usize,
}

impl Default for WindingOptions {
    fn default() -> Self {
        Self { initial_samples: 32, max_step: PI / 4.0, max_samples: 200_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Winding {
    pub count: i64,
    pub min_modulus: f64,
    /// Largest tail bound over the contour samples.
    pub tail_bound: f64,
    /// Every sample carried a certified tail bound.
    pub certified: bool,
    pub samples: usize,
    /// Largest argument increment between accepted neighbours.
    pub max_increment: f64,
}

impl Winding {
    pub fn is_valid(&self) -> bool {
        self.certified && self.min_modulus > self.tail_bound && self.max_increment < PI / 2.0
    }
}

/// Argument-principle count of zeros inside `contour`, with the contour
/// minimum modulus. Fails with `Inconclusive` when the modulus does not clear
/// the tail bound.
pub fn winding_number(f: &dyn SliceFunction, contour: &Contour, max_step: f64) -> Result<(i64, f64)> {
    let w = trace(f, contour, WindingOptions { max_step, ..WindingOptions::default() })?;
    if !w.is_valid() {
        return Err(Error::Inconclusive(format!(
            "contour modulus {:.3e} does not clear tail bound {:.3e}",
            w.min_modulus, w.tail_bound
        )));
    }
    Ok((w.count, w.min_modulus))
}

/// Samples the contour adaptively and accumulates the argument change.
///
/// Neighbouring samples are accepted when `|f(b) - f(a)| <= min(|f(a)|, |f(b)|) / 2`
/// and the argument increment is below `max_step`; otherwise the parameter
/// interval is bisected.
pub fn trace(f: &dyn SliceFunction, contour: &Contour, opts: WindingOptions) -> Result<Winding> {
    let mut total = 0.0;
    let mut min_modulus = f64::INFINITY;
    let mut tail: f64 = 0.0;
    let mut certified = true;
    let mut samples = 0usize;
    let mut max_increment: f64 = 0.0;
    let mut record = |v: &EvaluatedValue, samples: &mut usize| {
        min_modulus = min_modulus.min(v.value.norm());
        tail = tail.max(v.tail_bound);
        certified &= v.certified;
        *samples += 1;
    };
    for piece in &contour.pieces {
        let n = opts.initial_samples.max(2);
        let mut knots = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let tau = i as f64 / n as f64;
            let v = f.eval(piece.at(tau))?;
            record(&v, &mut samples);
            knots.push((tau, v.value));
        }
        for pair in knots.windows(2) {
            let mut stack = vec![(pair[0], pair[1])];
            while let Some(((ta, fa), (tb, fb))) = stack.pop() {
                let small = fa.norm().min(fb.norm());
                let inc = (fb / fa).arg();
                let accept = small > 0.0 && (fb - fa).norm() <= 0.5 * small && inc.abs() < opts.max_step;
                if accept {
                    total += inc;
                    max_increment = max_increment.max(inc.abs());
                    continue;
                }
                if small == 0.0 || tb - ta < 1e-13 || samples >= opts.max_samples {
                    return Ok(Winding {
                        count: 0,
                        min_modulus: min_modulus.min(small),
                        tail_bound: tail,
                        certified: false,
                        samples,
                        max_increment: PI,
                    });
                }
                let tm = 0.5 * (ta + tb);
                let v = f.eval(piece.at(tm))?;
                record(&v, &mut samples);
                stack.push(((tm, v.value), (tb, fb)));
                stack.push(((ta, fa), (tm, v.value)));
            }
        }
    }
    Ok(Winding {
        count: (total / (2.0 * PI)).round() as i64,
        min_modulus,
        tail_bound: tail,
        certified,
        samples,
        max_increment,
    })
}

/// A cell of the search region in the `s`-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Cell {
    Rect {
        re: (f64, f64),
        im: (f64, f64),
    },
    Disk {
        center: C,
        radius: f64,
    },
    /// `{ c + r e^{i theta} : r0 <= r <= r1, t0 <= theta <= t1 }`.
    Sector {
        center: C,
        r0: f64,
        r1: f64,
        t0: f64,
        t1: f64,
    },
}

impl Cell {
    pub fn disk(center: C, radius: f64) -> Self {
        Cell::Disk { center, radius }
    }

    pub fn annulus(center: C, inner: f64, outer: f64) -> Self {
        Cell::Sector { center, r0: inner, r1: outer, t0: ANGLE_OFFSET, t1: ANGLE_OFFSET + 2.0 * PI }
    }

    pub fn rect(re: (f64, f64), im: (f64, f64)) -> Self {
        Cell::Rect { re, im }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Cell::Rect { re, im } => re.0 < re.1 && im.0 < im.1,
            Cell::Disk { radius, .. } => radius > 0.0,
            Cell::Sector { r0, r1, t0, t1, .. } => 0.0 <= r0 && r0 < r1 && t0 < t1 && t1 - t0 <= 2.0 * PI + 1e-12,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameters(format!("degenerate search region {self:?}")))
        }
    }

    fn full_turn(t0: f64, t1: f64) -> bool {
        (t1 - t0 - 2.0 * PI).abs() < 1e-12
    }

    pub fn boundary(&self) -> Contour {
        let pieces = match *self {
            Cell::Rect { re, im } => {
                let corners = [C::new(re.0, im.0), C::new(re.1, im.0), C::new(re.1, im.1), C::new(re.0, im.1)];
                (0..4).map(|i| Piece::Segment { from: corners[i], to: corners[(i + 1) % 4] }).collect()
            }
            Cell::Disk { center, radius } => Contour::circle(center, radius).pieces,
            Cell::Sector { center, r0, r1, t0, t1 } => {
                if Self::full_turn(t0, t1) {
                    vec![
                        Piece::Arc { center, radius: r1, from: t0, to: t1 },
                        Piece::Arc { center, radius: r0, from: t1, to: t0 },
                    ]
                } else {
                    let p = |r: f64, t: f64| center + C::from_polar(r, t);
                    let mut v = vec![
                        Piece::Arc { center, radius: r1, from: t0, to: t1 },
                        Piece::Segment { from: p(r1, t1), to: p(r0, t1) },
                    ];
                    if r0 > 0.0 {
                        v.push(Piece::Arc { center, radius: r0, from: t1, to: t0 });
                    }
                    v.push(Piece::Segment { from: p(r0, t0), to: p(r1, t0) });
                    v
                }
            }
        };
        Contour { pieces }
    }

    /// A point well inside the cell.
    pub fn interior_point(&self) -> C {
        match *self {
            Cell::Rect { re, im } => C::new(0.5 * (re.0 + re.1), 0.5 * (im.0 + im.1)),
            Cell::Disk { center, .. } => center,
            Cell::Sector { center, r0, r1, t0, t1 } => center + C::from_polar(0.5 * (r0 + r1), 0.5 * (t0 + t1)),
        }
    }

    pub fn contains(&self, s: C) -> bool {
        match *self {
            Cell::Rect { re, im } => re.0 < s.re && s.re < re.1 && im.0 < s.im && s.im < im.1,
            Cell::Disk { center, radius } => (s - center).norm() < radius,
            Cell::Sector { center, r0, r1, t0, t1 } => {
                let d = s - center;
                let r = d.norm();
                if !(r0 < r && r < r1) {
                    return false;
                }
                let t = t0 + (d.arg() - t0).rem_euclid(2.0 * PI);
                Self::full_turn(t0, t1) || (t0 < t && t < t1)
            }
        }
    }

    pub fn subdivide(&self) -> Vec<Cell> {
        match *self {
            Cell::Rect { re, im } => {
                let x = re.0 + SPLIT * (re.1 - re.0);
                let y = im.0 + SPLIT * (im.1 - im.0);
                vec![
                    Cell::Rect { re: (re.0, x), im: (im.0, y) },
                    Cell::Rect { re: (x, re.1), im: (im.0, y) },
                    Cell::Rect { re: (re.0, x), im: (y, im.1) },
                    Cell::Rect { re: (x, re.1), im: (y, im.1) },
                ]
            }
            Cell::Disk { center, radius } => {
                vec![Cell::Disk { center, radius: SPLIT * radius }, Cell::annulus(center, SPLIT * radius, radius)]
            }
            Cell::Sector { center, r0, r1, t0, t1 } => {
                let r = r0 + SPLIT * (r1 - r0);
                let t = t0 + SPLIT * (t1 - t0);
                vec![
                    Cell::Sector { center, r0, r1: r, t0, t1: t },
                    Cell::Sector { center, r0: r, r1, t0, t1: t },
                    Cell::Sector { center, r0, r1: r, t0: t, t1 },
                    Cell::Sector { center, r0: r, r1, t0: t, t1 },
                ]
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinedZero {
    pub location: C,
    /// `|f|` at the refined location.
    pub residual: f64,
    pub converged: bool,
}

/// Argument-principle certificate for the zeros inside a cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroCertificate {
    pub region: Cell,
    pub winding: i64,
    pub min_modulus: f64,
    pub tail_bound: f64,
    pub max_increment: f64,
    pub zeros: Vec<RefinedZero>,
}

impl ZeroCertificate {
    pub fn is_valid(&self) -> bool {
        self.winding >= 1 && self.min_modulus > self.tail_bound && self.max_increment < PI / 2.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnknownCell {
    pub region: Cell,
    pub depth: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_depth: usize,
    pub max_cells: usize,
    pub winding: WindingSettings,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingSettings {
    pub initial_samples: usize,
    pub max_step: f64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_depth: MAX_DEPTH,
            max_cells: 20_000,
            winding: WindingSettings { initial_samples: 32, max_step: PI / 4.0 },
        }
    }
}

impl SearchBudget {
    fn winding_options(&self) -> WindingOptions {
        WindingOptions {
            initial_samples: self.winding.initial_samples,
            max_step: self.winding.max_step,
            ..WindingOptions::default()
        }
    }
}

/// Outcome of a quadtree search over one region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSearch {
    pub region: Cell,
    pub certificates: Vec<ZeroCertificate>,
    pub zero_free_cells: usize,
    pub unknown: Vec<UnknownCell>,
    pub cells_processed: usize,
    pub deepest_level: usize,
}

impl ZeroSearch {
    /// Zeros counted with multiplicity over the certificates.
    pub fn zero_count(&self) -> i64 {
        self.certificates.iter().map(|c| c.winding).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.unknown.is_empty()
    }

    pub fn locations(&self) -> Vec<C> {
        self.certificates.iter().flat_map(|c| c.zeros.iter().map(|z| z.location)).collect()
    }
}

/// Newton iteration with a central-difference derivative.
pub fn newton(f: &dyn SliceFunction, start: C) -> Result<RefinedZero> {
    let mut s = start;
    let mut fs = f.eval(s)?.value;
    let mut converged = false;
    for _ in 0..NEWTON_ITERS {
        let h = C::new(NEWTON_STEP, 0.0);
        let d = (f.eval(s + h)?.value - f.eval(s - h)?.value) / (2.0 * NEWTON_STEP);
        if d.norm() == 0.0 {
            break;
        }
        let step = fs / d;
        s -= step;
        fs = f.eval(s)?.value;
        if step.norm() <= 1e-14 * s.norm().max(1.0) {
            converged = fs.norm() < NEWTON_TOL;
            break;
        }
    }
    if fs.norm() < NEWTON_TOL {
        converged = true;
    }
    Ok(RefinedZero { location: s, residual: fs.norm(), converged })
}

enum Outcome {
    Free,
    Certified(ZeroCertificate),
    Split,
    Unknown(String),
}

fn refine_in(f: &dyn SliceFunction, cell: &Cell) -> Option<RefinedZero> {
    let c = cell.interior_point();
    let mut starts = vec![c];
    if let Cell::Disk { center, radius } = *cell {
        starts.extend((0..4).map(|k| center + C::from_polar(0.5 * radius, PI * (0.5 * k as f64 + 0.25))));
    }
    starts.into_iter().filter_map(|s| newton(f, s).ok()).find(|z| z.converged && cell.contains(z.location))
}

fn process(f: &dyn SliceFunction, cell: &Cell, depth: usize, budget: &SearchBudget) -> Outcome {
    let at_limit = depth >= budget.max_depth;
    let w = match trace(f, &cell.boundary(), budget.winding_options()) {
        Ok(w) => w,
        Err(e) => {
            let msg = format!("evaluation failed on the contour: {e}");
            return if at_limit { Outcome::Unknown(msg) } else { Outcome::Split };
        }
    };
    if !w.is_valid() {
        let msg = format!(
            "contour not certified (min modulus {:.3e}, tail {:.3e}, certified {})",
            w.min_modulus, w.tail_bound, w.certified
        );
        return if at_limit { Outcome::Unknown(msg) } else { Outcome::Split };
    }
    if w.count == 0 {
        return Outcome::Free;
    }
    if w.count < 0 {
        let msg = format!("negative winding {} on a holomorphic slice", w.count);
        return if at_limit { Outcome::Unknown(msg) } else { Outcome::Split };
    }
    let zero = refine_in(f, cell);
    if (w.count == 1 && zero.is_some()) || at_limit {
        return Outcome::Certified(ZeroCertificate {
            region: *cell,
            winding: w.count,
            min_modulus: w.min_modulus,
            tail_bound: w.tail_bound,
            max_increment: w.max_increment,
            zeros: zero.into_iter().collect(),
        });
    }
    Outcome::Split
}

/// Quadtree search for zeros of `f` in `region`.
///
/// Cells are processed level by level in parallel; results are merged in cell
/// order, so the output does not depend on scheduling.
pub fn find_zeros(f: &dyn SliceFunction, region: Cell, budget: &SearchBudget) -> Result<ZeroSearch> {
    region.validate()?;
    let mut out = ZeroSearch {
        region,
        certificates: Vec::new(),
        zero_free_cells: 0,
        unknown: Vec::new(),
        cells_processed: 0,
        deepest_level: 0,
    };
    let mut level = vec![region];
    let mut depth = 0;
    while !level.is_empty() {
        out.deepest_level = depth;
        if out.cells_processed + level.len() > budget.max_cells {
            out.unknown.extend(level.iter().map(|c| UnknownCell {
                region: *c,
                depth,
                reason: "cell budget exhausted".into(),
            }));
            break;
        }
        let results: Vec<Outcome> = level.par_iter().map(|c| process(f, c, depth, budget)).collect();
        out.cells_processed += level.len();
        let mut next = Vec::new();
        for (cell, r) in level.iter().zip(results) {
            match r {
                Outcome::Free => out.zero_free_cells += 1,
                Outcome::Certified(c) => out.certificates.push(c),
                Outcome::Split => next.extend(cell.subdivide()),
                Outcome::Unknown(reason) => out.unknown.push(UnknownCell { region: *cell, depth, reason }),
            }
        }
        level = next;
        depth += 1;
    }
    Ok(out)
}

/// Kernel zeros on a slice of an evaluator.
pub fn find_zeros_on_slice(
    kernel: &KernelEvaluator,
    slice: SliceSpec,
    region: Cell,
    series_budget: Option<usize>,
    budget: &SearchBudget,
) -> Result<ZeroSearch> {
    let mut f = KernelSlice::new(kernel, slice)?;
    f.budget = series_budget;
    find_zeros(&f, region, budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    ZerosCertified,
    NoZerosFound,
    Inconclusive,
}

/// Settings for [`zero_free_verdict`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerdictBudget {
    pub search: SearchBudget,
    /// Degree cap of the axis moment tables for series kernels.
    pub series_cap: usize,
    /// Moment tolerance.
    pub tol: f64,
    /// Search radius as a fraction of the squared axis extent, for closed forms.
    pub closed_fraction: f64,
    /// The same for series kernels, which certify their tails only well inside.
    pub series_fraction: f64,
}

impl Default for VerdictBudget {
    fn default() -> Self {
        Self {
            search: SearchBudget::default(),
            series_cap: 300,
            tol: 1e-11,
            closed_fraction: 0.95,
            series_fraction: 0.85,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceReport {
    pub slice: SliceSpec,
    pub description: String,
    pub evaluator: String,
    pub region: Cell,
    pub search: ZeroSearch,
}

/// A zero found by exact evaluation rather than by winding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactZero {
    pub z: Vec<C>,
    pub w: Vec<C>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub domain: DomainSpec,
    pub verdict: Verdict,
    pub exact_zeros: Vec<ExactZero>,
    pub slices: Vec<SliceReport>,
    pub skipped: Vec<String>,
    pub budget: VerdictBudget,
    pub table_hashes: Vec<String>,
    pub scope: String,
}

impl VerdictRecord {
    pub fn certificates(&self) -> impl Iterator<Item = &ZeroCertificate> {
        self.slices.iter().flat_map(|s| s.search.certificates.iter())
    }
}

fn axis_region(spec: &DomainSpec, axis: usize, fraction: f64) -> Option<Cell> {
    let bounds = spec.radial_bounds();
    let r = bounds[axis];
    if !r.is_finite() {
        return None;
    }
    let zero = C::new(0.0, 0.0);
    match spec {
        DomainSpec::Annulus { inner } => {
            let rho2 = inner * inner;
            Some(Cell::annulus(zero, rho2 / fraction, fraction))
        }
        _ => Some(Cell::disk(zero, fraction * r * r)),
    }
}

/// Searches the default slices of a domain for kernel zeros.
///
/// The slices are the coordinate axes (other products zero); closed-form
/// kernels in two or more variables add axis slices with the other products
/// pinned at `+-R^2 / 2`. Only absence of zeros within the searched slices is
/// ever reported.
pub fn zero_free_verdict(spec: &DomainSpec, budget: &VerdictBudget) -> Result<VerdictRecord> {
    spec.validate()?;
    let n = spec.dim();
    let mut slices = Vec::new();
    let mut skipped = Vec::new();
    let mut exact_zeros = Vec::new();
    let mut table_hashes = Vec::new();
    let zero = C::new(0.0, 0.0);

    let origin = vec![zero; n];
    if spec.is_complete() && spec.contains(&origin).unwrap_or(false) {
        let k0 = KernelEvaluator::for_domain(spec, 2, budget.tol)
            .or_else(|_| KernelEvaluator::axis_restriction(spec, 0, 2, budget.tol));
        if let Ok(k0) = k0 {
            let v = k0.eval(&origin, &origin)?;
            if v.value == zero && v.tail_bound == 0.0 {
                exact_zeros.push(ExactZero {
                    z: origin.clone(),
                    w: origin.clone(),
                    reason: "K(0,0) vanishes identically: no admissible constant monomial".into(),
                });
            }
        }
    }

    let closed = KernelEvaluator::closed_form(spec).ok();
    for axis in 0..n {
        let k = match &closed {
            Some(k) => k.clone(),
            None => KernelEvaluator::axis_restriction(spec, axis, budget.series_cap, budget.tol)?,
        };
        let fraction = if k.is_series() { budget.series_fraction } else { budget.closed_fraction };
        let region = match axis_region(spec, axis, fraction) {
            Some(r) => r,
            None => {
                skipped.push(format!("axis {}: unbounded extent", axis + 1));
                continue;
            }
        };
        if let Some(t) = k.table() {
            if t.is_empty() {
                skipped.push(format!("axis {}: kernel vanishes identically on this axis", axis + 1));
                continue;
            }
        }
        table_hashes.extend(k.table_hashes());
        let evaluator = if k.is_series() { "series" } else { "closed form" }.to_string();
        let mut pins = vec![vec![zero; n]];
        if closed.is_some() && n > 1 {
            let bounds = spec.radial_bounds();
            for sign in [0.5, -0.5] {
                let mut p = vec![zero; n];
                for (j, x) in p.iter_mut().enumerate() {
                    if j != axis {
                        *x = C::new(sign * bounds[j] * bounds[j], 0.0);
                    }
                }
                pins.push(p);
            }
        }
        for pinned in pins {
            let mut region = region;
            if pinned.iter().any(|p| *p != zero) {
                // keep the slice inside the domain and the kernel's holomorphy region
                let mut pr: Vec<f64> = pinned.iter().map(|p| p.norm().sqrt()).collect();
                let lim = {
                    let mut lo = 0.0;
                    let mut hi = spec.radial_bounds()[axis];
                    for _ in 0..60 {
                        let mid = 0.5 * (lo + hi);
                        pr[axis] = mid;
                        if spec.radial_indicator(&pr) {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    lo
                };
                if lim <= 0.0 {
                    continue;
                }
                region = Cell::disk(zero, fraction * lim * lim);
            }
            let slice = SliceSpec::Product { axis, pinned };
            let search = find_zeros_on_slice(&k, slice.clone(), region, None, &budget.search)?;
            slices.push(SliceReport {
                description: slice.describe(),
                slice,
                evaluator: evaluator.clone(),
                region,
                search,
            });
        }
    }
    table_hashes.sort();
    table_hashes.dedup();

    let any_zero = !exact_zeros.is_empty() || slices.iter().any(|s| !s.search.certificates.is_empty());
    let all_complete = !slices.is_empty() && slices.iter().all(|s| s.search.is_complete());
    let verdict = if any_zero {
        Verdict::ZerosCertified
    } else if all_complete {
        Verdict::NoZerosFound
    } else {
        Verdict::Inconclusive
    };
    let scope = match verdict {
        Verdict::ZerosCertified => "zeros certified on the listed slices",
        Verdict::NoZerosFound => "no zeros inside the searched slice regions; nothing is claimed elsewhere",
        Verdict::Inconclusive => "search incomplete: some cells could not be certified",
    }
    .to_string();
    Ok(VerdictRecord {
        domain: spec.clone(),
        verdict,
        exact_zeros,
        slices,
        skipped,
        budget: *budget,
        table_hashes,
        scope,
    })
}
