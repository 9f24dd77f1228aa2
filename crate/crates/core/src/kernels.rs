//! Kernel evaluation.
//!
//! A [`KernelEvaluator`] is either a closed form, a truncated monomial series
//! over a [`MomentTable`], or a product of two evaluators. For every catalog
//! domain the kernel depends on `(z, w)` only through the products
//! `p_j = z_j * conj(w_j)`, so all evaluators expose [`KernelEvaluator::eval_products`].
//!
//! Series tail bounds come from a geometric majorant fitted to the absolute
//! degree blocks `B_d = sum_{|alpha| = d} |p^alpha| / ||z^alpha||^2` of the top
//! quartile of computed degrees. With `rho` the largest ratio `B_{d+1}/B_d`
//! there, the tail is bounded by `B_D rho / (1 - rho)` provided later block
//! ratios do not exceed `rho` (the majorant condition). The bound is only
//! flagged `certified` when `rho < 0.9`.

use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::moments::{build_axis_table, build_table, MomentTable};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

/// Ratio threshold below which a fitted majorant is treated as rigorous.
pub const CERTIFY_RATIO: f64 = 0.9;

/// Below this `|z conj(w)|` the weighted-disk kernel is summed as a series.
pub const KQ_SERIES_THRESHOLD: f64 = 1e-4;

/// A kernel value with its error budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluatedValue {
    pub value: Complex64,
    /// Bound on truncation, moment and rounding error.
    pub tail_bound: f64,
    /// True iff `tail_bound` holds under the majorant condition.
    pub certified: bool,
}

impl EvaluatedValue {
    pub fn exact(value: Complex64) -> Self {
        Self { value, tail_bound: 8.0 * f64::EPSILON * value.norm(), certified: true }
    }

    fn scale(self, c: f64) -> Self {
        Self { value: self.value * c, tail_bound: self.tail_bound * c.abs(), ..self }
    }

    fn mul(self, other: Self) -> Self {
        let (a, b) = (self.value.norm(), other.value.norm());
        Self {
            value: self.value * other.value,
            tail_bound: a * other.tail_bound + b * self.tail_bound + self.tail_bound * other.tail_bound,
            certified: self.certified && other.certified,
        }
    }
}

/// The reciprocal weighted-disk norms `1 / B(2k+2, q+1)` for `k = 0..=kmax`.
fn kq_coefficients(q: f64, kmax: usize) -> impl Iterator<Item = f64> {
    let mut c = (q + 1.0) * (q + 2.0);
    (0..=kmax).map(move |k| {
        let out = c;
        let x = 2.0 * k as f64 + 2.0;
        c *= (x + q + 1.0) * (x + q + 2.0) / (x * (x + 1.0));
        out
    })
}

/// `K_q` as a function of `s = x conj(y)`: the unit-disk kernel for the weight `(1 - |z|)^q`.
pub fn kq_of_product(q: f64, s: Complex64) -> Complex64 {
    if s.norm() < KQ_SERIES_THRESHOLD {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        for c in kq_coefficients(q, 60) {
            let term = pow * c;
            sum += term;
            if term.norm() <= 1e-18 * sum.norm() {
                break;
            }
            pow *= s;
        }
        return sum / (2.0 * PI);
    }
    // even in t, so either square root will do
    let t = s.sqrt();
    let one = Complex64::new(1.0, 0.0);
    let m = -(q + 2.0);
    ((one - t).powf(m) - (one + t).powf(m)) * ((q + 1.0) / (4.0 * PI)) / t
}

/// Weighted-disk kernel `K_q(x, y)`; `x`, `y` must lie in the unit disk.
pub fn eval_kq(q: f64, x: Complex64, y: Complex64) -> Result<EvaluatedValue> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::InvalidParameters(format!("q must be positive, got {q}")));
    }
    if x.norm() >= 1.0 || y.norm() >= 1.0 {
        return Err(Error::PointOutside);
    }
    Ok(EvaluatedValue::exact(kq_of_product(q, x * y.conj())))
}

/// Kernel of `HartogsOverDisk(q)` restricted to the base: `K_q(z, w) / pi`.
pub fn hartogs_base_restriction(q: f64, z: Complex64, w: Complex64) -> Result<EvaluatedValue> {
    Ok(eval_kq(q, z, w)?.scale(1.0 / PI))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm {
    Disk {
        radius: f64,
    },
    Ball {
        n: usize,
    },
    Polydisk {
        radii: Vec<f64>,
    },
    /// `K_q`, the unit disk with weight `(1 - |z|)^q`.
    WeightedDisk {
        q: f64,
    },
    /// `scale * K_q(p_axis)`, valid only when every other product vanishes.
    ///
    /// The kernel of `{ |z_axis| + sum_{i != axis} |z_i|^{2/p_i} < 1 }` restricted to
    /// the `z_axis` line is `K_q / V` with `q = sum p_i` and `V` the volume of the
    /// fibre domain `{ sum_{i != axis} |z_i|^{2/p_i} < 1 }`.
    AxisKq {
        axis: usize,
        q: f64,
        scale: f64,
    },
}

impl ClosedForm {
    fn eval_products(&self, p: &[Complex64]) -> Result<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        Ok(match self {
            ClosedForm::Disk { radius } => {
                let r2 = radius * radius;
                if p[0].norm() >= r2 {
                    return Err(Error::PointOutside);
                }
                let d = one - p[0] / r2;
                (d * d).inv() / (PI * r2)
            }
            ClosedForm::Ball { n } => {
                let s: Complex64 = p.iter().sum();
                if s.norm() >= 1.0 {
                    return Err(Error::PointOutside);
                }
                let fact: f64 = (1..=*n).map(|i| i as f64).product();
                (one - s).powi(-(*n as i32 + 1)) * (fact / PI.powi(*n as i32))
            }
            ClosedForm::Polydisk { radii } => {
                let mut v = one;
                for (pj, r) in p.iter().zip(radii) {
                    v *= ClosedForm::Disk { radius: *r }.eval_products(std::slice::from_ref(pj))?;
                }
                v
            }
            ClosedForm::WeightedDisk { q } => {
                if p[0].norm() >= 1.0 {
                    return Err(Error::PointOutside);
                }
                kq_of_product(*q, p[0])
            }
            ClosedForm::AxisKq { axis, q, scale } => {
                if p.iter().enumerate().any(|(i, x)| i != *axis && *x != Complex64::new(0.0, 0.0)) {
                    return Err(Error::Unsupported {
                        variant: "Egg".into(),
                        what: "axis kernel evaluated off its axis".into(),
                    });
                }
                if p[*axis].norm() >= 1.0 {
                    return Err(Error::PointOutside);
                }
                kq_of_product(*q, p[*axis]) * *scale
            }
        })
    }
}

/// Series data grouped by total degree.
#[derive(Debug)]
pub struct SeriesKernel {
    pub table: MomentTable,
    /// `blocks[d]` holds `(alpha, 1/||z^alpha||^2, relative moment error)`.
    blocks: Vec<Vec<(Vec<i32>, f64, f64)>>,
    /// Set when the table only holds the monomials of one coordinate.
    axis_only: Option<usize>,
}

impl SeriesKernel {
    pub fn new(table: MomentTable) -> Self {
        let mut blocks = vec![Vec::new(); table.degree_cap + 1];
        for (a, m) in &table.entries {
            blocks[a.degree()].push((a.0.clone(), 1.0 / m.value, m.rel_error()));
        }
        let n = table.dim();
        let axis_only = if n > 1 {
            (0..n)
                .find(|&j| table.entries.keys().all(|a| a.0.iter().enumerate().all(|(i, x)| i == j || *x == 0)))
                .filter(|&j| {
                    let (low, _) = crate::moments::index_set(&table.domain, table.degree_cap.min(6));
                    low.iter().any(|a| a.0.iter().enumerate().any(|(i, x)| i != j && *x != 0))
                })
        } else {
            None
        };
        Self { table, blocks, axis_only }
    }

    pub fn degree_cap(&self) -> usize {
        self.table.degree_cap
    }

    /// Truncated sum over admissible `|alpha| <= budget` with a fitted tail bound.
    pub fn eval_products(&self, p: &[Complex64], budget: usize) -> Result<EvaluatedValue> {
        let n = self.table.dim();
        if p.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: p.len() });
        }
        if budget > self.degree_cap() {
            return Err(Error::BudgetExceedsCap { budget, cap: self.degree_cap() });
        }
        if let Some(axis) = self.axis_only {
            if p.iter().enumerate().any(|(i, x)| i != axis && x.norm() != 0.0) {
                return Err(Error::Unsupported {
                    variant: self.table.domain.variant_name().into(),
                    what: "axis-only table evaluated off its axis".into(),
                });
            }
        }
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        // powers p_j^k for |k| <= budget
        let powers: Vec<(Vec<Complex64>, Vec<Complex64>)> = p
            .iter()
            .map(|&x| {
                let mut pos = vec![one; budget + 1];
                for k in 1..=budget {
                    pos[k] = pos[k - 1] * x;
                }
                let mut neg = vec![one; budget + 1];
                if x != zero {
                    let inv = x.inv();
                    for k in 1..=budget {
                        neg[k] = neg[k - 1] * inv;
                    }
                } else {
                    for v in neg.iter_mut().skip(1) {
                        *v = Complex64::new(f64::NAN, f64::NAN);
                    }
                }
                (pos, neg)
            })
            .collect();
        // log block magnitudes
        let log_p: Vec<f64> = p.iter().map(|x| x.norm().ln()).collect();
        let mut value = zero;
        let mut total_abs = 0.0;
        let mut moment_err = 0.0;
        let mut log_blocks = vec![f64::NEG_INFINITY; budget + 1];
        for d in 0..=budget {
            let mut acc = zero;
            let mut logs = Vec::with_capacity(self.blocks[d].len());
            for (alpha, coef, rel) in &self.blocks[d] {
                let mut mono = one;
                let mut log_term = coef.ln();
                for (j, &a) in alpha.iter().enumerate() {
                    mono *= if a >= 0 { powers[j].0[a as usize] } else { powers[j].1[(-a) as usize] };
                    if a != 0 {
                        log_term += a as f64 * log_p[j];
                    }
                }
                if !mono.re.is_finite() {
                    return Err(Error::PointOutside);
                }
                let term = mono * *coef;
                acc += term;
                let t = term.norm();
                total_abs += t;
                moment_err += t * rel;
                logs.push(log_term);
            }
            value += acc;
            log_blocks[d] = log_sum_exp(&logs);
        }
        let (tail, certified) = fit_tail(&log_blocks);
        let rounding = 8.0 * f64::EPSILON * total_abs * (1.0 + (budget as f64).sqrt());
        Ok(EvaluatedValue { value, tail_bound: tail + moment_err + rounding, certified })
    }
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Geometric-majorant tail estimate from the logarithms of the absolute
/// degree blocks (`-inf` for an empty block).
fn fit_tail(log_blocks: &[f64]) -> (f64, bool) {
    let top = log_blocks.len() - 1;
    let width = (log_blocks.len() / 4).max(2).min(log_blocks.len());
    let start = log_blocks.len() - width;
    let quartile = &log_blocks[start..];
    let last_nonzero = match quartile.iter().rposition(|b| b.is_finite()) {
        None => return (0.0, true),
        Some(i) => start + i,
    };
    let mut log_rho = f64::NEG_INFINITY;
    let mut pairs = 0;
    for w in quartile.windows(2) {
        if w[0].is_finite() && w[1].is_finite() {
            log_rho = log_rho.max(w[1] - w[0]);
            pairs += 1;
        }
    }
    if pairs == 0 || log_rho >= 0.0 {
        return (f64::INFINITY, false);
    }
    let rho = log_rho.exp();
    let gap = (top - last_nonzero + 1) as f64;
    let tail = (log_blocks[last_nonzero] + gap * log_rho - (-rho).ln_1p()).exp();
    (tail, rho < CERTIFY_RATIO)
}

#[derive(Debug, Clone)]
enum Source {
    Closed(ClosedForm),
    Series(Arc<SeriesKernel>),
    Product(Box<KernelEvaluator>, Box<KernelEvaluator>),
}

/// Evaluates `K(z, w)` for one domain.
#[derive(Debug, Clone)]
pub struct KernelEvaluator {
    domain: DomainSpec,
    source: Source,
}

impl KernelEvaluator {
    /// Closed-form kernel, where one is known.
    pub fn closed_form(spec: &DomainSpec) -> Result<Self> {
        spec.validate()?;
        let form = match spec {
            DomainSpec::UnitDisk => ClosedForm::Disk { radius: 1.0 },
            DomainSpec::Disk { radius } => ClosedForm::Disk { radius: *radius },
            DomainSpec::Ball { n } => ClosedForm::Ball { n: *n },
            DomainSpec::Egg { exponents } if exponents.iter().all(|e| *e == 2.0) => {
                ClosedForm::Ball { n: exponents.len() }
            }
            DomainSpec::Polydisk { radii } => ClosedForm::Polydisk { radii: radii.clone() },
            DomainSpec::WeightedDisk { q } => ClosedForm::WeightedDisk { q: *q },
            DomainSpec::Product { left, right } => {
                let l = KernelEvaluator::closed_form(left)?;
                let r = KernelEvaluator::closed_form(right)?;
                return Ok(Self { domain: spec.clone(), source: Source::Product(Box::new(l), Box::new(r)) });
            }
            other => {
                return Err(Error::Unsupported {
                    variant: other.variant_name().into(),
                    what: "no closed-form kernel".into(),
                })
            }
        };
        Ok(Self { domain: spec.clone(), source: Source::Closed(form) })
    }

    pub fn series(table: MomentTable) -> Self {
        Self::from_series(Arc::new(SeriesKernel::new(table)))
    }

    pub fn from_series(series: Arc<SeriesKernel>) -> Self {
        Self { domain: series.table.domain.clone(), source: Source::Series(series) }
    }

    /// Closed form when available, otherwise a series over a freshly built table.
    pub fn for_domain(spec: &DomainSpec, cap: usize, tol: f64) -> Result<Self> {
        match Self::closed_form(spec) {
            Ok(k) => Ok(k),
            Err(Error::Unsupported { .. }) => match spec {
                DomainSpec::Product { left, right } => {
                    let l = Self::for_domain(left, cap, tol)?;
                    let r = Self::for_domain(right, cap, tol)?;
                    Ok(Self { domain: spec.clone(), source: Source::Product(Box::new(l), Box::new(r)) })
                }
                _ => Ok(Self::series(build_table(spec, cap, tol)?)),
            },
            Err(e) => Err(e),
        }
    }

    /// The kernel restricted to the `axis` coordinate line (other products zero).
    ///
    /// Eggs with exponent 1 on the axis use the closed `K_q` reduction; closed
    /// forms are used as is; everything else is a series over the axis moments.
    pub fn axis_restriction(spec: &DomainSpec, axis: usize, cap: usize, tol: f64) -> Result<Self> {
        spec.validate()?;
        if axis >= spec.dim() {
            return Err(Error::DimensionMismatch { expected: spec.dim(), got: axis + 1 });
        }
        if let DomainSpec::Egg { exponents } = spec {
            if exponents[axis] == 1.0 && exponents.len() > 1 {
                let rest: Vec<f64> =
                    exponents.iter().enumerate().filter(|(i, _)| *i != axis).map(|(_, e)| *e).collect();
                let q: f64 = rest.iter().map(|e| 2.0 / e).sum();
                let (fibre, _) = DomainSpec::egg(&rest).volume(1e-12)?;
                return Ok(Self {
                    domain: spec.clone(),
                    source: Source::Closed(ClosedForm::AxisKq { axis, q, scale: 1.0 / fibre }),
                });
            }
        }
        if let Ok(k) = Self::closed_form(spec) {
            return Ok(k);
        }
        Ok(Self::series(build_axis_table(spec, axis, cap, tol)?))
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn is_planar(&self) -> bool {
        self.dim() == 1
    }

    pub fn is_series(&self) -> bool {
        matches!(self.source, Source::Series(_))
    }

    /// Moment table behind a series evaluator.
    pub fn table(&self) -> Option<&MomentTable> {
        match &self.source {
            Source::Series(s) => Some(&s.table),
            _ => None,
        }
    }

    /// Tables consumed by this evaluator (recursively through products).
    pub fn table_hashes(&self) -> Vec<String> {
        match &self.source {
            Source::Closed(_) => Vec::new(),
            Source::Series(s) => vec![format!("{}:d{}", s.table.domain_hash, s.table.degree_cap)],
            Source::Product(l, r) => {
                let mut v = l.table_hashes();
                v.extend(r.table_hashes());
                v
            }
        }
    }

    /// Largest admissible series budget (`usize::MAX` for closed forms).
    pub fn max_budget(&self) -> usize {
        match &self.source {
            Source::Closed(_) => usize::MAX,
            Source::Series(s) => s.degree_cap(),
            Source::Product(l, r) => l.max_budget().min(r.max_budget()),
        }
    }

    /// Kernel at the product vector `p_j = z_j conj(w_j)`, using the full budget.
    pub fn eval_products(&self, p: &[Complex64]) -> Result<EvaluatedValue> {
        self.eval_products_budget(p, None)
    }

    pub fn eval_products_budget(&self, p: &[Complex64], budget: Option<usize>) -> Result<EvaluatedValue> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: p.len() });
        }
        match &self.source {
            Source::Closed(form) => Ok(EvaluatedValue::exact(form.eval_products(p)?)),
            Source::Series(s) => s.eval_products(p, budget.unwrap_or(s.degree_cap())),
            Source::Product(l, r) => {
                let m = l.dim();
                let a = l.eval_products_budget(&p[..m], budget)?;
                let b = r.eval_products_budget(&p[m..], budget)?;
                Ok(a.mul(b))
            }
        }
    }

    /// `K(z, w)` for points of the domain.
    pub fn eval(&self, z: &[Complex64], w: &[Complex64]) -> Result<EvaluatedValue> {
        self.eval_budget(z, w, None)
    }

    pub fn eval_budget(&self, z: &[Complex64], w: &[Complex64], budget: Option<usize>) -> Result<EvaluatedValue> {
        if !self.domain.contains(z)? || !self.domain.contains(w)? {
            return Err(Error::PointOutside);
        }
        let p: Vec<Complex64> = z.iter().zip(w).map(|(a, b)| a * b.conj()).collect();
        self.eval_products_budget(&p, budget)
    }
}

/// Exact closed-form evaluation for a catalog domain.
pub fn eval_closed(spec: &DomainSpec, z: &[Complex64], w: &[Complex64]) -> Result<EvaluatedValue> {
    KernelEvaluator::closed_form(spec)?.eval(z, w)
}

/// Series evaluation over an existing table.
pub fn eval_series(table: &MomentTable, z: &[Complex64], w: &[Complex64], budget: usize) -> Result<EvaluatedValue> {
    KernelEvaluator::series(table.clone()).eval_budget(z, w, Some(budget))
}

/// Kernel of the unit disk or ball for the weight `exp(-t ||z||)`, as a series
/// over a table of degree `cap`.
pub fn weighted_englis_kernel(t: f64, base: &DomainSpec, cap: usize, tol: f64) -> Result<KernelEvaluator> {
    let spec = DomainSpec::weighted_radial(base.clone(), t);
    spec.validate()?;
    Ok(KernelEvaluator::series(build_table(&spec, cap, tol)?))
}

pub fn weighted_englis_eval(
    t: f64,
    base: &DomainSpec,
    z: &[Complex64],
    w: &[Complex64],
    budget: usize,
) -> Result<EvaluatedValue> {
    weighted_englis_kernel(t, base, budget, 1e-12)?.eval(z, w)
}
