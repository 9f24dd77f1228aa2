//! Squared norms `||z^alpha||^2` of monomials on catalog domains.
//!
//! Closed forms are used wherever the integral reduces to Beta/Gamma
//! functions. Anh and Alg domains go through [`radial_quadrature`], a nested
//! adaptive integration over the radial region whose innermost coordinate is
//! integrated analytically up to the boundary found by bisection.

mod store;

pub use store::{load_table, load_table_for, save_table, MomentCache, FORMAT_VERSION};

use crate::domains::{DomainSpec, RadialRegion};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_vec, QuadOptions};
use crate::special::{egg_moment, ln_beta_with_err, weighted_disk_norm};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::atomic::{AtomicBool, Ordering};

/// Default degree caps by dimension.
pub fn default_degree_cap(dim: usize) -> usize {
    match dim {
        1 => 40,
        2 => 16,
        _ => 10,
    }
}

/// A monomial exponent. Negative entries only occur on annulus coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<i32>);

impl MultiIndex {
    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn axis(n: usize, j: usize, k: i32) -> Self {
        let mut v = vec![0; n];
        v[j] = k;
        MultiIndex(v)
    }

    /// `sum_j |alpha_j|`.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|a| a.unsigned_abs() as usize).sum()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<i32>> for MultiIndex {
    fn from(v: Vec<i32>) -> Self {
        MultiIndex(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
}

/// One squared norm with its absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moment {
    pub value: f64,
    pub abs_error: f64,
    pub method: Method,
}

impl Moment {
    fn closed(value: f64, rel_err: f64) -> Self {
        Moment { value, abs_error: value * rel_err.max(4.0 * f64::EPSILON), method: Method::ClosedForm }
    }

    pub fn rel_error(&self) -> f64 {
        self.abs_error / self.value
    }
}

/// All admissible squared norms up to a total degree cap.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    pub domain: DomainSpec,
    pub domain_hash: String,
    pub degree_cap: usize,
    pub entries: BTreeMap<MultiIndex, Moment>,
    /// Indices with degree <= cap whose monomial is not square-integrable.
    pub excluded: Vec<MultiIndex>,
}

impl MomentTable {
    pub fn get(&self, alpha: &MultiIndex) -> Option<&Moment> {
        self.entries.get(alpha)
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_admissible(&self, alpha: &MultiIndex) -> bool {
        self.entries.contains_key(alpha)
    }
}

/// Whether coordinate `j` of the domain carries Laurent (negative) exponents.
fn laurent_coordinates(spec: &DomainSpec) -> Vec<bool> {
    match spec {
        DomainSpec::Annulus { .. } => vec![true],
        DomainSpec::Product { left, right } => {
            let mut v = laurent_coordinates(left);
            v.extend(laurent_coordinates(right));
            v
        }
        _ => vec![false; spec.dim()],
    }
}

/// Square-integrability of `z^alpha` (with the domain's weight).
pub fn admissible(spec: &DomainSpec, alpha: &MultiIndex) -> bool {
    if alpha.dim() != spec.dim() {
        return false;
    }
    let laurent = laurent_coordinates(spec);
    if alpha.0.iter().zip(&laurent).any(|(a, l)| *a < 0 && !l) {
        return false;
    }
    match spec {
        // finite iff int_0^inf r^{2a+1} (1+r)^{-(2b+2)} dr converges, i.e. b > a
        DomainSpec::Counterexample => alpha.0[1] > alpha.0[0],
        DomainSpec::Product { left, right } => {
            let m = left.dim();
            admissible(left, &MultiIndex(alpha.0[..m].to_vec()))
                && admissible(right, &MultiIndex(alpha.0[m..].to_vec()))
        }
        _ => true,
    }
}

/// All indices of total degree `<= cap`, split into admissible and excluded.
pub fn index_set(spec: &DomainSpec, cap: usize) -> (Vec<MultiIndex>, Vec<MultiIndex>) {
    let laurent = laurent_coordinates(spec);
    let mut all = Vec::new();
    fn rec(laurent: &[bool], cap: usize, cur: &mut Vec<i32>, out: &mut Vec<MultiIndex>) {
        let used: usize = cur.iter().map(|a| a.unsigned_abs() as usize).sum();
        if cur.len() == laurent.len() {
            out.push(MultiIndex(cur.clone()));
            return;
        }
        let left = (cap - used) as i32;
        let lo = if laurent[cur.len()] { -left } else { 0 };
        for a in lo..=left {
            cur.push(a);
            rec(laurent, cap, cur, out);
            cur.pop();
        }
    }
    rec(&laurent, cap, &mut Vec::new(), &mut all);
    all.sort();
    all.into_iter().partition(|a| admissible(spec, a))
}

fn disk_moment(radius: f64, k: i32) -> Moment {
    let m = 2.0 * k as f64 + 2.0;
    Moment::closed(2.0 * PI * radius.powf(m) / m, 4.0 * f64::EPSILON * (1.0 + m * radius.ln().abs()))
}

/// `2 pi B(2k+2, q+1)`.
fn weighted_disk_moment(q: f64, k: i32) -> Moment {
    Moment::closed(weighted_disk_norm(q, k as u32), 4.0 * f64::EPSILON)
}

/// `int_0^1 r^m e^{-t r} dr`, by adaptive quadrature.
fn radial_exp_integral(m: f64, t: f64, tol: f64) -> Result<(f64, f64)> {
    if t == 0.0 {
        return Ok((1.0 / (m + 1.0), 2.0 * f64::EPSILON / (m + 1.0)));
    }
    let opts = QuadOptions { rel_tol: tol * 0.5, ..QuadOptions::default() };
    // the integrand peaks at r = m/t; splitting there keeps the rule well resolved
    let peak = if t > 0.0 { (m / t).clamp(0.0, 1.0) } else { 1.0 };
    let f = |r: f64| r.powf(m) * (-t * r).exp();
    let (a, ea, ok1) = integrate(f, 0.0, peak, opts);
    let (b, eb, ok2) = integrate(f, peak, 1.0, opts);
    let value = a + b;
    let err = ea + eb;
    if !(ok1 && ok2) || err > tol * value {
        return Err(Error::QuadratureFailed { tol, achieved: err / value, intervals: opts.max_intervals });
    }
    Ok((value, err))
}

/// Squared norm of `z^alpha` on the domain, with `abs_error <= tol * value`.
pub fn monomial_norm_sq(spec: &DomainSpec, alpha: &MultiIndex, tol: f64) -> Result<Moment> {
    spec.validate()?;
    if alpha.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), got: alpha.dim() });
    }
    if !admissible(spec, alpha) {
        return Err(Error::Inadmissible { variant: spec.variant_name().into(), alpha: alpha.0.clone() });
    }
    let a = &alpha.0;
    let moment = match spec {
        DomainSpec::UnitDisk => disk_moment(1.0, a[0]),
        DomainSpec::Disk { radius } => disk_moment(*radius, a[0]),
        DomainSpec::WeightedDisk { q } => weighted_disk_moment(*q, a[0]),
        DomainSpec::Ball { n } => {
            let (v, rel) = egg_moment(&vec![2.0; *n], a);
            Moment::closed(v, rel)
        }
        DomainSpec::Egg { exponents } => {
            let (v, rel) = egg_moment(exponents, a);
            Moment::closed(v, rel)
        }
        DomainSpec::Polydisk { radii } => {
            let mut value = 1.0;
            let mut rel = 0.0;
            for (r, k) in radii.iter().zip(a) {
                let m = disk_moment(*r, *k);
                value *= m.value;
                rel += m.rel_error();
            }
            Moment::closed(value, rel)
        }
        DomainSpec::Annulus { inner } => {
            let k = a[0];
            if k == -1 {
                Moment::closed(2.0 * PI * (1.0 / inner).ln(), 4.0 * f64::EPSILON)
            } else {
                let m = 2.0 * k as f64 + 2.0;
                let one_minus = -(m * inner.ln()).exp_m1();
                Moment::closed(2.0 * PI * one_minus / m, 8.0 * f64::EPSILON * (1.0 + (m * inner.ln()).abs()))
            }
        }
        DomainSpec::Counterexample => {
            let (x, y) = (a[0] as f64, a[1] as f64);
            let (lb, err) = ln_beta_with_err(2.0 * x + 2.0, 2.0 * y - 2.0 * x);
            Moment::closed(2.0 * PI * PI / (y + 1.0) * lb.exp(), err)
        }
        DomainSpec::HartogsOverDisk { q } => {
            // fibre |z2| < (1-|z|)^{q/2} integrates to pi (1-|z|)^{q(b+1)} / (b+1)
            let (x, y) = (a[0] as f64, a[1] as f64);
            let (lb, err) = ln_beta_with_err(2.0 * x + 2.0, q * (y + 1.0) + 1.0);
            Moment::closed(2.0 * PI * PI / (y + 1.0) * lb.exp(), err)
        }
        DomainSpec::WeightedRadial { base, t } => {
            let n = base.dim();
            let deg: i32 = a.iter().sum();
            // sphere factor: ball moment times (2|alpha| + 2n)
            let (ball, rel) = egg_moment(&vec![2.0; n], a);
            let m = (2 * deg + 2 * n as i32) as f64;
            let sphere = ball * m;
            let (radial, err) = radial_exp_integral(m - 1.0, *t, tol * 0.5)?;
            Moment {
                value: sphere * radial,
                abs_error: sphere * err + sphere * radial * rel,
                method: Method::Quadrature,
            }
        }
        DomainSpec::Anh { .. } | DomainSpec::Alg { .. } => {
            let region = spec.radial_region()?;
            let (v, e) = radial_quadrature(&region, std::slice::from_ref(&alpha.0), tol)?[0];
            Moment { value: v, abs_error: e, method: Method::Quadrature }
        }
        DomainSpec::Product { left, right } => {
            let m = left.dim();
            let l = monomial_norm_sq(left, &MultiIndex(a[..m].to_vec()), tol / 2.0)?;
            let r = monomial_norm_sq(right, &MultiIndex(a[m..].to_vec()), tol / 2.0)?;
            let method = if l.method == Method::Quadrature || r.method == Method::Quadrature {
                Method::Quadrature
            } else {
                Method::ClosedForm
            };
            Moment {
                value: l.value * r.value,
                abs_error: l.value * r.abs_error + r.value * l.abs_error + l.abs_error * r.abs_error,
                method,
            }
        }
    };
    if !(moment.value.is_finite() && moment.value > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "moment {:?} of {} evaluated to {}",
            alpha.0,
            spec.canonical_key(),
            moment.value
        )));
    }
    if moment.abs_error > tol * moment.value && moment.method == Method::Quadrature {
        return Err(Error::QuadratureFailed { tol, achieved: moment.rel_error(), intervals: 0 });
    }
    Ok(moment)
}

/// Nested adaptive integration of `(2 pi)^n prod_j r_j^{2 alpha_j + 1}` over a
/// complete radial region, for all `alphas` at once. Returns `(value, abs_error)`.
pub fn radial_quadrature(region: &RadialRegion, alphas: &[Vec<i32>], tol: f64) -> Result<Vec<(f64, f64)>> {
    if region.bounds.iter().any(|b| !b.is_finite()) {
        return Err(Error::Unbounded(region.spec().variant_name().into()));
    }
    radial_quadrature_with_cutoff(region, alphas, tol, f64::INFINITY)
}

/// As [`radial_quadrature`], but the first coordinate is truncated at `cutoff`
/// (needed for the unbounded Counterexample region).
pub fn radial_quadrature_with_cutoff(
    region: &RadialRegion,
    alphas: &[Vec<i32>],
    tol: f64,
    cutoff: f64,
) -> Result<Vec<(f64, f64)>> {
    if !region.complete {
        return Err(Error::Unsupported {
            variant: region.spec().variant_name().into(),
            what: "radial quadrature needs a complete Reinhardt region".into(),
        });
    }
    let n = region.dim();
    if alphas.iter().any(|a| a.len() != n || a.iter().any(|x| *x < 0)) {
        return Err(Error::InvalidParameters("multi-indices must be nonnegative and match the dimension".into()));
    }
    let failed = AtomicBool::new(false);
    let nested = Nested { region, alphas, tol, cutoff, failed: &failed };
    let mut prefix = Vec::with_capacity(n);
    let (values, errors) = nested.level(&mut prefix);
    if failed.load(Ordering::Relaxed) {
        return Err(Error::QuadratureFailed { tol, achieved: f64::NAN, intervals: 0 });
    }
    let scale = (2.0 * PI).powi(n as i32);
    let mut out = Vec::with_capacity(alphas.len());
    for (v, e) in values.iter().zip(&errors) {
        let value = v * scale;
        let err = e * scale;
        if !(value > 0.0) || err > tol * value {
            return Err(Error::QuadratureFailed { tol, achieved: err / value, intervals: 0 });
        }
        out.push((value, err));
    }
    Ok(out)
}

struct Nested<'a> {
    region: &'a RadialRegion,
    alphas: &'a [Vec<i32>],
    tol: f64,
    cutoff: f64,
    failed: &'a AtomicBool,
}

impl Nested<'_> {
    /// Integral over the remaining coordinates with the prefix fixed, before
    /// the `(2 pi)^n` factor. Errors include the inner levels' share.
    fn level(&self, prefix: &mut Vec<f64>) -> (Vec<f64>, Vec<f64>) {
        let n = self.region.dim();
        let m = self.alphas.len();
        let j = prefix.len();
        let mut upper = self.region.extent_after(prefix);
        if j == 0 {
            upper = upper.min(self.cutoff);
        }
        if j == n - 1 {
            let mut vals = vec![0.0; m];
            if upper > 0.0 {
                for (slot, a) in vals.iter_mut().zip(self.alphas) {
                    let mut p = 1.0;
                    for (i, r) in prefix.iter().enumerate() {
                        p *= r.powi(2 * a[i] + 1);
                    }
                    let e = 2.0 * a[j] as f64 + 2.0;
                    *slot = p * upper.powf(e) / e;
                }
            }
            return (vals, vec![0.0; m]);
        }
        if upper <= 0.0 {
            return (vec![0.0; m], vec![0.0; m]);
        }
        // inner levels run tighter so their error is a small fraction of the total
        let inner_tol = self.tol * 0.1;
        let depth_left = n - 1 - j;
        let opts = QuadOptions {
            rel_tol: if depth_left == 1 { self.tol * 0.5 } else { self.tol * 0.4 },
            abs_tol: 0.0,
            max_intervals: 3000,
            parallel: j == 0 && n >= 3,
        };
        let prefix_snapshot = prefix.clone();
        let integrand = |r: f64, out: &mut [f64]| {
            let mut p = prefix_snapshot.clone();
            p.push(r);
            let sub = Nested { tol: inner_tol, ..*self };
            let (v, _) = sub.level(&mut p);
            out.copy_from_slice(&v);
        };
        let res = integrate_vec(integrand, 0.0, upper, m, opts);
        if !res.converged {
            self.failed.store(true, Ordering::Relaxed);
        }
        let errors = if depth_left == 1 {
            res.errors
        } else {
            res.errors.iter().zip(&res.values).map(|(e, v)| e + inner_tol * v.abs()).collect()
        };
        (res.values, errors)
    }
}

/// Builds the table of all admissible moments with degree `<= cap`.
pub fn build_table(spec: &DomainSpec, cap: usize, tol: f64) -> Result<MomentTable> {
    spec.validate()?;
    let (indices, excluded) = index_set(spec, cap);
    let entries: Vec<(MultiIndex, Moment)> = match spec {
        DomainSpec::Anh { .. } | DomainSpec::Alg { .. } => {
            let region = spec.radial_region()?;
            let raw: Vec<Vec<i32>> = indices.iter().map(|a| a.0.clone()).collect();
            let vals = radial_quadrature(&region, &raw, tol)?;
            indices
                .into_iter()
                .zip(vals)
                .map(|(a, (value, abs_error))| (a, Moment { value, abs_error, method: Method::Quadrature }))
                .collect()
        }
        DomainSpec::Product { left, right } => {
            let lt = build_table(left, cap, tol / 2.0)?;
            let rt = build_table(right, cap, tol / 2.0)?;
            let m = left.dim();
            indices
                .into_iter()
                .map(|a| {
                    let l = lt.entries[&MultiIndex(a.0[..m].to_vec())];
                    let r = rt.entries[&MultiIndex(a.0[m..].to_vec())];
                    let method = if l.method == Method::Quadrature || r.method == Method::Quadrature {
                        Method::Quadrature
                    } else {
                        Method::ClosedForm
                    };
                    let mom = Moment {
                        value: l.value * r.value,
                        abs_error: l.value * r.abs_error + r.value * l.abs_error + l.abs_error * r.abs_error,
                        method,
                    };
                    (a, mom)
                })
                .collect()
        }
        _ => indices
            .into_par_iter()
            .map(|a| monomial_norm_sq(spec, &a, tol).map(|m| (a, m)))
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(MomentTable {
        domain: spec.clone(),
        domain_hash: spec.domain_hash(),
        degree_cap: cap,
        entries: entries.into_iter().collect(),
        excluded,
    })
}

/// Table restricted to the monomials `z_j^k`, `|k| <= cap`, of one coordinate.
///
/// For a Reinhardt domain these are the only terms of the kernel that survive
/// when every other coordinate of `z` (or `w`) is zero.
pub fn build_axis_table(spec: &DomainSpec, axis: usize, cap: usize, tol: f64) -> Result<MomentTable> {
    spec.validate()?;
    let n = spec.dim();
    if axis >= n {
        return Err(Error::DimensionMismatch { expected: n, got: axis + 1 });
    }
    let laurent = laurent_coordinates(spec)[axis];
    let lo = if laurent { -(cap as i32) } else { 0 };
    let (indices, excluded): (Vec<_>, Vec<_>) =
        (lo..=cap as i32).map(|k| MultiIndex::axis(n, axis, k)).partition(|a| admissible(spec, a));
    let entries: Vec<(MultiIndex, Moment)> = match spec {
        DomainSpec::Anh { .. } | DomainSpec::Alg { .. } => {
            let region = spec.radial_region()?;
            let raw: Vec<Vec<i32>> = indices.iter().map(|a| a.0.clone()).collect();
            let vals = radial_quadrature(&region, &raw, tol)?;
            indices
                .into_iter()
                .zip(vals)
                .map(|(a, (value, abs_error))| (a, Moment { value, abs_error, method: Method::Quadrature }))
                .collect()
        }
        _ => indices
            .into_par_iter()
            .map(|a| monomial_norm_sq(spec, &a, tol).map(|m| (a, m)))
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(MomentTable {
        domain: spec.clone(),
        domain_hash: spec.domain_hash(),
        degree_cap: cap,
        entries: entries.into_iter().collect(),
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[i32]) -> MultiIndex {
        MultiIndex(v.to_vec())
    }

    #[test]
    fn disk_constant_term() {
        let m = monomial_norm_sq(&DomainSpec::UnitDisk, &mi(&[0]), 1e-12).unwrap();
        assert!((m.value - PI).abs() < 1e-15);
        assert_eq!(m.method, Method::ClosedForm);
    }

    #[test]
    fn weighted_disk_q2() {
        let m = monomial_norm_sq(&DomainSpec::WeightedDisk { q: 2.0 }, &mi(&[0]), 1e-12).unwrap();
        assert!((m.value - PI / 6.0).abs() < 1e-14);
    }

    #[test]
    fn annulus_half_constant_and_log_terms() {
        let spec = DomainSpec::Annulus { inner: 0.5 };
        let m = monomial_norm_sq(&spec, &mi(&[0]), 1e-12).unwrap();
        assert!((m.value - 3.0 * PI / 4.0).abs() < 1e-14);
        let m = monomial_norm_sq(&spec, &mi(&[-1]), 1e-12).unwrap();
        assert!((m.value - 2.0 * PI * 2f64.ln()).abs() < 1e-14);
        // k = -2: 2 pi int_{1/2}^1 r^{-3} dr = pi (4 - 1)
        let m = monomial_norm_sq(&spec, &mi(&[-2]), 1e-12).unwrap();
        assert!((m.value - 3.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn counterexample_moments() {
        let spec = DomainSpec::Counterexample;
        let m = monomial_norm_sq(&spec, &mi(&[0, 1]), 1e-12).unwrap();
        assert!((m.value - PI * PI / 6.0).abs() < 1e-13);
        assert!(matches!(monomial_norm_sq(&spec, &mi(&[0, 0]), 1e-12), Err(Error::Inadmissible { .. })));
        assert!(matches!(monomial_norm_sq(&spec, &mi(&[2, 2]), 1e-12), Err(Error::Inadmissible { .. })));
    }

    #[test]
    fn disk_table_entries() {
        let t = build_table(&DomainSpec::UnitDisk, 3, 1e-12).unwrap();
        assert_eq!(t.len(), 4);
        for k in 0..=3 {
            let m = t.get(&mi(&[k])).unwrap();
            assert!((m.value - 2.0 * PI / (2.0 * k as f64 + 2.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn annulus_table_has_laurent_indices() {
        let t = build_table(&DomainSpec::Annulus { inner: 0.5 }, 3, 1e-12).unwrap();
        let keys: Vec<i32> = t.entries.keys().map(|a| a.0[0]).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(sorted, vec![-3, -2, -1, 0, 1, 2, 3]);
    }

    #[test]
    fn counterexample_table_mask() {
        let t = build_table(&DomainSpec::Counterexample, 4, 1e-12).unwrap();
        assert!(t.entries.keys().all(|a| a.0[1] > a.0[0]));
        assert!(t.excluded.contains(&mi(&[0, 0])));
        assert!(t.excluded.contains(&mi(&[1, 1])));
        assert!(t.excluded.contains(&mi(&[4, 0])));
        // b > a, a + b <= 4: (0,1..4), (1,2), (1,3)
        assert_eq!(t.len(), 6);
    }

    #[test]
    fn hartogs_matches_egg_when_fibre_exponent_is_one() {
        // HartogsOverDisk(2) and Egg(1,1) are the same set
        let h = DomainSpec::HartogsOverDisk { q: 2.0 };
        let e = DomainSpec::egg(&[1.0, 1.0]);
        for alpha in [[0, 0], [3, 1], [1, 4]] {
            let a = monomial_norm_sq(&h, &mi(&alpha), 1e-12).unwrap().value;
            let b = monomial_norm_sq(&e, &mi(&alpha), 1e-12).unwrap().value;
            assert!((a / b - 1.0).abs() < 1e-12, "{alpha:?}");
        }
    }

    #[test]
    fn egg_quadrature_matches_closed_form() {
        let spec = DomainSpec::egg(&[1.0, 1.5]);
        let region = spec.radial_region().unwrap();
        let alphas: Vec<Vec<i32>> = index_set(&spec, 6).0.into_iter().map(|a| a.0).collect();
        let quad = radial_quadrature(&region, &alphas, 1e-11).unwrap();
        for (a, (v, _)) in alphas.iter().zip(quad) {
            let c = monomial_norm_sq(&spec, &MultiIndex(a.clone()), 1e-12).unwrap().value;
            assert!((v / c - 1.0).abs() < 1e-8, "{a:?}: {v} vs {c}");
        }
    }

    #[test]
    fn weighted_radial_t0_is_disk() {
        let spec = DomainSpec::weighted_radial(DomainSpec::UnitDisk, 0.0);
        for k in 0..10 {
            let m = monomial_norm_sq(&spec, &mi(&[k]), 1e-12).unwrap().value;
            assert!((m - PI / (k as f64 + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn weighted_radial_ball_matches_direct_formula() {
        // ball in C^2, weight e^{-t|z|}, alpha = (1, 0):
        // sphere factor S = (2+4) pi^2 1!/3! = pi^2, radial int_0^1 r^5 e^{-t r} dr
        let t = 3.0;
        let spec = DomainSpec::weighted_radial(DomainSpec::ball(2), t);
        let m = monomial_norm_sq(&spec, &mi(&[1, 0]), 1e-12).unwrap().value;
        let (radial, _, _) = integrate(|r: f64| r.powi(5) * (-t * r).exp(), 0.0, 1.0, QuadOptions::rel(1e-13));
        assert!((m / (PI * PI * radial) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn product_factors() {
        let spec = DomainSpec::product(DomainSpec::UnitDisk, DomainSpec::Annulus { inner: 0.5 });
        let t = build_table(&spec, 2, 1e-12).unwrap();
        let m = t.get(&mi(&[0, -1])).unwrap();
        assert!((m.value - PI * 2.0 * PI * 2f64.ln()).abs() < 1e-12);
        assert!(!admissible(&spec, &mi(&[-1, 0])));
    }

    #[test]
    fn axis_table_matches_full_table() {
        let spec = DomainSpec::Anh { k: 2 };
        let full = build_table(&spec, 4, 1e-10).unwrap();
        let axis = build_axis_table(&spec, 1, 4, 1e-10).unwrap();
        for (a, m) in &axis.entries {
            let f = full.get(a).unwrap();
            assert!((m.value / f.value - 1.0).abs() < 1e-9);
        }
    }
}
