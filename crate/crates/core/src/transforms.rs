//! Numerical checks of the kernel identities: biholomorphic transformation
//! rule, the proper-map identity for branched covers, the Riemann-map
//! derivative, the Bergman metric, representative coordinates and the
//! extremal characterisation of `K(w, w)`.
//!
//! Derivatives are central differences on kernel values with one level of
//! Richardson extrapolation. Mixed `d/dz_j d/dconj(w_k)` derivatives perturb
//! `z` and `w` independently: a real step `h` on `w_k` moves `conj(w_k)` by the
//! same `h`, so the difference quotient is the antiholomorphic derivative.

use crate::error::{Error, Result};
use crate::kernels::KernelEvaluator;
use crate::moments::MomentTable;
use crate::quadrature::{integrate, QuadOptions};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Finite-difference step for kernel derivatives.
pub const FD_STEP: f64 = 1e-4;

type C = Complex64;

/// Catalog of holomorphic maps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HoloMap {
    Identity {
        n: usize,
    },
    /// Disk automorphism `(z - a) / (1 - conj(a) z)`.
    Mobius {
        a: C,
    },
    /// `z -> z^2`, a 2-sheeted branched cover of the disk over itself.
    Squaring,
    /// `z_j -> c_j z_j`.
    Scaling {
        factors: Vec<C>,
    },
}

impl HoloMap {
    pub fn dim(&self) -> usize {
        match self {
            HoloMap::Identity { n } => *n,
            HoloMap::Mobius { .. } | HoloMap::Squaring => 1,
            HoloMap::Scaling { factors } => factors.len(),
        }
    }

    pub fn apply(&self, z: &[C]) -> Vec<C> {
        match self {
            HoloMap::Identity { .. } => z.to_vec(),
            HoloMap::Mobius { a } => vec![(z[0] - a) / (C::new(1.0, 0.0) - a.conj() * z[0])],
            HoloMap::Squaring => vec![z[0] * z[0]],
            HoloMap::Scaling { factors } => z.iter().zip(factors).map(|(x, c)| x * c).collect(),
        }
    }

    /// `det f'(z)`.
    pub fn jacobian_det(&self, z: &[C]) -> C {
        match self {
            HoloMap::Identity { .. } => C::new(1.0, 0.0),
            HoloMap::Mobius { a } => {
                let d = C::new(1.0, 0.0) - a.conj() * z[0];
                C::new(1.0 - a.norm_sqr(), 0.0) / (d * d)
            }
            HoloMap::Squaring => z[0] * 2.0,
            HoloMap::Scaling { factors } => factors.iter().product(),
        }
    }

    /// The local inverses at `w` with `det` of their derivative at `w`.
    pub fn local_inverses(&self, w: &[C]) -> Result<Vec<(Vec<C>, C)>> {
        match self {
            HoloMap::Identity { .. } => Ok(vec![(w.to_vec(), C::new(1.0, 0.0))]),
            HoloMap::Mobius { a } => {
                let inv = HoloMap::Mobius { a: -a };
                Ok(vec![(inv.apply(w), inv.jacobian_det(w))])
            }
            HoloMap::Squaring => {
                if w[0].norm() == 0.0 {
                    return Err(Error::BranchLocus);
                }
                let r = w[0].sqrt();
                Ok(vec![(vec![r], (r * 2.0).inv()), (vec![-r], (-r * 2.0).inv())])
            }
            HoloMap::Scaling { factors } => {
                let z = w.iter().zip(factors).map(|(x, c)| x / c).collect();
                Ok(vec![(z, factors.iter().product::<C>().inv())])
            }
        }
    }
}

/// Largest residual over a sample set, next to the error budget it should respect.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub max_residual: f64,
    /// Largest combined evaluation error bound seen over the samples.
    pub max_tail_bound: f64,
    /// Largest `residual - tail_bound` over the samples.
    pub max_excess: f64,
    pub samples: usize,
}

impl Residual {
    fn new() -> Self {
        Self { max_residual: 0.0, max_tail_bound: 0.0, max_excess: f64::NEG_INFINITY, samples: 0 }
    }

    fn push(&mut self, residual: f64, tail: f64) {
        self.max_residual = self.max_residual.max(residual);
        self.max_tail_bound = self.max_tail_bound.max(tail);
        self.max_excess = self.max_excess.max(residual - tail);
        self.samples += 1;
    }
}

/// `max |K1(z,w) - det f'(z) K2(f(z), f(w)) conj(det f'(w))|` over the samples.
pub fn transformation_residual(
    f: &HoloMap,
    k1: &KernelEvaluator,
    k2: &KernelEvaluator,
    samples: &[(Vec<C>, Vec<C>)],
) -> Result<Residual> {
    let mut out = Residual::new();
    for (z, w) in samples {
        let lhs = k1.eval(z, w)?;
        let (jz, jw) = (f.jacobian_det(z), f.jacobian_det(w));
        let rhs = k2.eval(&f.apply(z), &f.apply(w))?;
        let factor = jz * jw.conj();
        let residual = (lhs.value - factor * rhs.value).norm();
        out.push(residual, lhs.tail_bound + factor.norm() * rhs.tail_bound);
    }
    Ok(out)
}

/// Residual of the proper-map identity
/// `sum_k K1(z, f_k^{-1}(w)) conj(det (f_k^{-1})'(w)) = det f'(z) K2(f(z), w)`.
pub fn bell_residual(
    f: &HoloMap,
    k1: &KernelEvaluator,
    k2: &KernelEvaluator,
    samples: &[(Vec<C>, Vec<C>)],
) -> Result<Residual> {
    let mut out = Residual::new();
    for (z, w) in samples {
        let mut lhs = C::new(0.0, 0.0);
        let mut tail = 0.0;
        for (pre, d) in f.local_inverses(w)? {
            let v = k1.eval(z, &pre)?;
            lhs += v.value * d.conj();
            tail += v.tail_bound * d.norm();
        }
        let jz = f.jacobian_det(z);
        let rhs = k2.eval(&f.apply(z), w)?;
        out.push((lhs - jz * rhs.value).norm(), tail + jz.norm() * rhs.tail_bound);
    }
    Ok(out)
}

fn require_positive_diagonal(k: &KernelEvaluator, a: &[C]) -> Result<f64> {
    let v = k.eval(a, a)?;
    if v.value.re <= v.tail_bound || v.value.re <= 0.0 {
        return Err(Error::DiagonalZero);
    }
    Ok(v.value.re)
}

/// Derivative of the Riemann map onto the unit disk taking `a` to 0:
/// `K(z, a) sqrt(pi / K(a, a))`.
pub fn riemann_derivative(k: &KernelEvaluator, a: C, z: C) -> Result<C> {
    if !k.is_planar() {
        return Err(Error::Unsupported {
            variant: k.domain().variant_name().into(),
            what: "Riemann map extraction needs a planar domain".into(),
        });
    }
    let kaa = require_positive_diagonal(k, &[a])?;
    Ok(k.eval(&[z], &[a])?.value * (PI / kaa).sqrt())
}

fn shifted(p: &[C], j: usize, h: f64) -> Vec<C> {
    let mut q = p.to_vec();
    q[j] += h;
    q
}

fn richardson(f: impl Fn(f64) -> Result<C>, h: f64) -> Result<C> {
    let coarse = f(h)?;
    let fine = f(h / 2.0)?;
    Ok((fine * 4.0 - coarse) / 3.0)
}

/// `d K(z, w) / d z_j`.
fn d_z(k: &KernelEvaluator, z: &[C], w: &[C], j: usize, h: f64) -> Result<C> {
    richardson(|h| Ok((k.eval(&shifted(z, j, h), w)?.value - k.eval(&shifted(z, j, -h), w)?.value) / (2.0 * h)), h)
}

/// `d K(z, w) / d conj(w_k)`.
fn d_wbar(k: &KernelEvaluator, z: &[C], w: &[C], j: usize, h: f64) -> Result<C> {
    richardson(|h| Ok((k.eval(z, &shifted(w, j, h))?.value - k.eval(z, &shifted(w, j, -h))?.value) / (2.0 * h)), h)
}

/// `d^2 K(z, w) / d z_j d conj(w_k)`.
fn d_z_wbar(k: &KernelEvaluator, z: &[C], w: &[C], j: usize, l: usize, h: f64) -> Result<C> {
    richardson(
        |h| {
            let pp = k.eval(&shifted(z, j, h), &shifted(w, l, h))?.value;
            let pm = k.eval(&shifted(z, j, h), &shifted(w, l, -h))?.value;
            let mp = k.eval(&shifted(z, j, -h), &shifted(w, l, h))?.value;
            let mm = k.eval(&shifted(z, j, -h), &shifted(w, l, -h))?.value;
            Ok((pp - pm - mp + mm) / (4.0 * h * h))
        },
        h,
    )
}

/// Bergman metric `g_{jk} = d^2/(dz_j dconj(z_k)) log K(z, z)` as a row-major matrix.
pub fn bergman_metric(k: &KernelEvaluator, z: &[C]) -> Result<Vec<Vec<C>>> {
    bergman_metric_with_step(k, z, FD_STEP)
}

pub fn bergman_metric_with_step(k: &KernelEvaluator, z: &[C], h: f64) -> Result<Vec<Vec<C>>> {
    let n = k.dim();
    let kzz = C::new(require_positive_diagonal(k, z)?, 0.0);
    let dz: Vec<C> = (0..n).map(|j| d_z(k, z, z, j, h)).collect::<Result<_>>()?;
    let dw: Vec<C> = (0..n).map(|j| d_wbar(k, z, z, j, h)).collect::<Result<_>>()?;
    let mut g = vec![vec![C::new(0.0, 0.0); n]; n];
    for j in 0..n {
        for l in 0..n {
            let mixed = d_z_wbar(k, z, z, j, l, h)?;
            g[j][l] = (kzz * mixed - dz[j] * dw[l]) / (kzz * kzz);
        }
    }
    Ok(g)
}

/// Inverse of a small complex matrix by Gauss-Jordan elimination with partial pivoting.
pub fn invert(m: &[Vec<C>]) -> Option<Vec<Vec<C>>> {
    let n = m.len();
    let mut a: Vec<Vec<C>> = m.to_vec();
    let mut inv: Vec<Vec<C>> =
        (0..n).map(|i| (0..n).map(|j| C::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))?;
        if a[piv][col].norm() == 0.0 {
            return None;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let d = a[col][col];
        for j in 0..n {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                for j in 0..n {
                    let (ac, ic) = (a[col][j], inv[col][j]);
                    a[r][j] -= f * ac;
                    inv[r][j] -= f * ic;
                }
            }
        }
    }
    Some(inv)
}

/// Bergman representative coordinates based at `a`, evaluated at `z`:
/// `T_j(z) = sum_k ginv[k][j] (d_{conj w_k} log K(z, w) - d_{conj w_k} log K(w, w))` at `w = a`,
/// where `ginv` is the matrix inverse of `g(a)` indexed as `ginv[k][j]`.
pub fn representative_coordinates(k: &KernelEvaluator, a: &[C], z: &[C]) -> Result<Vec<C>> {
    let g = bergman_metric(k, a)?;
    let ginv = invert(&g).ok_or(Error::DiagonalZero)?;
    representative_with_inverse(k, &ginv, a, z)
}

fn representative_with_inverse(k: &KernelEvaluator, ginv: &[Vec<C>], a: &[C], z: &[C]) -> Result<Vec<C>> {
    let n = k.dim();
    let kza = k.eval(z, a)?;
    if kza.value.norm() <= kza.tail_bound || kza.value.norm() == 0.0 {
        return Err(Error::KernelZero);
    }
    let kaa = k.eval(a, a)?.value;
    let diff: Vec<C> = (0..n)
        .map(|l| Ok(d_wbar(k, z, a, l, FD_STEP)? / kza.value - d_wbar(k, a, a, l, FD_STEP)? / kaa))
        .collect::<Result<_>>()?;
    Ok((0..n).map(|j| (0..n).map(|l| ginv[l][j] * diff[l]).sum()).collect())
}

/// Complex Jacobian `dT_j / dz_l` of the representative coordinates at the base point.
pub fn representative_jacobian(k: &KernelEvaluator, a: &[C], h: f64) -> Result<Vec<Vec<C>>> {
    let n = k.dim();
    let g = bergman_metric(k, a)?;
    let ginv = invert(&g).ok_or(Error::DiagonalZero)?;
    let mut jac = vec![vec![C::new(0.0, 0.0); n]; n];
    for l in 0..n {
        let col = |h: f64| -> Result<Vec<C>> {
            let p = representative_with_inverse(k, &ginv, a, &shifted(a, l, h))?;
            let m = representative_with_inverse(k, &ginv, a, &shifted(a, l, -h))?;
            Ok(p.iter().zip(&m).map(|(x, y)| (x - y) / (2.0 * h)).collect())
        };
        let coarse = col(h)?;
        let fine = col(h / 2.0)?;
        for j in 0..n {
            jac[j][l] = (fine[j] * 4.0 - coarse[j]) / 3.0;
        }
    }
    Ok(jac)
}

fn abs_power_sq(w: &[C], alpha: &[i32]) -> f64 {
    w.iter().zip(alpha).map(|(x, &a)| x.norm_sqr().powi(a)).product()
}

/// Partial sums `S_N = sum_{|alpha| <= N} |w^alpha|^2 / ||z^alpha||^2` for `N = 0..=n_max`.
pub fn extremal_diag(table: &MomentTable, w: &[C], n_max: usize) -> Result<Vec<f64>> {
    if w.len() != table.dim() {
        return Err(Error::DimensionMismatch { expected: table.dim(), got: w.len() });
    }
    if !table.domain.contains(w)? {
        return Err(Error::PointOutside);
    }
    let cap = n_max.min(table.degree_cap);
    let mut per_degree = vec![0.0; cap + 1];
    for (a, m) in &table.entries {
        let d = a.degree();
        if d <= cap {
            per_degree[d] += abs_power_sq(w, &a.0) / m.value;
        }
    }
    let mut acc = 0.0;
    Ok(per_degree
        .into_iter()
        .map(|b| {
            acc += b;
            acc
        })
        .collect())
}

/// The truncated maximiser `f = sum_{|alpha| <= N} conj(phi_alpha(w)) phi_alpha` and its norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalCheck {
    /// `f(w)`, which equals `S_N`.
    pub value_at_w: f64,
    /// `int |f|^2` by orthogonality of the monomials.
    pub norm_sq: f64,
    /// `int |f|^2` by direct polar quadrature (planar disks only).
    pub norm_sq_quadrature: Option<f64>,
}

pub fn extremal_constraint_check(table: &MomentTable, w: &[C], n: usize) -> Result<ExtremalCheck> {
    let terms: Vec<(Vec<i32>, C, f64)> = table
        .entries
        .iter()
        .filter(|(a, _)| a.degree() <= n)
        .map(|(a, m)| {
            let wa: C = w.iter().zip(&a.0).map(|(x, &k)| x.powi(k)).product();
            (a.0.clone(), wa.conj() / m.value, m.value)
        })
        .collect();
    let value_at_w: C = terms.iter().map(|(a, c, _)| w.iter().zip(a).map(|(x, &k)| x.powi(k)).product::<C>() * c).sum();
    let norm_sq = terms.iter().map(|(_, c, m)| c.norm_sqr() * m).sum();
    let norm_sq_quadrature = match &table.domain {
        crate::DomainSpec::UnitDisk | crate::DomainSpec::Disk { .. } => {
            let radius = table.domain.radial_bounds()[0];
            // |f|^2 on a circle is a trigonometric polynomial of degree <= n,
            // so the periodic trapezoid rule with 2n + 2 nodes is exact in theta
            let nodes = 2 * n + 2;
            let f_abs2 = |r: f64| {
                let mut s = 0.0;
                for i in 0..nodes {
                    let z = C::from_polar(r, 2.0 * PI * i as f64 / nodes as f64);
                    let v: C = terms.iter().map(|(a, c, _)| z.powi(a[0]) * c).sum();
                    s += v.norm_sqr();
                }
                s * 2.0 * PI / nodes as f64 * r
            };
            let (v, _, _) = integrate(f_abs2, 0.0, radius, QuadOptions::rel(1e-13));
            Some(v)
        }
        _ => None,
    };
    Ok(ExtremalCheck { value_at_w: value_at_w.re, norm_sq, norm_sq_quadrature })
}
