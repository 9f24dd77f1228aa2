//! Gamma/Beta helpers used by the closed-form moment formulas.

use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;
use twofloat::TwoFloat;

/// `ln B(a, b)` together with an estimate of its absolute rounding error.
pub fn ln_beta_with_err(a: f64, b: f64) -> (f64, f64) {
    let (la, lb, lab) = (ln_gamma(a), ln_gamma(b), ln_gamma(a + b));
    let err = 8.0 * f64::EPSILON * (la.abs() + lb.abs() + lab.abs() + 1.0);
    (la + lb - lab, err)
}

pub fn beta(a: f64, b: f64) -> f64 {
    ln_beta_with_err(a, b).0.exp()
}

/// `B(2k+2, q+1)` for `k = 0..=kmax` by the exact ratio recurrence
/// `B(x+2, y) / B(x, y) = x(x+1) / ((x+y)(x+y+1))`.
pub fn disk_beta_sequence(q: f64, kmax: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    let mut b = 1.0 / ((q + 1.0) * (q + 2.0));
    for k in 0..=kmax {
        out.push(b);
        let x = 2.0 * k as f64 + 2.0;
        b *= x * (x + 1.0) / ((x + q + 1.0) * (x + q + 2.0));
    }
    out
}

/// `2 pi B(2k+2, q+1)`, correctly rounded up to a few ulps: the ratio
/// recurrence of [`disk_beta_sequence`] carried out in double-double.
pub fn weighted_disk_norm(q: f64, k: u32) -> f64 {
    let one = TwoFloat::from(1.0);
    let q1 = TwoFloat::from(q) + one;
    let mut b = one / (q1 * (q1 + one));
    for j in 0..k {
        let x = TwoFloat::from(2.0 * j as f64 + 2.0);
        b = b * (x * (x + one)) / ((x + q1) * (x + q1 + one));
    }
    f64::from(b * twofloat::consts::TAU)
}

/// Squared norm of `z^alpha` on `{ sum_j |z_j|^{e_j} < 1 }` by the Dirichlet
/// integral, as `(value, relative_error)`.
///
/// With `u_j = r_j^{e_j}` the radial integral becomes a simplex integral, so
/// `||z^alpha||^2 = (2 pi)^n prod_j Gamma(beta_j) / e_j / Gamma(1 + sum beta_j)`
/// where `beta_j = (2 alpha_j + 2) / e_j`.
pub fn egg_moment(exponents: &[f64], alpha: &[i32]) -> (f64, f64) {
    debug_assert_eq!(exponents.len(), alpha.len());
    let n = exponents.len() as f64;
    let mut log = n * (2.0 * PI).ln();
    let mut err = 0.0;
    let mut sum_beta = 0.0;
    for (&e, &a) in exponents.iter().zip(alpha) {
        let b = (2.0 * a as f64 + 2.0) / e;
        let lg = ln_gamma(b);
        log += lg - e.ln();
        err += lg.abs() + e.ln().abs();
        sum_beta += b;
    }
    let lg = ln_gamma(1.0 + sum_beta);
    log -= lg;
    err += lg.abs() + log.abs() + 1.0;
    (log.exp(), 8.0 * f64::EPSILON * err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_small_integer_values() {
        assert!((beta(2.0, 2.0) - 1.0 / 6.0).abs() < 1e-15);
        assert!((beta(2.0, 3.0) - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn recurrence_matches_gamma_route() {
        for &q in &[0.5, 1.0, 2.0, 3.7, 14.0] {
            let seq = disk_beta_sequence(q, 60);
            for (k, &b) in seq.iter().enumerate() {
                let direct = beta(2.0 * k as f64 + 2.0, q + 1.0);
                assert!((b / direct - 1.0).abs() < 1e-12, "q={q} k={k}");
            }
        }
    }

    #[test]
    fn egg_reduces_to_disk_and_ball() {
        let (v, _) = egg_moment(&[2.0], &[3]);
        assert!((v - 2.0 * PI / 8.0).abs() < 1e-14);
        // ball in C^2: pi^2 a! b! / (a+b+2)!
        let (v, _) = egg_moment(&[2.0, 2.0], &[1, 2]);
        assert!((v - PI * PI * 2.0 / 120.0).abs() < 1e-14);
    }

    #[test]
    fn weighted_disk_norm_matches_sequence() {
        assert!((weighted_disk_norm(2.0, 0) - PI / 6.0).abs() < 1e-16);
        let seq = disk_beta_sequence(1.5, 60);
        for (k, b) in seq.iter().enumerate() {
            let v = weighted_disk_norm(1.5, k as u32);
            assert!((v - 2.0 * PI * b).abs() <= 1e-13 * v);
        }
    }
}
