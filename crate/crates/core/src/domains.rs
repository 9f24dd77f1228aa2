//! Catalog of supported domains.
//!
//! Every catalog entry is a Reinhardt domain: membership depends only on the
//! moduli `(|z_1|, ..., |z_n|)`. [`DomainSpec::radial_indicator`] is the
//! predicate on those moduli and is the single source of truth for
//! membership; [`DomainSpec::contains`] just takes absolute values first.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use std::f64::consts::PI;

/// Largest dimension accepted by the catalog.
pub const MAX_DIM: usize = 4;

/// Symbolic description of a (possibly weighted) domain.
///
/// Serialises to `{"variant": "...", "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Value", into = "Value")]
pub enum DomainSpec {
    UnitDisk,
    Disk {
        radius: f64,
    },
    Ball {
        n: usize,
    },
    Polydisk {
        radii: Vec<f64>,
    },
    /// `{ inner < |z| < 1 }`
    Annulus {
        inner: f64,
    },
    /// `{ sum_j |z_j|^{e_j} < 1 }`
    Egg {
        exponents: Vec<f64>,
    },
    /// `{ |z_2| < 1 / (1 + |z_1|) }`, unbounded in `z_1`.
    Counterexample,
    /// `|z2|^{2k}(1+|z1|)^{2k} + |z2|^{2k}(1-|z1|)^{2k} + ((|z1|^2+|z2|^2)/k)^k < 1`
    Anh {
        k: u32,
    },
    /// `(|z1|^2+|z2|^2+|z3|^2)^{2k} + sum over all 8 sign patterns (±|z1| ±|z2| ±|z3|)^{2k} < 1`
    Alg {
        k: u32,
    },
    Product {
        left: Box<DomainSpec>,
        right: Box<DomainSpec>,
    },
    /// Unit disk with weight `(1 - |z|)^q`.
    WeightedDisk {
        q: f64,
    },
    /// Unit disk or ball with weight `exp(-t ||z||)`.
    WeightedRadial {
        base: Box<DomainSpec>,
        t: f64,
    },
    /// `{ (z, z2) : |z| < 1, |z2| < (1 - |z|)^{q/2} }`
    HartogsOverDisk {
        q: f64,
    },
}

/// The image of a Reinhardt domain in the closed positive orthant of moduli.
#[derive(Debug, Clone)]
pub struct RadialRegion {
    spec: DomainSpec,
    /// Per-coordinate supremum of `r_j` over the region (`INFINITY` if unbounded).
    pub bounds: Vec<f64>,
    /// Complete Reinhardt: the indicator is monotone decreasing in each `r_j`.
    pub complete: bool,
}

impl RadialRegion {
    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn indicator(&self, r: &[f64]) -> bool {
        self.spec.radial_indicator(r)
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    /// For a complete region: `sup { x : (prefix, x, 0, ..., 0) in region }`.
    ///
    /// Found by bisection on the indicator, so it is accurate to a few ulps
    /// of the bound. Returns 0 when the prefix itself is outside.
    pub fn extent_after(&self, prefix: &[f64]) -> f64 {
        debug_assert!(self.complete);
        let n = self.dim();
        let j = prefix.len();
        let mut r = vec![0.0; n];
        r[..j].copy_from_slice(prefix);
        if !self.indicator(&r) {
            return 0.0;
        }
        let mut lo = 0.0;
        let mut hi = self.bounds[j];
        if !hi.is_finite() {
            hi = 1.0;
            loop {
                r[j] = hi;
                if !self.indicator(&r) {
                    break;
                }
                lo = hi;
                hi *= 2.0;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            r[j] = mid;
            if self.indicator(&r) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!("{name} must be a positive real, got {x}")))
    }
}

/// Axis extent of a monotone 1-D predicate by doubling and bisection.
fn axis_extent(inside: impl Fn(f64) -> bool) -> f64 {
    if !inside(0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while inside(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return f64::INFINITY;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn anh_value(k: u32, r1: f64, r2: f64) -> f64 {
    let k2 = 2 * k as i32;
    let a = (r2 * (1.0 + r1)).powi(k2);
    let b = (r2 * (1.0 - r1)).powi(k2);
    let c = ((r1 * r1 + r2 * r2) / k as f64).powi(k as i32);
    a + b + c
}

fn alg_value(k: u32, r: &[f64]) -> f64 {
    let k2 = 2 * k as i32;
    let norm2: f64 = r.iter().map(|x| x * x).sum();
    let mut total = norm2.powi(k2);
    for signs in 0..8u32 {
        let mut s = 0.0;
        for (j, &x) in r.iter().enumerate() {
            s += if signs >> j & 1 == 1 { -x } else { x };
        }
        total += s.powi(k2);
    }
    total
}

impl DomainSpec {
    pub fn ball(n: usize) -> Self {
        DomainSpec::Ball { n }
    }

    pub fn egg(exponents: &[f64]) -> Self {
        DomainSpec::Egg { exponents: exponents.to_vec() }
    }

    pub fn product(left: DomainSpec, right: DomainSpec) -> Self {
        DomainSpec::Product { left: Box::new(left), right: Box::new(right) }
    }

    pub fn weighted_radial(base: DomainSpec, t: f64) -> Self {
        DomainSpec::WeightedRadial { base: Box::new(base), t }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            DomainSpec::UnitDisk => "UnitDisk",
            DomainSpec::Disk { .. } => "Disk",
            DomainSpec::Ball { .. } => "Ball",
            DomainSpec::Polydisk { .. } => "Polydisk",
            DomainSpec::Annulus { .. } => "Annulus",
            DomainSpec::Egg { .. } => "Egg",
            DomainSpec::Counterexample => "Counterexample",
            DomainSpec::Anh { .. } => "Anh",
            DomainSpec::Alg { .. } => "Alg",
            DomainSpec::Product { .. } => "Product",
            DomainSpec::WeightedDisk { .. } => "WeightedDisk",
            DomainSpec::WeightedRadial { .. } => "WeightedRadial",
            DomainSpec::HartogsOverDisk { .. } => "HartogsOverDisk",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::UnitDisk
            | DomainSpec::Disk { .. }
            | DomainSpec::Annulus { .. }
            | DomainSpec::WeightedDisk { .. } => 1,
            DomainSpec::Ball { n } => *n,
            DomainSpec::Polydisk { radii } => radii.len(),
            DomainSpec::Egg { exponents } => exponents.len(),
            DomainSpec::Counterexample | DomainSpec::Anh { .. } | DomainSpec::HartogsOverDisk { .. } => 2,
            DomainSpec::Alg { .. } => 3,
            DomainSpec::Product { left, right } => left.dim() + right.dim(),
            DomainSpec::WeightedRadial { base, .. } => base.dim(),
        }
    }

    /// Checks the parameter invariants of the variant.
    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::UnitDisk | DomainSpec::Counterexample => {}
            DomainSpec::Disk { radius } => positive("radius", *radius)?,
            DomainSpec::Ball { n } => {
                if *n == 0 {
                    return Err(Error::InvalidParameters("ball dimension must be >= 1".into()));
                }
            }
            DomainSpec::Polydisk { radii } => {
                if radii.is_empty() {
                    return Err(Error::InvalidParameters("polydisk needs at least one radius".into()));
                }
                for r in radii {
                    positive("radius", *r)?;
                }
            }
            DomainSpec::Annulus { inner } => {
                if !(*inner > 0.0 && *inner < 1.0) {
                    return Err(Error::InvalidParameters(format!(
                        "annulus inner radius must lie in (0, 1), got {inner}"
                    )));
                }
            }
            DomainSpec::Egg { exponents } => {
                if exponents.is_empty() {
                    return Err(Error::InvalidParameters("egg needs at least one exponent".into()));
                }
                for e in exponents {
                    positive("exponent", *e)?;
                }
            }
            DomainSpec::Anh { k } | DomainSpec::Alg { k } => {
                if *k == 0 {
                    return Err(Error::InvalidParameters("k must be a positive integer".into()));
                }
            }
            DomainSpec::Product { left, right } => {
                left.validate()?;
                right.validate()?;
                if matches!(**left, DomainSpec::WeightedDisk { .. } | DomainSpec::WeightedRadial { .. })
                    || matches!(**right, DomainSpec::WeightedDisk { .. } | DomainSpec::WeightedRadial { .. })
                {
                    return Err(Error::InvalidParameters("product factors must be unweighted".into()));
                }
            }
            DomainSpec::WeightedDisk { q } | DomainSpec::HartogsOverDisk { q } => positive("q", *q)?,
            DomainSpec::WeightedRadial { base, t } => {
                if !matches!(**base, DomainSpec::UnitDisk | DomainSpec::Ball { .. }) {
                    return Err(Error::InvalidParameters("weighted radial base must be UnitDisk or Ball".into()));
                }
                base.validate()?;
                if !(t.is_finite() && *t >= 0.0) {
                    return Err(Error::InvalidParameters(format!("t must be >= 0, got {t}")));
                }
            }
        }
        if self.dim() > MAX_DIM {
            return Err(Error::InvalidParameters(format!(
                "dimension {} exceeds the catalog cap {MAX_DIM}",
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            DomainSpec::Counterexample => false,
            DomainSpec::Product { left, right } => left.is_bounded() && right.is_bounded(),
            _ => true,
        }
    }

    /// Whether the radial indicator is monotone decreasing in every modulus.
    pub fn is_complete(&self) -> bool {
        match self {
            DomainSpec::Annulus { .. } => false,
            DomainSpec::Product { left, right } => left.is_complete() && right.is_complete(),
            _ => true,
        }
    }

    /// Whether the Lebesgue measure is replaced by a non-trivial weight.
    pub fn is_weighted(&self) -> bool {
        matches!(self, DomainSpec::WeightedDisk { .. } | DomainSpec::WeightedRadial { .. })
    }

    /// Membership predicate on nonnegative moduli `r_j = |z_j|`.
    pub fn radial_indicator(&self, r: &[f64]) -> bool {
        match self {
            DomainSpec::UnitDisk | DomainSpec::WeightedDisk { .. } => r[0] < 1.0,
            DomainSpec::Disk { radius } => r[0] < *radius,
            DomainSpec::Ball { .. } => r.iter().map(|x| x * x).sum::<f64>() < 1.0,
            DomainSpec::Polydisk { radii } => r.iter().zip(radii).all(|(x, rad)| x < rad),
            DomainSpec::Annulus { inner } => *inner < r[0] && r[0] < 1.0,
            DomainSpec::Egg { exponents } => r.iter().zip(exponents).map(|(x, e)| x.powf(*e)).sum::<f64>() < 1.0,
            DomainSpec::Counterexample => r[1] * (1.0 + r[0]) < 1.0,
            DomainSpec::Anh { k } => anh_value(*k, r[0], r[1]) < 1.0,
            DomainSpec::Alg { k } => alg_value(*k, r) < 1.0,
            DomainSpec::Product { left, right } => {
                let m = left.dim();
                left.radial_indicator(&r[..m]) && right.radial_indicator(&r[m..])
            }
            DomainSpec::WeightedRadial { base, .. } => base.radial_indicator(r),
            DomainSpec::HartogsOverDisk { q } => r[0] < 1.0 && r[1] < (1.0 - r[0]).powf(q / 2.0),
        }
    }

    /// Strict membership of a point.
    pub fn contains(&self, z: &[Complex64]) -> Result<bool> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: z.len() });
        }
        let r: Vec<f64> = z.iter().map(|c| c.norm()).collect();
        Ok(self.radial_indicator(&r))
    }

    /// Per-coordinate supremum of the moduli over the domain.
    pub fn radial_bounds(&self) -> Vec<f64> {
        match self {
            DomainSpec::UnitDisk | DomainSpec::WeightedDisk { .. } | DomainSpec::Annulus { .. } => vec![1.0],
            DomainSpec::Disk { radius } => vec![*radius],
            DomainSpec::Ball { n } => vec![1.0; *n],
            DomainSpec::Polydisk { radii } => radii.clone(),
            DomainSpec::Egg { exponents } => vec![1.0; exponents.len()],
            DomainSpec::Counterexample => vec![f64::INFINITY, 1.0],
            DomainSpec::HartogsOverDisk { .. } => vec![1.0, 1.0],
            DomainSpec::Anh { .. } | DomainSpec::Alg { .. } => {
                let n = self.dim();
                (0..n)
                    .map(|j| {
                        axis_extent(|x| {
                            let mut r = vec![0.0; n];
                            r[j] = x;
                            self.radial_indicator(&r)
                        })
                    })
                    .collect()
            }
            DomainSpec::Product { left, right } => {
                let mut b = left.radial_bounds();
                b.extend(right.radial_bounds());
                b
            }
            DomainSpec::WeightedRadial { base, .. } => base.radial_bounds(),
        }
    }

    /// Radial reduction used by the moment engine.
    pub fn radial_region(&self) -> Result<RadialRegion> {
        self.validate()?;
        Ok(RadialRegion { spec: self.clone(), bounds: self.radial_bounds(), complete: self.is_complete() })
    }

    /// Lebesgue volume as `(value, abs_error)`; weights are ignored.
    pub fn volume(&self, tol: f64) -> Result<(f64, f64)> {
        self.validate()?;
        let exact = |v: f64| Ok((v, 4.0 * f64::EPSILON * v));
        match self {
            DomainSpec::UnitDisk | DomainSpec::WeightedDisk { .. } => exact(PI),
            DomainSpec::Disk { radius } => exact(PI * radius * radius),
            DomainSpec::Ball { n } => {
                let fact: f64 = (1..=*n).map(|i| i as f64).product();
                exact(PI.powi(*n as i32) / fact)
            }
            DomainSpec::Polydisk { radii } => exact(radii.iter().map(|r| PI * r * r).product()),
            DomainSpec::Annulus { inner } => exact(PI * (1.0 - inner * inner)),
            DomainSpec::Egg { exponents } => {
                let (v, rel) = crate::special::egg_moment(exponents, &vec![0; exponents.len()]);
                Ok((v, rel * v))
            }
            DomainSpec::HartogsOverDisk { q } => exact(2.0 * PI * PI / ((q + 1.0) * (q + 2.0))),
            DomainSpec::Counterexample => Err(Error::Unbounded(self.variant_name().into())),
            DomainSpec::Anh { .. } | DomainSpec::Alg { .. } => {
                let region = self.radial_region()?;
                let alpha = vec![0; self.dim()];
                let out = crate::moments::radial_quadrature(&region, &[alpha], tol)?;
                Ok(out[0])
            }
            DomainSpec::Product { left, right } => {
                let (a, ea) = left.volume(tol)?;
                let (b, eb) = right.volume(tol)?;
                Ok((a * b, a * eb + b * ea + ea * eb))
            }
            DomainSpec::WeightedRadial { base, .. } => base.volume(tol),
        }
    }

    /// Canonical text form: variant tag plus parameters at 15 significant digits.
    pub fn canonical_key(&self) -> String {
        fn num(x: f64) -> String {
            format!("{x:.14e}")
        }
        fn list(xs: &[f64]) -> String {
            xs.iter().map(|x| num(*x)).collect::<Vec<_>>().join(",")
        }
        let inner = match self {
            DomainSpec::UnitDisk | DomainSpec::Counterexample => String::new(),
            DomainSpec::Disk { radius } => num(*radius),
            DomainSpec::Ball { n } => n.to_string(),
            DomainSpec::Polydisk { radii } => list(radii),
            DomainSpec::Annulus { inner } => num(*inner),
            DomainSpec::Egg { exponents } => list(exponents),
            DomainSpec::Anh { k } | DomainSpec::Alg { k } => k.to_string(),
            DomainSpec::Product { left, right } => format!("{};{}", left.canonical_key(), right.canonical_key()),
            DomainSpec::WeightedDisk { q } | DomainSpec::HartogsOverDisk { q } => num(*q),
            DomainSpec::WeightedRadial { base, t } => format!("{};{}", base.canonical_key(), num(*t)),
        };
        format!("{}({inner})", self.variant_name())
    }

    /// SHA-256 of [`Self::canonical_key`], hex encoded. Keys the moment cache.
    pub fn domain_hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_key().as_bytes()))
    }

    pub fn to_json(&self) -> Value {
        let params = match self {
            DomainSpec::UnitDisk | DomainSpec::Counterexample => json!({}),
            DomainSpec::Disk { radius } => json!({ "radius": radius }),
            DomainSpec::Ball { n } => json!({ "n": n }),
            DomainSpec::Polydisk { radii } => json!({ "radii": radii }),
            DomainSpec::Annulus { inner } => json!({ "inner": inner }),
            DomainSpec::Egg { exponents } => json!({ "exponents": exponents }),
            DomainSpec::Anh { k } | DomainSpec::Alg { k } => json!({ "k": k }),
            DomainSpec::Product { left, right } => json!({ "left": left.to_json(), "right": right.to_json() }),
            DomainSpec::WeightedDisk { q } | DomainSpec::HartogsOverDisk { q } => json!({ "q": q }),
            DomainSpec::WeightedRadial { base, t } => json!({ "base": base.to_json(), "t": t }),
        };
        json!({ "variant": self.variant_name(), "params": params })
    }

    /// Parses and validates a descriptor.
    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |msg: String| Error::InvalidParameters(msg);
        let obj = value.as_object().ok_or_else(|| bad("descriptor must be a JSON object".into()))?;
        let variant =
            obj.get("variant").and_then(Value::as_str).ok_or_else(|| bad("missing string field 'variant'".into()))?;
        let empty = Map::new();
        let params = match obj.get("params") {
            None | Some(Value::Null) => &empty,
            Some(Value::Object(m)) => m,
            Some(_) => return Err(bad("'params' must be an object".into())),
        };
        let real = |name: &str| -> Result<f64> {
            params.get(name).and_then(Value::as_f64).ok_or_else(|| bad(format!("{variant}: missing number '{name}'")))
        };
        let int = |name: &str| -> Result<u64> {
            params
                .get(name)
                .and_then(Value::as_u64)
                .ok_or_else(|| bad(format!("{variant}: missing nonnegative integer '{name}'")))
        };
        let reals = |name: &str| -> Result<Vec<f64>> {
            params
                .get(name)
                .and_then(Value::as_array)
                .ok_or_else(|| bad(format!("{variant}: missing array '{name}'")))?
                .iter()
                .map(|v| v.as_f64().ok_or_else(|| bad(format!("{variant}: '{name}' must hold numbers"))))
                .collect()
        };
        let nested = |name: &str| -> Result<Box<DomainSpec>> {
            let v = params.get(name).ok_or_else(|| bad(format!("{variant}: missing descriptor '{name}'")))?;
            Ok(Box::new(DomainSpec::from_json(v)?))
        };
        let small = |name: &str| -> Result<u32> {
            u32::try_from(int(name)?).map_err(|_| bad(format!("{variant}: '{name}' too large")))
        };
        let spec = match variant {
            "UnitDisk" => DomainSpec::UnitDisk,
            "Disk" => DomainSpec::Disk { radius: real("radius")? },
            "Ball" => DomainSpec::Ball { n: int("n")? as usize },
            "Polydisk" => DomainSpec::Polydisk { radii: reals("radii")? },
            "Annulus" => DomainSpec::Annulus { inner: real("inner")? },
            "Egg" => DomainSpec::Egg { exponents: reals("exponents")? },
            "Counterexample" => DomainSpec::Counterexample,
            "Anh" => DomainSpec::Anh { k: small("k")? },
            "Alg" => DomainSpec::Alg { k: small("k")? },
            "Product" => DomainSpec::Product { left: nested("left")?, right: nested("right")? },
            "WeightedDisk" => DomainSpec::WeightedDisk { q: real("q")? },
            "WeightedRadial" => DomainSpec::WeightedRadial { base: nested("base")?, t: real("t")? },
            "HartogsOverDisk" => DomainSpec::HartogsOverDisk { q: real("q")? },
            other => return Err(bad(format!("unknown variant '{other}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Parses a descriptor given either inline JSON or a path to a JSON file.
    pub fn parse_arg(arg: &str) -> Result<Self> {
        let text = if arg.trim_start().starts_with('{') { arg.to_string() } else { std::fs::read_to_string(arg)? };
        Self::from_json(&serde_json::from_str(&text)?)
    }
}

impl TryFrom<Value> for DomainSpec {
    type Error = Error;
    fn try_from(v: Value) -> Result<Self> {
        DomainSpec::from_json(&v)
    }
}

impl From<DomainSpec> for Value {
    fn from(d: DomainSpec) -> Value {
        d.to_json()
    }
}

impl std::fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.canonical_key())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn origin_and_boundary_membership() {
        assert!(DomainSpec::UnitDisk.contains(&[c(0.0)]).unwrap());
        let cx = DomainSpec::Counterexample;
        assert!(cx.contains(&[c(0.0), c(0.5)]).unwrap());
        assert!(!cx.contains(&[c(1.0), c(0.6)]).unwrap());
        let egg = DomainSpec::egg(&[1.0, 1.0]);
        assert!(egg.contains(&[c(0.5), c(0.49)]).unwrap());
        assert!(!egg.contains(&[c(0.5), c(0.5)]).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let err = DomainSpec::ball(2).contains(&[c(0.0)]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 2, got: 1 }));
    }

    #[test]
    fn anh_k2_indicator_matches_formula() {
        let spec = DomainSpec::Anh { k: 2 };
        for &(r1, r2) in &[(0.1f64, 0.3f64), (0.5, 0.55), (1.2, 0.2), (0.0, 0.84), (0.0, 0.85)] {
            let lhs = r2.powi(4) * (1.0 + r1).powi(4)
                + r2.powi(4) * (1.0f64 - r1).powi(4)
                + ((r1 * r1 + r2 * r2) / 2.0f64).powi(2);
            assert_eq!(spec.radial_indicator(&[r1, r2]), lhs < 1.0, "({r1},{r2})");
        }
    }

    #[test]
    fn alg_sums_all_eight_sign_patterns() {
        // at (r, 0, 0) every pattern contributes r^{2k}
        let k = 2;
        let r = 0.3f64;
        let v = alg_value(k, &[r, 0.0, 0.0]);
        assert!((v - (r.powi(8) + 8.0 * r.powi(4))).abs() < 1e-15);
    }

    #[test]
    fn counterexample_region_is_unbounded_in_first_coordinate() {
        let region = DomainSpec::Counterexample.radial_region().unwrap();
        assert!(region.bounds[0].is_infinite());
        assert_eq!(region.bounds[1], 1.0);
        assert!(DomainSpec::Counterexample.volume(1e-8).is_err());
    }

    #[test]
    fn unit_disk_region() {
        let region = DomainSpec::UnitDisk.radial_region().unwrap();
        assert_eq!(region.bounds, vec![1.0]);
        assert!(region.indicator(&[0.999]));
        assert!(!region.indicator(&[1.0]));
    }

    #[test]
    fn extent_bisection_recovers_boundary() {
        let region = DomainSpec::egg(&[1.0, 2.0]).radial_region().unwrap();
        let r = region.extent_after(&[0.36]);
        assert!((r - 0.8).abs() < 1e-14);
        let anh = DomainSpec::Anh { k: 3 }.radial_region().unwrap();
        assert!((anh.bounds[0] - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn closed_form_volumes() {
        let (v, _) = DomainSpec::UnitDisk.volume(1e-10).unwrap();
        assert!((v - PI).abs() < 1e-15);
        let (v, _) = DomainSpec::ball(2).volume(1e-10).unwrap();
        assert!((v - PI * PI / 2.0).abs() < 1e-14);
        let (v, _) = DomainSpec::egg(&[1.0, 1.0]).volume(1e-10).unwrap();
        assert!((v - PI * PI / 6.0).abs() < 1e-14);
    }

    #[test]
    fn json_round_trip_and_hash_stability() {
        let spec = DomainSpec::product(DomainSpec::Annulus { inner: 0.5 }, DomainSpec::Disk { radius: 2.0 });
        let text = serde_json::to_string(&spec).unwrap();
        let back: DomainSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(back.domain_hash(), spec.domain_hash());
        // 16th significant digit does not change the key
        let a = DomainSpec::Disk { radius: 0.1 };
        let b = DomainSpec::Disk { radius: 0.1 + 1e-17 };
        assert_eq!(a.domain_hash(), b.domain_hash());
        assert_ne!(a.domain_hash(), DomainSpec::Disk { radius: 0.2 }.domain_hash());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(DomainSpec::from_json(&json!({"variant":"Annulus","params":{"inner":1.0}})).is_err());
        assert!(DomainSpec::from_json(&json!({"variant":"Disk","params":{"radius":-1.0}})).is_err());
        assert!(DomainSpec::from_json(&json!({"variant":"Ball","params":{"n":5}})).is_err());
        assert!(DomainSpec::from_json(&json!({"variant":"Nope"})).is_err());
        let wr =
            json!({"variant":"WeightedRadial","params":{"base":{"variant":"Annulus","params":{"inner":0.5}},"t":1.0}});
        assert!(DomainSpec::from_json(&wr).is_err());
        assert!(DomainSpec::from_json(&json!({"variant":"UnitDisk"})).is_ok());
    }
}
