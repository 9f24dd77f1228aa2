use bergman::kernels::{eval_closed, eval_kq};
use bergman::moments::{build_table, monomial_norm_sq, radial_quadrature};
use bergman::zerofinder::kq_zero_locus;
use bergman::{DomainSpec, KernelEvaluator, MultiIndex};
use num_complex::Complex64 as C;
use proptest::prelude::*;
use std::f64::consts::PI;
use std::sync::OnceLock;

fn point(r: &[f64], t: &[f64]) -> Vec<C> {
    r.iter().zip(t).map(|(r, t)| C::from_polar(*r, *t)).collect()
}

fn polydisk_series() -> &'static KernelEvaluator {
    static K: OnceLock<KernelEvaluator> = OnceLock::new();
    K.get_or_init(|| {
        KernelEvaluator::series(build_table(&DomainSpec::Polydisk { radii: vec![1.0, 1.0] }, 48, 1e-13).unwrap())
    })
}

fn ball_series() -> &'static KernelEvaluator {
    static K: OnceLock<KernelEvaluator> = OnceLock::new();
    K.get_or_init(|| KernelEvaluator::series(build_table(&DomainSpec::egg(&[2.0, 2.0]), 48, 1e-13).unwrap()))
}

fn anh_series() -> &'static KernelEvaluator {
    static K: OnceLock<KernelEvaluator> = OnceLock::new();
    K.get_or_init(|| KernelEvaluator::series(build_table(&DomainSpec::Anh { k: 2 }, 8, 1e-9).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_matches_closed_form_within_tail(
        r in prop::collection::vec(0.0f64..0.7, 4),
        t in prop::collection::vec(0.0f64..(2.0 * PI), 4),
    ) {
        let (z, w) = (point(&r[..2], &t[..2]), point(&r[2..], &t[2..]));
        let spec = DomainSpec::Polydisk { radii: vec![1.0, 1.0] };
        let a = polydisk_series().eval(&z, &w).unwrap();
        let b = eval_closed(&spec, &z, &w).unwrap();
        prop_assert!(a.certified);
        prop_assert!((a.value - b.value).norm() <= a.tail_bound + b.tail_bound);

        let scale = 0.7 / (r[0] * r[0] + r[1] * r[1]).sqrt().max(0.7);
        let scale_w = 0.7 / (r[2] * r[2] + r[3] * r[3]).sqrt().max(0.7);
        let (zb, wb): (Vec<C>, Vec<C>) = (z.iter().map(|x| x * scale).collect(), w.iter().map(|x| x * scale_w).collect());
        let a = ball_series().eval(&zb, &wb).unwrap();
        let b = eval_closed(&DomainSpec::ball(2), &zb, &wb).unwrap();
        prop_assert!((a.value - b.value).norm() <= a.tail_bound + b.tail_bound);
    }

    #[test]
    fn series_depends_only_on_products(
        r in prop::collection::vec(0.0f64..0.35, 4),
        t in prop::collection::vec(0.0f64..(2.0 * PI), 6),
    ) {
        let k = anh_series();
        let (z, w) = (point(&r[..2], &t[..2]), point(&r[2..], &t[2..4]));
        let v = k.eval(&z, &w).unwrap();
        let phase = [C::from_polar(1.0, t[4]), C::from_polar(1.0, t[5])];
        let zr: Vec<C> = z.iter().zip(&phase).map(|(x, p)| x * p).collect();
        let wr: Vec<C> = w.iter().zip(&phase).map(|(x, p)| x * p).collect();
        let u = k.eval(&zr, &wr).unwrap();
        prop_assert!((u.value - v.value).norm() <= 1e-12 * v.value.norm().max(1.0));
    }

    #[test]
    fn kernels_are_hermitian(
        r in prop::collection::vec(0.0f64..0.6, 4),
        t in prop::collection::vec(0.0f64..(2.0 * PI), 4),
    ) {
        let (z, w) = (point(&r[..2], &t[..2]), point(&r[2..], &t[2..]));
        for k in [polydisk_series(), anh_series()] {
            let a = k.eval(&z, &w).unwrap().value;
            let b = k.eval(&w, &z).unwrap().value;
            prop_assert!((a - b.conj()).norm() <= 1e-14 * a.norm().max(1.0));
        }
    }

    #[test]
    fn weighted_disk_norms_decrease_in_q(k in 0i32..30, q in 0.1f64..6.0, dq in 0.05f64..3.0) {
        let a = monomial_norm_sq(&DomainSpec::WeightedDisk { q }, &MultiIndex(vec![k]), 1e-12).unwrap();
        let b = monomial_norm_sq(&DomainSpec::WeightedDisk { q: q + dq }, &MultiIndex(vec![k]), 1e-12).unwrap();
        prop_assert!(b.value < a.value);
    }

    #[test]
    fn annulus_norms_approach_disk_norms(inner in 0.1f64..0.9, k in 40i32..200) {
        let a = monomial_norm_sq(&DomainSpec::Annulus { inner }, &MultiIndex(vec![k]), 1e-12).unwrap();
        let d = monomial_norm_sq(&DomainSpec::UnitDisk, &MultiIndex(vec![k]), 1e-12).unwrap();
        prop_assert!((a.value - d.value).abs() / d.value <= inner.powi(2 * k + 2) * 1.000001 + 1e-15);
    }
}

#[test]
fn disk_norms_match_quadrature() {
    let region = DomainSpec::UnitDisk.radial_region().unwrap();
    let alphas: Vec<Vec<i32>> = (0..=20).map(|k| vec![k]).collect();
    let quad = radial_quadrature(&region, &alphas, 1e-12).unwrap();
    for (a, (v, _)) in alphas.iter().zip(quad) {
        let m = monomial_norm_sq(&DomainSpec::UnitDisk, &MultiIndex(a.clone()), 1e-12).unwrap();
        assert!((m.value - v).abs() <= 1e-10 * v, "k = {}", a[0]);
    }
}

#[test]
fn egg_dirichlet_matches_nested_quadrature() {
    for e in [[1.0, 1.0], [1.0, 2.0], [1.5, 4.0]] {
        let spec = DomainSpec::egg(&e);
        let region = spec.radial_region().unwrap();
        let alphas: Vec<Vec<i32>> = (0..=6).flat_map(|a| (0..=6 - a).map(move |b| vec![a, b])).collect();
        let quad = radial_quadrature(&region, &alphas, 1e-11).unwrap();
        for (a, (v, _)) in alphas.iter().zip(quad) {
            let m = monomial_norm_sq(&spec, &MultiIndex(a.clone()), 1e-12).unwrap();
            assert!((m.value - v).abs() <= 1e-8 * v, "{spec} {a:?}: {} vs {v}", m.value);
        }
    }
}

#[test]
fn anh_monomials_are_orthogonal() {
    // the angular factor prod_j int e^{i(a_j - b_j) theta} d theta, by the
    // trapezoid rule, bounds the inner product through Cauchy-Schwarz
    let spec = DomainSpec::Anh { k: 2 };
    let nodes = 32;
    let alphas: Vec<Vec<i32>> = (0..=2).flat_map(|a| (0..=2 - a).map(move |b| vec![a, b])).collect();
    for a in &alphas {
        for b in &alphas {
            if a == b {
                continue;
            }
            let mut angular = 1.0;
            for j in 0..2 {
                let d = (a[j] - b[j]) as f64;
                let s: C = (0..nodes).map(|i| C::from_polar(1.0, d * 2.0 * PI * i as f64 / nodes as f64)).sum();
                angular *= (s * (2.0 * PI / nodes as f64)).norm() / (2.0 * PI);
            }
            let ma = monomial_norm_sq(&spec, &MultiIndex(a.clone()), 1e-8).unwrap().value;
            let mb = monomial_norm_sq(&spec, &MultiIndex(b.clone()), 1e-8).unwrap().value;
            assert!(angular * (ma * mb).sqrt() < 1e-12, "{a:?} {b:?}");
        }
    }
}

#[test]
fn disk_diagonal_decreases_with_radius() {
    let o = [C::new(0.0, 0.0)];
    let vals: Vec<f64> = [0.5, 0.75, 1.0]
        .iter()
        .map(|&r| eval_closed(&DomainSpec::Disk { radius: r }, &o, &o).unwrap().value.re)
        .collect();
    assert_eq!(vals[0], 1.0 / (PI * 0.25));
    assert!(vals[0] > vals[1] && vals[1] > vals[2]);
}

#[test]
fn kq_vanishes_exactly_on_locus() {
    for q in [2.5, 3.0, 4.0, 6.0] {
        let locus = kq_zero_locus(q);
        assert!(!locus.is_empty());
        for s in locus {
            // x conj(y) = (i r)(i r) = s
            let r = s.abs().sqrt();
            let v = eval_kq(q, C::new(0.0, r), C::new(0.0, -r)).unwrap();
            assert!(v.value.norm() < 1e-8, "q = {q}, s = {s}: {}", v.value);
        }
    }
}

#[test]
fn kq_has_no_zeros_for_small_q() {
    for q in [0.5, 1.0, 2.0] {
        for i in 0..=90 {
            for j in 0..72 {
                let s = C::from_polar(0.9 * i as f64 / 90.0, 2.0 * PI * j as f64 / 72.0);
                let r = s.norm().sqrt();
                let x = C::from_polar(r, s.arg());
                let v = eval_kq(q, x, C::new(r, 0.0)).unwrap();
                assert!(v.value.norm() > 0.0 && v.value.norm() > v.tail_bound, "q = {q}, s = {s}");
            }
        }
    }
}
