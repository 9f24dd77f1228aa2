use bergman::kernels::kq_of_product;
use bergman::zerofinder::{
    find_zeros, kq_zero_locus, trace, Cell, Contour, InflatedTail, KqSlice, SearchBudget, WindingOptions,
};
use bergman::{EvaluatedValue, Result};
use num_complex::Complex64 as C;
use proptest::prelude::*;

fn origin() -> C {
    C::new(0.0, 0.0)
}

#[test]
fn kq_zero_counts_in_the_disk() {
    for q in [3.0, 6.0, 10.0, 14.0] {
        let expected = (1..).take_while(|m| 4.0 * (*m as f64) < q + 2.0).count() as i64;
        let s = find_zeros(&KqSlice { q }, Cell::disk(origin(), 0.99), &SearchBudget::default()).unwrap();
        assert!(s.is_complete(), "q = {q}: {} unknown cells", s.unknown.len());
        assert_eq!(s.zero_count(), expected, "q = {q}");
        let mut found: Vec<f64> = s.locations().iter().map(|z| z.re).collect();
        found.sort_by(|a, b| b.total_cmp(a));
        for (z, exact) in found.iter().zip(kq_zero_locus(q)) {
            assert!((z - exact).abs() < 1e-8, "q = {q}: {z} vs {exact}");
        }
    }
}

#[test]
fn inflated_tails_block_certificates() {
    let clean = find_zeros(&KqSlice { q: 6.0 }, Cell::disk(origin(), 0.9), &SearchBudget::default()).unwrap();
    assert_eq!(clean.zero_count(), 1);
    let faulty = InflatedTail { inner: KqSlice { q: 6.0 }, extra: 1e3 };
    let budget = SearchBudget { max_depth: 4, ..SearchBudget::default() };
    let s = find_zeros(&faulty, Cell::disk(origin(), 0.9), &budget).unwrap();
    assert!(s.certificates.is_empty());
    let zero = C::new(kq_zero_locus(6.0)[0], 0.0);
    assert!(s.unknown.iter().any(|u| u.region.contains(zero)));
    for c in &clean.certificates {
        assert!(c.is_valid() && c.min_modulus > c.tail_bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn winding_is_stable_under_denser_sampling(
        q in 2.2f64..16.0, cx in -0.6f64..0.2, cy in -0.3f64..0.3, r in 0.05f64..0.3,
    ) {
        let f = KqSlice { q };
        let contour = Contour::circle(C::new(cx, cy), r);
        let coarse = trace(&f, &contour, WindingOptions::default()).unwrap();
        let fine = trace(&f, &contour, WindingOptions { initial_samples: 64, ..WindingOptions::default() }).unwrap();
        if coarse.is_valid() {
            prop_assert!(fine.is_valid());
            prop_assert_eq!(coarse.count, fine.count);
            let inside = kq_zero_locus(q).iter().filter(|s| (C::new(**s, 0.0) - contour_center(&contour)).norm() < r).count();
            prop_assert_eq!(coarse.count, inside as i64);
        }
    }

    #[test]
    fn polynomial_winding_counts_roots(
        roots in prop::collection::vec((-0.8f64..0.8, -0.8f64..0.8), 1..5),
    ) {
        let rs: Vec<C> = roots.iter().map(|(a, b)| C::new(*a, *b)).collect();
        let f = |s: C| -> Result<EvaluatedValue> { Ok(EvaluatedValue::exact(rs.iter().map(|r| s - r).product())) };
        let contour = Contour::circle(origin(), 0.6);
        let w = trace(&f, &contour, WindingOptions::default()).unwrap();
        if w.is_valid() {
            let inside = rs.iter().filter(|r| r.norm() < 0.6).count();
            prop_assert_eq!(w.count, inside as i64);
        }
    }
}

fn contour_center(c: &Contour) -> C {
    match c.pieces[0] {
        bergman::zerofinder::Piece::Arc { center, .. } => center,
        bergman::zerofinder::Piece::Segment { from, .. } => from,
    }
}

#[test]
fn newton_locations_match_the_locus() {
    let q = 10.0;
    let s = find_zeros(&KqSlice { q }, Cell::disk(origin(), 0.95), &SearchBudget::default()).unwrap();
    for z in s.certificates.iter().flat_map(|c| c.zeros.iter()) {
        assert!(z.converged);
        assert!(kq_of_product(q, z.location).norm() < 1e-10);
        let d = kq_zero_locus(q).iter().map(|e| (z.location - C::new(*e, 0.0)).norm()).fold(f64::INFINITY, f64::min);
        assert!(d < 1e-8);
    }
}
