use bergman::DomainSpec;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn reinhardt_catalog() -> Vec<DomainSpec> {
    vec![
        DomainSpec::UnitDisk,
        DomainSpec::Disk { radius: 0.7 },
        DomainSpec::ball(3),
        DomainSpec::Polydisk { radii: vec![0.5, 1.5] },
        DomainSpec::Annulus { inner: 0.4 },
        DomainSpec::egg(&[1.0, 2.0, 4.0]),
        DomainSpec::Counterexample,
        DomainSpec::Anh { k: 2 },
        DomainSpec::Alg { k: 1 },
        DomainSpec::WeightedDisk { q: 1.5 },
        DomainSpec::HartogsOverDisk { q: 3.0 },
        DomainSpec::product(DomainSpec::UnitDisk, DomainSpec::Annulus { inner: 0.5 }),
    ]
}

fn sample_member(spec: &DomainSpec, rng: &mut ChaCha8Rng) -> Vec<C> {
    let bounds: Vec<f64> = spec.radial_bounds().iter().map(|b| b.min(3.0)).collect();
    loop {
        let z: Vec<C> =
            bounds.iter().map(|b| C::from_polar(b * rng.random::<f64>(), 2.0 * PI * rng.random::<f64>())).collect();
        if spec.contains(&z).unwrap() {
            return z;
        }
    }
}

proptest! {
    #[test]
    fn membership_ignores_coordinate_phases(
        which in 0usize..12,
        radii in prop::collection::vec(0.0f64..1.6, 4),
        phases in prop::collection::vec(0.0f64..(2.0 * PI), 8),
    ) {
        let spec = &reinhardt_catalog()[which];
        let n = spec.dim();
        let z: Vec<C> = (0..n).map(|j| C::from_polar(radii[j], phases[j])).collect();
        let rotated: Vec<C> = (0..n).map(|j| z[j] * C::from_polar(1.0, phases[4 + j])).collect();
        prop_assert_eq!(spec.contains(&z).unwrap(), spec.contains(&rotated).unwrap());
    }

    #[test]
    fn anh_sits_inside_the_counterexample(k in 1u32..8, r1 in 0.0f64..3.0, r2 in 0.0f64..1.0) {
        let z = [C::new(r1, 0.0), C::new(0.0, r2)];
        if (DomainSpec::Anh { k }).contains(&z).unwrap() {
            prop_assert!(DomainSpec::Counterexample.contains(&z).unwrap());
        }
    }

    #[test]
    fn disk_volume_scales_with_radius_squared(r in 0.05f64..3.0) {
        let (v, e) = DomainSpec::Disk { radius: r }.volume(1e-12).unwrap();
        let (v1, e1) = DomainSpec::UnitDisk.volume(1e-12).unwrap();
        prop_assert!((v - r * r * v1).abs() <= e + r * r * e1 + 1e-12 * v);
    }
}

#[test]
fn convex_eggs_contain_midpoints() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for e in [vec![1.0, 1.0], vec![1.0, 2.0, 2.0], vec![1.5, 4.0], vec![1.0, 2.0, 2.0, 4.0]] {
        let spec = DomainSpec::egg(&e);
        for _ in 0..10_000 {
            let a = sample_member(&spec, &mut rng);
            let b = sample_member(&spec, &mut rng);
            let mid: Vec<C> = a.iter().zip(&b).map(|(x, y)| (x + y) * 0.5).collect();
            assert!(spec.contains(&mid).unwrap(), "{spec}: midpoint of {a:?} and {b:?}");
        }
    }
}

#[test]
fn boundary_points_are_outside() {
    let egg = DomainSpec::egg(&[1.0, 1.0]);
    assert!(egg.contains(&[C::new(0.5, 0.0), C::new(0.49, 0.0)]).unwrap());
    assert!(!egg.contains(&[C::new(0.5, 0.0), C::new(0.5, 0.0)]).unwrap());
    assert!(DomainSpec::Counterexample.contains(&[C::new(0.0, 0.0), C::new(0.5, 0.0)]).unwrap());
    assert!(!DomainSpec::Counterexample.contains(&[C::new(1.0, 0.0), C::new(0.6, 0.0)]).unwrap());
}

#[test]
fn descriptors_round_trip_through_json() {
    for spec in reinhardt_catalog() {
        assert_eq!(DomainSpec::from_json(&spec.to_json()).unwrap(), spec);
    }
}
