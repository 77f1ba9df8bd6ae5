mod common;

use common::*;
use proptest::prelude::*;
use setdp::experiments::{is_exact_translate, stand_in_polytope, unit_square};
use setdp::{
    expected_displacement, hausdorff_distance, perturb, translate, CompactSet, Mode, PrivacyParams, SeededStream,
    Translation,
};

fn ulp(x: f64) -> f64 {
    let x = x.abs().max(f64::MIN_POSITIVE);
    f64::from_bits(x.to_bits() + 1) - x
}

#[test]
fn mean_displacement_matches_n_over_epsilon() {
    for (set, n) in [(unit_square(), 2.0), (stand_in_polytope(), 3.0)] {
        let p = PrivacyParams::new(1.0, set.dim()).unwrap();
        let runs = 10_000u64;
        let mut total = 0.0;
        for run in 0..runs {
            let out = perturb(&set, &p, &SeededStream::new(2024, run), Mode::Audit).unwrap();
            let d = hausdorff_distance(&set, out.set()).unwrap();
            assert!((d - out.noise().unwrap().norm1()).abs() < 1e-9);
            total += d;
        }
        let mean = total / runs as f64;
        assert_eq!(expected_displacement(&p), n);
        assert!((mean - n).abs() < 0.05 * n, "mean {mean} vs {n}");
    }
}

#[test]
fn release_matches_audit_translation() {
    let p = PrivacyParams::new(0.5, 3).unwrap();
    let set = stand_in_polytope();
    for run in 0..20 {
        let s = SeededStream::new(8, run);
        let audited = perturb(&set, &p, &s, Mode::Audit).unwrap();
        let released = perturb(&set, &p, &s, Mode::Release).unwrap();
        assert!(released.noise().is_none());
        assert_eq!(released.set(), audited.set());
        let w = &audited.noise().unwrap().w;
        assert!(is_exact_translate(&set, released.set(), w));
    }
}

#[test]
fn vanishing_noise_leaves_the_set_in_place() {
    let p = PrivacyParams::new(1e6, 2).unwrap();
    let out = perturb(&unit_square(), &p, &SeededStream::new(1, 0), Mode::Release).unwrap();
    assert!(hausdorff_distance(&unit_square(), out.set()).unwrap() < 1e-4);
}

fn cloud() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>, u64, u64, f64)> {
    (1usize..4).prop_flat_map(|d| {
        (
            prop::collection::vec(prop::collection::vec(-100.0..100.0f64, d), 1..8),
            prop::collection::vec(-50.0..50.0f64, d),
            any::<u64>(),
            any::<u64>(),
            0.05..5.0f64,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Every released coordinate is exactly `fl(x + w)`, and pairwise
    /// difference vectors move by at most the rounding of those sums.
    #[test]
    fn shape_is_preserved((pts, _, seed, stream, eps) in cloud()) {
        let x = points_set(&pts);
        let p = PrivacyParams::new(eps, x.dim()).unwrap();
        let out = perturb(&x, &p, &SeededStream::new(seed, stream), Mode::Audit).unwrap();
        let w = out.noise().unwrap().w.clone();
        prop_assert!(is_exact_translate(&x, out.set(), &w));
        let before = x.extreme_points();
        let after = out.set().extreme_points();
        for i in 0..before.len() {
            for j in 0..before.len() {
                for k in 0..x.dim() {
                    let d0 = before[i][k] - before[j][k];
                    let d1 = after[i][k] - after[j][k];
                    // Rounding of the two sums plus rounding of each difference.
                    let slack = ulp(after[i][k]) + ulp(after[j][k]) + ulp(d0) + ulp(d1);
                    prop_assert!((d0 - d1).abs() <= slack, "{} vs {}", d0, d1);
                }
            }
        }
    }

    /// `M(X + a)` and `M(X) + a` under the same noise agree up to the
    /// rounding of the two addition orders.
    #[test]
    fn equivariance((pts, a, seed, stream, eps) in cloud()) {
        let x = points_set(&pts);
        let p = PrivacyParams::new(eps, x.dim()).unwrap();
        let s = SeededStream::new(seed, stream);
        let shift = Translation::new(a).unwrap();
        let left = perturb(&translate(&x, &shift).unwrap(), &p, &s, Mode::Audit).unwrap();
        let right = translate(perturb(&x, &p, &s, Mode::Audit).unwrap().set(), &shift).unwrap();
        prop_assert_eq!(left.noise().unwrap().w.clone(), perturb(&x, &p, &s, Mode::Audit).unwrap().noise().unwrap().w.clone());
        let w = left.noise().unwrap().w.clone();
        for ((u, v), x0) in left.set().extreme_points().iter().zip(right.extreme_points()).zip(x.extreme_points()) {
            for (k, (a, b)) in u.iter().zip(&v).enumerate() {
                // (x + a) + w and (x + w) + a each round twice.
                let scale = x0[k].abs() + shift.offset()[k].abs() + w[k].abs();
                prop_assert!((a - b).abs() <= 2.0 * ulp(scale), "{} vs {}", a, b);
            }
        }
    }

    #[test]
    fn translation_distance_is_noise_norm((pts, _, seed, stream, eps) in cloud()) {
        let x = points_set(&pts);
        let p = PrivacyParams::new(eps, x.dim()).unwrap();
        let out = perturb(&x, &p, &SeededStream::new(seed, stream), Mode::Audit).unwrap();
        let d = hausdorff_distance(&x, out.set()).unwrap();
        let norm = out.noise().unwrap().norm1();
        prop_assert!((d - norm).abs() < 1e-9 * (1.0 + norm), "{} vs {}", d, norm);
    }

    #[test]
    fn boxes_stay_boxes((lo, _, seed, stream, eps) in cloud()) {
        let hi: Vec<f64> = lo[0].iter().map(|v| v + 1.0).collect();
        let b = CompactSet::axis_box(lo[0].clone(), hi).unwrap();
        let p = PrivacyParams::new(eps, b.dim()).unwrap();
        let out = perturb(&b, &p, &SeededStream::new(seed, stream), Mode::Audit).unwrap();
        prop_assert!(matches!(out.set(), CompactSet::Box(_)));
        prop_assert!(is_exact_translate(&b, out.set(), &out.noise().unwrap().w));
    }
}
