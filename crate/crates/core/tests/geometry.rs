mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use setdp::geometry::{joint_bounding_box, polytope_box_distance, PointList};
use setdp::{
    diameter, directed_hausdorff, hausdorff_distance, intersects, point_to_set_distance, translate, AxisBox,
    CompactSet, TestSet, Translation,
};

fn square() -> Vec<Vec<f64>> {
    vec![
        vec![0.0, 0.0],
        vec![0.0, 1.0],
        vec![1.0, 0.0],
        vec![1.0, 1.0],
    ]
}

fn shifted(points: &[Vec<f64>], a: &[f64]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|p| p.iter().zip(a).map(|(x, y)| x + y).collect())
        .collect()
}

#[test]
fn translate_examples() {
    let t = |v: &[f64]| Translation::new(v.to_vec()).unwrap();
    let one = translate(&points_set(&[vec![0.0, 0.0]]), &t(&[3.0, 4.0])).unwrap();
    assert_eq!(one, points_set(&[vec![3.0, 4.0]]));

    let unit = CompactSet::axis_box(vec![0.0; 2], vec![1.0; 2]).unwrap();
    assert_eq!(translate(&unit, &t(&[0.0, 0.0])).unwrap(), unit);

    let moved = translate(&points_set(&square()), &t(&[1.0, 0.0])).unwrap();
    assert_eq!(moved, points_set(&shifted(&square(), &[1.0, 0.0])));
}

#[test]
fn distance_examples() {
    assert_eq!(point_to_set_distance(&[0.0, 0.0], &points_set(&[vec![3.0, 4.0]])).unwrap(), 7.0);
    let unit = CompactSet::axis_box(vec![0.0; 2], vec![1.0; 2]).unwrap();
    assert_eq!(point_to_set_distance(&[0.5, 0.5], &unit).unwrap(), 0.0);

    let hull = CompactSet::polytope(square()).unwrap();
    let lp = point_to_set_distance(&[2.0, 0.0], &hull).unwrap();
    let oracle = hull_search(&square(), &[2.0, 0.0], &[2.0, 0.0], &[2.0, 0.0], 1_000_000, 1);
    assert!((lp - 1.0).abs() < 1e-9);
    assert!((lp - oracle.point_dist).abs() < 1e-3);
}

#[test]
fn hausdorff_examples() {
    let a = points_set(&square());
    let b = points_set(&shifted(&square(), &[1.0, 0.0]));
    assert_eq!(directed_hausdorff(&a, &a).unwrap(), 0.0);
    let pair = points_set(&[vec![0.0, 0.0], vec![2.0, 0.0]]);
    assert_eq!(directed_hausdorff(&pair, &points_set(&[vec![0.0, 0.0]])).unwrap(), 2.0);
    assert_eq!(directed_hausdorff(&a, &b).unwrap(), 1.0);
    assert_eq!(brute_directed(&square(), &shifted(&square(), &[1.0, 0.0])), 1.0);

    assert_eq!(
        hausdorff_distance(&points_set(&[vec![0.0, 0.0]]), &points_set(&[vec![3.0, 4.0]])).unwrap(),
        7.0
    );
    assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
    assert_eq!(hausdorff_distance(&a, &b).unwrap(), 1.0);
    assert_eq!(brute_hausdorff(&square(), &shifted(&square(), &[1.0, 0.0])), 1.0);
}

#[test]
fn diameter_examples() {
    assert_eq!(diameter(&points_set(&[vec![1.0, 2.0]])), 0.0);
    assert_eq!(diameter(&points_set(&square())), 2.0);
    assert_eq!(brute_diameter(&square()), 2.0);
    assert_eq!(diameter(&CompactSet::axis_box(vec![0.0; 3], vec![1.0; 3]).unwrap()), 3.0);
}

#[test]
fn intersects_examples() {
    let k = TestSet::axis_box(vec![-1.0; 2], vec![1.0; 2]).unwrap();
    assert!(intersects(&points_set(&[vec![0.0, 0.0]]), &k).unwrap());

    let unit = CompactSet::axis_box(vec![0.0; 2], vec![1.0; 2]).unwrap();
    let apart = TestSet::axis_box(vec![2.0, 0.0], vec![3.0, 1.0]).unwrap();
    assert!(!intersects(&unit, &apart).unwrap());

    let hull = CompactSet::polytope(square()).unwrap();
    let near_edge = TestSet::axis_box(vec![0.9, 0.4], vec![1.1, 0.6]).unwrap();
    assert!(intersects(&hull, &near_edge).unwrap());
    let oracle = hull_search(&square(), &[0.0, 0.0], &[0.9, 0.4], &[1.1, 0.6], 1_000_000, 2);
    assert_eq!(oracle.box_dist, 0.0);
}

#[test]
fn boundary_contact_counts_as_intersection() {
    let unit = CompactSet::axis_box(vec![0.0; 2], vec![1.0; 2]).unwrap();
    let touching = TestSet::axis_box(vec![1.0, 0.0], vec![2.0, 1.0]).unwrap();
    assert!(intersects(&unit, &touching).unwrap());
    let hull = CompactSet::polytope(vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap();
    assert!(intersects(&hull, &TestSet::point(vec![1.0, 1.0]).unwrap()).unwrap());
    assert!(!intersects(&hull, &TestSet::point(vec![1.0, 1.0 + 1e-6]).unwrap()).unwrap());
}

#[test]
fn point_equality_tolerance() {
    let s = points_set(&[vec![0.3, 0.7]]);
    assert!(intersects(&s, &TestSet::point(vec![0.3 + 5e-13, 0.7]).unwrap()).unwrap());
    assert!(!intersects(&s, &TestSet::point(vec![0.3 + 1e-11, 0.7]).unwrap()).unwrap());
}

#[test]
fn degenerate_polytopes_are_accepted() {
    let collinear = CompactSet::polytope(vec![
        vec![0.0, 0.0],
        vec![1.0, 1.0],
        vec![2.0, 2.0],
        vec![1.0, 1.0],
    ])
    .unwrap();
    assert_eq!(diameter(&collinear), 4.0);
    assert!((point_to_set_distance(&[2.0, 0.0], &collinear).unwrap() - 2.0).abs() < 1e-9);
    assert!(intersects(&collinear, &TestSet::point(vec![0.5, 0.5]).unwrap()).unwrap());
}

#[test]
fn mixed_variant_hausdorff() {
    // A filled square is farther from its corners than the corners are
    // from it: the center is 1 away from every corner.
    let filled = CompactSet::axis_box(vec![0.0; 2], vec![1.0; 2]).unwrap();
    let corners = points_set(&square());
    assert!((directed_hausdorff(&filled, &corners).unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(directed_hausdorff(&corners, &filled).unwrap(), 0.0);
    let hull = CompactSet::polytope(square()).unwrap();
    assert!((hausdorff_distance(&hull, &corners).unwrap() - 1.0).abs() < 1e-9);
    assert!(hausdorff_distance(&hull, &filled).unwrap() < 1e-9);
}

#[test]
fn dimension_mismatch_is_an_error() {
    let a = points_set(&[vec![0.0, 0.0]]);
    let b = points_set(&[vec![0.0, 0.0, 0.0]]);
    assert!(hausdorff_distance(&a, &b).is_err());
    assert!(point_to_set_distance(&[0.0], &a).is_err());
    assert!(intersects(&a, &TestSet::point(vec![0.0]).unwrap()).is_err());
    assert!(translate(&a, &Translation::new(vec![1.0]).unwrap()).is_err());
    assert!(joint_bounding_box(&a, &b).is_err());
}

#[test]
fn box_diameter_matches_corner_pairs() {
    let mut r = rng(5);
    for dim in 1..=4 {
        for _ in 0..25 {
            let b = random_box(&mut r, dim, (-3.0, 3.0), (0.0, 2.0));
            let corners: Vec<Vec<f64>> = b.corners().collect();
            assert_eq!(corners.len(), 1 << dim);
            assert!((b.diameter() - brute_diameter(&corners)).abs() < 1e-9);
        }
    }
}

#[test]
fn polytope_distance_matches_sampling_oracle() {
    let mut r = rng(17);
    for case in 0..40u64 {
        let n = 2 + (case % 2) as usize;
        let m = 3 + (case % 6) as usize;
        let v = random_points(&mut r, m, n, 0.0, 1.0);
        let p: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..2.0)).collect();
        let k = random_box(&mut r, n, (-0.5, 1.5), (0.02, 0.3));
        let lp_point = polytope_box_distance(&PointList::new(v.clone()).unwrap(), &AxisBox::point(p.clone()).unwrap()).unwrap();
        let lp_box = polytope_box_distance(&PointList::new(v.clone()).unwrap(), &k).unwrap();
        let o = hull_search(&v, &p, k.lo(), k.hi(), 1_000_000, case);
        assert!(lp_point <= o.point_dist + 1e-9, "case {case}");
        assert!(o.point_dist - lp_point < 1e-3, "case {case}: {lp_point} vs {}", o.point_dist);
        assert!(lp_box <= o.box_dist + 1e-9, "case {case}");
        assert!(o.box_dist - lp_box < 1e-3, "case {case}: {lp_box} vs {}", o.box_dist);
    }
}

fn point_cloud(dim: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-10.0..10.0f64, dim), 1..7)
}

fn three_clouds() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<f64>)> {
    (1usize..4).prop_flat_map(|d| {
        (
            point_cloud(d),
            point_cloud(d),
            point_cloud(d),
            prop::collection::vec(-5.0..5.0f64, d),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn metric_axioms((a, b, c, _) in three_clouds()) {
        let (sa, sb, sc) = (points_set(&a), points_set(&b), points_set(&c));
        let ab = hausdorff_distance(&sa, &sb).unwrap();
        let ba = hausdorff_distance(&sb, &sa).unwrap();
        let ac = hausdorff_distance(&sa, &sc).unwrap();
        let bc = hausdorff_distance(&sb, &sc).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert_eq!(ab, ba);
        prop_assert!(ac <= ab + bc + 1e-9);
        prop_assert_eq!(hausdorff_distance(&sa, &sa).unwrap(), 0.0);
        prop_assert!((ab - brute_hausdorff(&a, &b)).abs() < 1e-12);
    }

    #[test]
    fn translation_invariance_and_bound((a, b, _, t) in three_clouds()) {
        let (sa, sb) = (points_set(&a), points_set(&b));
        let shift = Translation::new(t.clone()).unwrap();
        let ta = translate(&sa, &shift).unwrap();
        let tb = translate(&sb, &shift).unwrap();
        let before = hausdorff_distance(&sa, &sb).unwrap();
        let after = hausdorff_distance(&ta, &tb).unwrap();
        prop_assert!((before - after).abs() < 1e-9);
        let norm: f64 = t.iter().map(|x| x.abs()).sum();
        prop_assert!(hausdorff_distance(&sa, &ta).unwrap() <= norm + 1e-9);
    }

    #[test]
    fn diameter_matches_brute_force((a, _, _, _) in three_clouds()) {
        prop_assert_eq!(diameter(&points_set(&a)), brute_diameter(&a));
    }

    #[test]
    fn translation_preserves_variant_and_differences((a, _, _, t) in three_clouds()) {
        let poly = CompactSet::polytope(a.clone()).unwrap();
        let moved = translate(&poly, &Translation::new(t.clone()).unwrap()).unwrap();
        prop_assert_eq!(moved.variant_name(), "polytope");
        let before = poly.extreme_points();
        let after = moved.extreme_points();
        for (p, q) in before.iter().zip(&after) {
            for ((x, y), w) in p.iter().zip(q).zip(&t) {
                prop_assert_eq!((x + w).to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn box_hull_is_the_box(lo in prop::collection::vec(-5.0..5.0f64, 2), w in prop::collection::vec(0.0..3.0f64, 2)) {
        let hi: Vec<f64> = lo.iter().zip(&w).map(|(l, w)| l + w).collect();
        let b = CompactSet::axis_box(lo.clone(), hi.clone()).unwrap();
        let as_poly = CompactSet::polytope(b.extreme_points()).unwrap();
        prop_assert!(hausdorff_distance(&b, &as_poly).unwrap() < 1e-9);
        prop_assert!((diameter(&b) - diameter(&as_poly)).abs() < 1e-9);
    }
}

#[test]
fn translated_polytope_distance_regression() {
    // Rounding noise in the reduced costs once ended phase one early here.
    let base = setdp::experiments::stand_in_polytope();
    let w = vec![0.506886666794075, 0.639410928013482, 2.7540078215689374];
    let moved = translate(&base, &Translation::new(w.clone()).unwrap()).unwrap();
    let norm: f64 = w.iter().map(|x| x.abs()).sum();
    assert!((hausdorff_distance(&base, &moved).unwrap() - norm).abs() < 1e-9);
    let d = point_to_set_distance(&[1.0, 0.5, 0.0], &moved).unwrap();
    let o = hull_search(&moved.extreme_points(), &[1.0, 0.5, 0.0], &[0.0; 3], &[0.0; 3], 1_000_000, 9);
    assert!(d <= o.point_dist + 1e-9 && o.point_dist - d < 1e-3);
}
