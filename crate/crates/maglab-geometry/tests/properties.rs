use maglab_geometry::builtin_model;
use proptest::prelude::*;
use serde_json::json;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distances_are_symmetric_and_separate_points(
        which in 0usize..7,
        i in 0usize..40,
        j in 0usize..40,
    ) {
        let names = ["interval", "disk", "ellipse", "ball3", "sphere2_geodesic", "sphere2_chordal", "torus2_geodesic"];
        let m = builtin_model(names[which], &json!({})).unwrap();
        let q = m.sample(40);
        let (i, j) = (i % q.len(), j % q.len());
        let (a, b) = (&q.points[i], &q.points[j]);
        let dab = m.exact_distance(a, b);
        prop_assert!(dab >= 0.0);
        prop_assert!((dab - m.exact_distance(b, a)).abs() < 1e-15);
        prop_assert_eq!(dab == 0.0, i == j);
    }

    #[test]
    fn sphere_chart_curvature_is_base_point_independent(x in -1.5f64..1.5, y in -1.5f64..1.5) {
        let chart = maglab_geometry::sphere_geodesic_chart(1.0, &[x, y], 2, 4, maglab_geometry::GeodesicRoute::Christoffel).unwrap();
        let s = maglab_symbols::scalar_curvature_invariant(&chart).unwrap();
        prop_assert!((s - 2.0).abs() < 1e-9, "s = {}", s);
    }
}
