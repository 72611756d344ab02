use maglab_cli::parse_r_grid;
use proptest::prelude::*;

proptest! {
    #[test]
    fn log_grids_are_increasing_and_hit_both_ends(a in 0.1f64..10.0, span in 1.01f64..50.0, m in 2usize..40) {
        let b = a * span;
        let g = parse_r_grid(&format!("{a}:{b}:{m}")).unwrap();
        prop_assert_eq!(g.len(), m);
        prop_assert!((g[0] - a).abs() <= 1e-12 * a);
        prop_assert!((g[m - 1] - b).abs() <= 1e-12 * b);
        prop_assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn comma_lists_round_trip(values in proptest::collection::vec(1e-3f64..1e3, 1..12)) {
        let text: Vec<String> = values.iter().map(|v| format!("{v:?}")).collect();
        prop_assert_eq!(parse_r_grid(&text.join(",")).unwrap(), values);
    }
}
