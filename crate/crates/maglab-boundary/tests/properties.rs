use std::sync::Arc;

use maglab_boundary::{partial_fraction_xi, split_metric, Sign};
use maglab_symbols::random_chart;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Splitting `ξ_n^p (ξ_n − h_+)^{−a} (ξ_n − h_−)^{−b}` and adding the parts
    /// back reproduces the rational function.
    #[test]
    fn partial_fractions_recompose(seed in 0u64..1000, xi0 in -2.0f64..2.0, a in 1u32..5, b in 1u32..5, p in 0u32..4, x in -5.0f64..5.0) {
        prop_assume!(p < a + b);
        let chart = random_chart(2, 1, 3, seed);
        let roots = Arc::new(split_metric(&chart, 1, &[xi0]).unwrap());
        let (plus, minus) = partial_fraction_xi(p, a, b, &roots).unwrap();
        prop_assert!(plus.is_pure(Sign::Plus) && minus.is_pure(Sign::Minus));
        let hp = roots.root_at_base(Sign::Plus);
        let hm = roots.root_at_base(Sign::Minus);
        let direct = maglab_core::C64::new(x, 0.0).powu(p) / ((x - hp).powu(a) * (x - hm).powu(b));
        let split = plus.eval(x) + minus.eval(x);
        prop_assert!((split - direct).norm() <= 1e-10 * direct.norm().max(1e-3));
    }

    /// The roots are complex conjugate for real `ξ′` and satisfy the
    /// quadratic identity.
    #[test]
    fn roots_are_conjugate(seed in 0u64..1000, xi0 in -3.0f64..3.0, x in -5.0f64..5.0) {
        let chart = random_chart(2, 2, 4, seed);
        let r = split_metric(&chart, 2, &[xi0]).unwrap();
        let (hp, hm) = (r.root_at_base(Sign::Plus), r.root_at_base(Sign::Minus));
        prop_assert!((hp - hm.conj()).norm() < 1e-12 * hp.norm());
        prop_assert!(r.root_identity_residual(x) < 1e-11 * (1.0 + x * x));
    }
}
