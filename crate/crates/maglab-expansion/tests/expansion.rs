use maglab_expansion::{
    assemble_c, assemble_c_with, closed_form_c012, energy_series, eval_series, formal_product, AssembleOptions,
    ExpansionError, ExpansionSeries,
};
use maglab_geometry::builtin_model;
use serde_json::json;

fn assert_close(got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= tol * w.abs().max(1.0), "{got:?} vs {want:?}");
    }
}

#[test]
fn closed_forms_of_the_models() {
    let cases = [
        ("interval", json!({"length": 2.0}), vec![1.0, 1.0, 0.0]),
        ("interval", json!({"length": 5.0}), vec![2.5, 1.0, 0.0]),
        ("disk", json!({"radius": 1.0}), vec![0.5, 1.5, 1.125]),
        ("ball3", json!({"radius": 1.0}), vec![1.0 / 6.0, 1.0, 2.0]),
        ("sphere2_geodesic", json!({"radius": 1.0}), vec![2.0, 0.0, 2.0]),
    ];
    for (name, params, want) in cases {
        let m = builtin_model(name, &params).unwrap();
        assert_close(&closed_form_c012(m.as_ref()).unwrap().coefficients, &want, 1e-14);
    }
    let chordal = builtin_model("sphere2_chordal", &json!(null)).unwrap();
    assert!(matches!(closed_form_c012(chordal.as_ref()), Err(ExpansionError::MissingClosedForm(_))));
}

#[test]
fn assembled_coefficients_match_closed_forms() {
    let cases = [
        ("interval", json!({"length": 2.0})),
        ("disk", json!({"radius": 1.0})),
        ("ball3", json!({"radius": 1.0})),
        ("sphere2_geodesic", json!({"radius": 1.0})),
        ("ellipse", json!({"a": 1.5, "b": 1.0})),
    ];
    for (name, params) in cases {
        let m = builtin_model(name, &params).unwrap();
        let got = assemble_c(m.as_ref(), 2).unwrap();
        let want = closed_form_c012(m.as_ref()).unwrap();
        assert_eq!(got.dim, want.dim);
        for k in 0..3 {
            let (g, w) = (got.coefficients[k], want.coefficients[k]);
            let rel = (g - w).abs() / w.abs().max(1e-300);
            assert!(if w == 0.0 { g.abs() < 1e-10 } else { rel < 1e-6 }, "{name} c_{k}: {g} vs {w}");
        }
    }
}

#[test]
fn pinned_assembled_values() {
    let disk = builtin_model("disk", &json!({"radius": 1.0})).unwrap();
    assert_close(&assemble_c(disk.as_ref(), 2).unwrap().coefficients, &[0.5, 1.5, 1.125], 1e-10);
    let interval = builtin_model("interval", &json!({"length": 2.0})).unwrap();
    assert_close(&assemble_c(interval.as_ref(), 2).unwrap().coefficients, &[1.0, 1.0, 0.0], 1e-12);
    let sphere = builtin_model("sphere2_geodesic", &json!({"radius": 1.0})).unwrap();
    assert_close(&assemble_c(sphere.as_ref(), 2).unwrap().coefficients, &[2.0, 0.0, 2.0], 1e-10);
}

#[test]
fn odd_interior_terms_vanish_on_a_closed_manifold() {
    let sphere = builtin_model("sphere2_geodesic", &json!({"radius": 1.5})).unwrap();
    let c = assemble_c(sphere.as_ref(), 1).unwrap();
    assert_eq!(c.coefficients[1], 0.0);
}

#[test]
fn experimental_orders_are_gated() {
    let m = builtin_model("interval", &json!({"length": 2.0})).unwrap();
    assert!(matches!(assemble_c(m.as_ref(), 3), Err(ExpansionError::Experimental)));
    assert!(matches!(assemble_c(m.as_ref(), 5), Err(ExpansionError::JetShortfall { need: 5, .. })));
    let opts = AssembleOptions { experimental: true, ..Default::default() };
    let c = assemble_c_with(m.as_ref(), 4, &opts).unwrap();
    assert_close(&c.coefficients, &[1.0, 1.0, 0.0, 0.0, 0.0], 1e-12);
    let zero = AssembleOptions { boundary_budget: 0, ..Default::default() };
    assert!(matches!(assemble_c_with(m.as_ref(), 2, &zero), Err(ExpansionError::ZeroBudget)));
}

#[test]
fn interval_scaling() {
    for t in [0.5, 2.0, 3.0] {
        let a = builtin_model("interval", &json!({"length": 2.0})).unwrap();
        let b = builtin_model("interval", &json!({"length": 2.0 * t})).unwrap();
        let ca = assemble_c(a.as_ref(), 2).unwrap().coefficients;
        let cb = assemble_c(b.as_ref(), 2).unwrap().coefficients;
        assert!((cb[0] - t * ca[0]).abs() < 1e-12);
        assert!((cb[1] - ca[1]).abs() < 1e-12);
    }
}

#[test]
fn series_evaluation() {
    let interval = ExpansionSeries::new(1, vec![1.0, 1.0, 0.0]);
    assert!((eval_series(&interval, 10.0) - 11.0).abs() < 1e-12);
    let disk = ExpansionSeries::new(2, vec![0.5, 1.5, 1.125]);
    assert!((eval_series(&disk, 4.0) - 15.125).abs() < 1e-12);
    assert_eq!(eval_series(&ExpansionSeries::new(2, vec![0.0; 3]), 3.0), 0.0);
    assert!(eval_series(&disk, -1.0).is_nan());
}

#[test]
fn energy_of_the_interval_and_constants() {
    let e = energy_series(&ExpansionSeries::new(1, vec![1.0, 1.0, 0.0])).unwrap();
    assert_close(&e.coefficients, &[1.0, -1.0, 1.0], 1e-15);
    let e = energy_series(&ExpansionSeries::new(3, vec![1.0, 0.0, 0.0, 0.0])).unwrap();
    assert_eq!(e.coefficients, vec![1.0, 0.0, 0.0, 0.0]);
    assert!(matches!(
        energy_series(&ExpansionSeries::new(2, vec![0.0, 1.0])),
        Err(ExpansionError::VanishingLeading)
    ));
}

/// The reciprocal series against the energy formulas written with the
/// normalization `ε_k = ε_0 · (…)`: `ε_1 = −ε_0 (n+1) vol(∂X)/(2 vol)` and
/// `ε_2 = ε_0 ((n+1)² vol(∂X)²/(4 vol²) − n!ω_n c_2/vol)`.
#[test]
fn energy_matches_the_geometric_formulas() {
    for (name, params) in [
        ("interval", json!({"length": 2.0})),
        ("interval", json!({"length": 3.0})),
        ("disk", json!({"radius": 1.0})),
        ("ball3", json!({"radius": 1.3})),
        ("sphere2_geodesic", json!({"radius": 0.7})),
    ] {
        let m = builtin_model(name, &params).unwrap();
        let cf = m.closed_form().unwrap();
        let n = m.dim() as f64;
        let nw = maglab_symbols::n_fact_omega(m.dim());
        let c = closed_form_c012(m.as_ref()).unwrap();
        let e = energy_series(&c).unwrap().coefficients;
        let e0 = nw / cf.vol;
        let e1 = -(n + 1.0) * cf.vol_boundary / (2.0 * cf.vol);
        let e2 = (n + 1.0).powi(2) * cf.vol_boundary.powi(2) / (4.0 * cf.vol.powi(2)) - nw * c.coefficients[2] / cf.vol;
        assert_close(&e, &[e0, e0 * e1, e0 * e2], 1e-12);
    }
}

#[test]
fn disk_energy_is_the_reciprocal() {
    let e = energy_series(&ExpansionSeries::new(2, vec![0.5, 1.5, 1.125])).unwrap();
    // 1/(1/2 + 3/2 t + 9/8 t²) = 2 − 6t + 27/2 t² + …
    assert_close(&e.coefficients, &[2.0, -6.0, 13.5], 1e-15);
    let r = 200.0;
    let m = ExpansionSeries::new(2, vec![0.5, 1.5, 1.125]).eval(r);
    assert!((e.eval(r) * m - 1.0).abs() < 1e-4);
}

#[test]
fn series_round_trip_through_json() {
    let c = ExpansionSeries::new(2, vec![0.5, 1.5, 1.125]);
    let s = serde_json::to_string(&c).unwrap();
    assert_eq!(serde_json::from_str::<ExpansionSeries>(&s).unwrap(), c);
    let p = formal_product(&c, &energy_series(&c).unwrap());
    assert_close(&p, &[1.0, 0.0, 0.0], 1e-15);
}
