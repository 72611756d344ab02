use std::f64::consts::PI;
use std::sync::Arc;

use maglab_boundary::*;
use maglab_core::{frak_c, Mono, Poly, Trunc, C64};
use maglab_geometry::{ball_collar, builtin_model, disk_collar, ellipse_collar, embedded_chart};
use maglab_symbols::{n_fact_omega, random_chart, TaylorModelChart};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

/// Half-space with transversal coordinate `t ↦ t + a t²`, so `h₀ = 1` on
/// the boundary but `∂_{x_n} h₀ = −4a`.
fn stretched_half_space(dim: usize, a: f64) -> TaylorModelChart {
    let nv = 2 * dim;
    let t = Poly::var(nv, dim - 1);
    let mut comps: Vec<Poly> = (0..dim - 1).map(|i| Poly::var(nv, i)).collect();
    comps.push(t.add(&t.mul(&t, &Trunc::none()).scale_re(a)));
    embedded_chart(&comps, dim, 1, 3).unwrap()
}

/// Disk collar with transversal coordinate `t ↦ t + a t²`.
fn stretched_disk(a: f64) -> TaylorModelChart {
    let tr = Trunc::total(4);
    let s = Poly::var(4, 0);
    let t = Poly::var(4, 1);
    let r = Poly::real(4, 1.0).sub(&t).sub(&t.mul(&t, &tr).scale_re(a));
    embedded_chart(&[r.mul(&s.cos(&tr), &tr), r.mul(&s.sin(&tr), &tr)], 2, 1, 3).unwrap()
}

/// `G = |v′|² + v_n²/4`, whose dual metric has `h₀ = 4`.
fn scaled_normal_chart() -> TaylorModelChart {
    let mut g = Poly::zero(4);
    g.add_term(Mono::from_exps(&[0, 0, 2, 0]), C64::new(1.0, 0.0));
    g.add_term(Mono::from_exps(&[0, 0, 0, 2]), C64::new(0.25, 0.0));
    TaylorModelChart::from_expansion(2, &g, 2, 4).unwrap()
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

fn mu(n: usize) -> f64 {
    (n as f64 + 1.0) / 2.0
}

#[test]
fn roots_at_base_points() {
    let i = C64::new(0.0, 1.0);
    for chart in [TaylorModelChart::flat(2, 1, 3), TaylorModelChart::flat(3, 1, 3), disk_collar(1.0, 0.4, 1, 3).unwrap()] {
        let r = split_metric(&chart, 1, &vec![0.0; chart.dim - 1]).unwrap();
        assert!(close(r.root_at_base(Sign::Plus), i, 1e-14));
        assert!(close(r.root_at_base(Sign::Minus), -i, 1e-14));
        assert!((r.h0.constant_term().re - 1.0).abs() < 1e-14);
        assert!(r.b_xi.max_abs() < 1e-14);
    }
    let r = split_metric(&scaled_normal_chart(), 2, &[0.0]).unwrap();
    assert!(close(r.root_at_base(Sign::Plus), i * 0.5, 1e-14));
    assert!(close(r.root_at_base(Sign::Minus), -i * 0.5, 1e-14));
    assert!(split_metric(&scaled_normal_chart(), 2, &[0.0, 1.0]).is_err());
}

#[test]
fn root_identity_and_ordering() {
    for seed in 0..6 {
        let chart = random_chart(2 + (seed as usize % 2), 3, 5, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xi0: Vec<f64> = (0..chart.dim - 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let r = split_metric(&chart, 3, &xi0).unwrap();
        assert!(r.root_at_base(Sign::Plus).im > 0.0 && r.root_at_base(Sign::Minus).im < 0.0);
        assert!(r.root_identity_jet_residual() < 1e-12);
        for _ in 0..10 {
            let x = rng.gen_range(-5.0..5.0);
            assert!(r.root_identity_residual(x) < 1e-12 * (1.0 + x * x));
        }
    }
}

#[test]
fn partial_fraction_k11() {
    let chart = random_chart(2, 1, 3, 7);
    let roots = Arc::new(split_metric(&chart, 1, &[0.3]).unwrap());
    let (p, m) = partial_fraction(1, 1, &roots).unwrap();
    let hp = roots.root_at_base(Sign::Plus);
    let hm = roots.root_at_base(Sign::Minus);
    let d_inv = (hp - hm).inv();
    assert_eq!(p.terms().len(), 1);
    assert_eq!(m.terms().len(), 1);
    assert!(close(p.terms()[&(-2, 0)].constant_term(), d_inv, 1e-14));
    assert!(close(m.terms()[&(0, -2)].constant_term(), -d_inv, 1e-14));
}

#[test]
fn partial_fraction_corollary_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for seed in 0..5 {
        let chart = random_chart(2, 1, 3, 100 + seed);
        let roots = Arc::new(split_metric(&chart, 1, &[rng.gen_range(-1.5..1.5)]).unwrap());
        let hp = roots.root_at_base(Sign::Plus);
        let (a, b) = partial_fraction_xi(1, 2, 2, &roots).unwrap();
        let lhs = a.add(&b);
        let (k12p, k12m) = partial_fraction(1, 2, &roots).unwrap();
        let (k22p, k22m) = partial_fraction(2, 2, &roots).unwrap();
        for _ in 0..5 {
            let x = rng.gen_range(-4.0..4.0);
            let rhs = k12p.eval(x) + k12m.eval(x) + hp * (k22p.eval(x) + k22m.eval(x));
            assert!(close(lhs.eval(x), rhs, 1e-12));
        }
    }
}

#[test]
fn coincident_roots_are_rejected_by_construction() {
    // a positive definite metric never has h_+ = h_−; the split of a
    // polynomial part is the error path instead
    let chart = TaylorModelChart::flat(2, 1, 3);
    let roots = Arc::new(split_metric(&chart, 1, &[0.0]).unwrap());
    assert!(matches!(partial_fraction_xi(4, 1, 1, &roots), Err(BoundaryError::PolynomialPart(_))));
}

#[test]
fn base_factors_are_the_closed_pair() {
    let chart = ellipse_collar(1.4, 0.8, 0.9, 1, 3).unwrap();
    let eng = BoundaryEngine::new(&chart, 1, &[0.5]).unwrap();
    let nw = n_fact_omega(2);
    let qp = eng.factor(Sign::Plus, 0);
    assert_eq!(qp.terms().len(), 1);
    assert!(close(qp.terms()[&(-3, 0)].constant_term(), C64::new(nw, 0.0), 1e-15));
    let qm = eng.factor(Sign::Minus, 0);
    assert!(close(qm.terms()[&(0, -3)].constant_term(), C64::new(1.0, 0.0), 1e-12));
    let wp = eng.inverse(Sign::Plus, 0);
    assert!(close(wp.terms()[&(3, 0)].constant_term(), C64::new(1.0 / nw, 0.0), 1e-15));
    assert_eq!(qp.class(), Some((-3, 0)));
}

#[test]
fn flat_half_space_has_no_corrections() {
    for dim in [1, 2, 3] {
        let chart = TaylorModelChart::flat(dim, 2, 4);
        let eng = BoundaryEngine::new(&chart, 2, &vec![0.7; dim - 1]).unwrap();
        for j in 1..=2 {
            for s in [Sign::Plus, Sign::Minus] {
                assert!(eng.factor(s, j).max_abs() < 1e-14, "dim {dim} q_{j}");
                assert!(eng.inverse(s, j).max_abs() < 1e-14, "dim {dim} w_{j}");
            }
        }
    }
}

/// Random `(ξ′, ξ_n, R)` probes, rescaled to `R = 1`, grouped by `ξ′`.
fn probes(dim: usize, seed: u64, centres: usize, per: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..centres)
        .map(|_| {
            let r: f64 = rng.gen_range(0.5..3.0);
            let xi: Vec<f64> = (0..dim - 1).map(|_| rng.gen_range(-3.0..3.0) / r).collect();
            let xn: Vec<f64> = (0..per).map(|_| rng.gen_range(-4.0..4.0) / r).collect();
            (xi, xn)
        })
        .collect()
}

fn collar_suite() -> Vec<(&'static str, TaylorModelChart)> {
    vec![
        ("half-space", TaylorModelChart::flat(2, 3, 5)),
        ("disk", disk_collar(1.0, 0.3, 3, 5).unwrap()),
        ("ellipse", ellipse_collar(1.5, 1.0, 1.1, 3, 5).unwrap()),
        ("ball3", ball_collar(1.0, &[0.3, -0.2], 3, 5).unwrap()),
    ]
}

#[test]
fn factorization_and_inverse_residuals_through_order_3() {
    for (name, chart) in collar_suite() {
        for (xi0, xns) in probes(chart.dim, 5, 5, 10) {
            let eng = BoundaryEngine::new(&chart, 3, &xi0).unwrap();
            assert!(eng.structure_ok(), "{name}: mixed roots in a factor");
            for j in 0..=3 {
                let r = eng.factorization_residual(j, &xns);
                assert!(r < 1e-9, "{name} j={j} factorization residual {r:e}");
                for s in [Sign::Plus, Sign::Minus] {
                    let r = eng.inverse_residual(s, j, &xns);
                    assert!(r < 1e-9, "{name} j={j} {s:?} inverse residual {r:e}");
                }
            }
        }
    }
}

#[test]
fn convenience_wrappers_match_engine() {
    let chart = disk_collar(1.0, 0.0, 1, 3).unwrap();
    let (qp, qm) = factorize_boundary_symbol(&chart, 1).unwrap();
    assert!(qp.is_pure(Sign::Plus) && qm.is_pure(Sign::Minus));
    let w = invert_factor(&chart, Sign::Minus, 1).unwrap();
    assert!(w.is_pure(Sign::Minus) && !w.is_zero());
}

/// `ι_v g` contracted into `C³` with real or complex weights.
fn c3_form(chart: &TaylorModelChart, u: &[C64], v: &[C64], w: &[C64]) -> C64 {
    let n = chart.dim;
    let c3 = chart.c_poly(3);
    let zero = vec![0.0; 2 * n];
    let mut s = C64::new(0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut m = Mono::one();
                m.0[n + a] += 1;
                m.0[n + b] += 1;
                m.0[n + c] += 1;
                let t = c3.deriv_multi(&m).eval_re(&zero).re / 6.0;
                s += u[a] * v[b] * w[c] * t;
            }
        }
    }
    s
}

/// The order-one factor coefficient of `(ξ_n − h_±)^{−μ−2}`: a multiple of
/// `C³` evaluated on `g(ξ′ + h_± e_n)`.
fn a1_closed_form(chart: &TaylorModelChart, xi0: &[f64], h: C64, h_pm: C64, h0: f64) -> C64 {
    let n = chart.dim;
    let nw = n_fact_omega(n);
    let c1 = frak_c(1, n as i64).unwrap().to_f64();
    let g = chart.base_dual();
    let v: Vec<C64> = (0..n)
        .map(|a| {
            let tang: f64 = (0..n - 1).map(|i| g[a][i] * xi0[i]).sum();
            C64::new(tang, 0.0) + h * g[a][n - 1]
        })
        .collect();
    let poch = ((n + 3) * (n + 1) * (n - 1)) as f64;
    C64::new(0.0, 1.0) * c1 * poch / nw / (h0 * h0) / (h_pm * h_pm) * c3_form(chart, &v, &v, &v)
}

#[test]
fn order_one_factors_match_closed_forms() {
    // the coefficient table carries the opposite sign for even n (see the
    // coefficient convention in maglab-core)
    for (chart, xi0, sign_n) in [
        (ellipse_collar(1.3, 1.0, 0.4, 2, 4).unwrap(), vec![0.4], -1.0),
        (disk_collar(2.0, 1.0, 2, 4).unwrap(), vec![-0.7], -1.0),
        (ball_collar(1.0, &[0.2, 0.1], 2, 4).unwrap(), vec![0.3, -0.5], 1.0),
    ] {
        let n = chart.dim;
        let nw = n_fact_omega(n);
        let m2 = n as i32 + 1;
        let eng = BoundaryEngine::new(&chart, 1, &xi0).unwrap();
        let r = eng.roots();
        let (hp, hm) = (r.root_at_base(Sign::Plus), r.root_at_base(Sign::Minus));
        let h0 = r.h0.constant_term().re;
        let h0_mu = h0.powf(mu(n));
        let z = vec![0.0; r.nvars()];
        for (sign, h, key_q, key_w) in [
            (Sign::Plus, hp, (-m2 - 4, 0), (m2 - 4, 0)),
            (Sign::Minus, hm, (0, -m2 - 4), (0, m2 - 4)),
        ] {
            let a1 = a1_closed_form(&chart, &xi0, h, hp - hm, h0) * sign_n;
            let got = eng.factor(sign, 1).terms()[&key_q].constant_term();
            let expect = match sign {
                Sign::Plus => a1 * nw,
                Sign::Minus => a1 * h0.powf(-mu(n)),
            };
            assert!(close(got, expect, 1e-10), "n={n} {sign:?}: {got} vs {expect}");
            // w_{±,1} at (ξ_n − h_±)^{μ−2}: −w₀² q_{±,1} plus the transport term
            let root = r.root(sign);
            let dn = root.deriv(n - 1).eval_re(&z);
            let tang: C64 = (0..n - 1).map(|i| root.deriv(n + i).eval_re(&z) * root.deriv(i).eval_re(&z)).sum();
            let transport = C64::new(0.0, mu(n) * mu(n)) * (dn - tang);
            let w_expect = match sign {
                Sign::Plus => (-a1 + transport) / nw,
                Sign::Minus => (-a1 + transport) * h0_mu,
            };
            let w_got = eng.inverse(sign, 1).terms()[&key_w].constant_term();
            assert!(close(w_got, w_expect, 1e-10), "n={n} {sign:?} w: {w_got} vs {w_expect}");
        }
    }
}

fn b1_closed(n: usize) -> f64 {
    (n as f64 + 1.0) / (2.0 * n_fact_omega(n))
}

#[test]
fn b1_on_model_boundaries() {
    for (name, params) in [
        ("interval", json!({"length": 2.0})),
        ("disk", json!({"radius": 1.5})),
        ("ellipse", json!({"a": 1.5, "b": 1.0})),
        ("ball3", json!({"radius": 0.8})),
    ] {
        let model = builtin_model(name, &params).unwrap();
        let quad = model.boundary_quadrature(12);
        for p in quad.points.iter().take(6) {
            let chart = model.boundary_collar(p, 1, 3).unwrap().unwrap();
            let b1 = boundary_density_b(&chart, 1).unwrap();
            let expect = b1_closed(model.dim());
            assert!((b1 - expect).abs() < 1e-12, "{name} at {p:?}: {b1} vs {expect}");
        }
    }
}

#[test]
fn b1_parity_across_dimensions() {
    for n in 1..=4 {
        let b1 = boundary_density_b(&TaylorModelChart::flat(n, 1, 3), 1).unwrap();
        assert!((b1 - b1_closed(n)).abs() < 1e-12, "n={n}: {b1}");
    }
}

fn b2_per_mean_curvature(n: usize) -> f64 {
    mu(n) * mu(n) * (n as f64 - 1.0) / (2.0 * n_fact_omega(n))
}

#[test]
fn b2_examples() {
    let flat = TaylorModelChart::flat(2, 1, 3);
    assert!(boundary_density_b(&flat, 2).unwrap().abs() < 1e-14);
    let disk = disk_collar(1.0, 0.2, 1, 3).unwrap();
    let b2 = boundary_density_b(&disk, 2).unwrap();
    assert!((b2 - 9.0 / (16.0 * PI)).abs() < 1e-12, "disk B2 {b2}");
    let ball = ball_collar(2.0, &[0.4, 0.1], 1, 3).unwrap();
    let b2 = boundary_density_b(&ball, 2).unwrap();
    assert!((b2 - b2_per_mean_curvature(3) * 0.5).abs() < 1e-12, "ball B2 {b2}");
    for k in 2..=3 {
        let b = boundary_density_b(&TaylorModelChart::flat(1, 2, 4), k).unwrap();
        assert!(b.abs() < 1e-14, "interval B{k} = {b}");
    }
}

#[test]
fn b2_over_mean_curvature_is_constant_on_an_ellipse() {
    let (a, b) = (1.5, 1.0);
    let expect = b2_per_mean_curvature(2);
    for i in 0..16 {
        let th = i as f64 * 2.0 * PI / 16.0 + 0.05;
        let chart = ellipse_collar(a, b, th, 1, 3).unwrap();
        let kappa = a * b / ((a * th.sin()).powi(2) + (b * th.cos()).powi(2)).powf(1.5);
        let ratio = boundary_density_b(&chart, 2).unwrap() / kappa;
        assert!((ratio - expect).abs() < 1e-9, "θ={th}: {ratio} vs {expect}");
    }
}

#[test]
fn literal_sum_agrees_at_first_order_only() {
    let disk = disk_collar(1.0, 0.0, 1, 3).unwrap();
    let l1 = boundary_density_b_literal(&disk, 1).unwrap();
    assert!((l1 - b1_closed(2)).abs() < 1e-12);
    let l2 = boundary_density_b_literal(&disk, 2).unwrap();
    let b2 = boundary_density_b(&disk, 2).unwrap();
    assert!((l2 - b2).abs() > 1e-3, "literal sum unexpectedly matches: {l2}");
}

#[test]
fn appendix_products_flat() {
    for e in evaluated_symbol_table(&TaylorModelChart::flat(2, 1, 3)).unwrap() {
        assert!(e.computed.norm() < 1e-14 && e.closed_form.norm() < 1e-14, "{}", e.name);
    }
}

#[test]
fn appendix_products_with_transversal_stretch() {
    for a in [0.3, -0.5] {
        let chart = stretched_half_space(2, a);
        let roots = split_metric(&chart, 1, &[0.0]).unwrap();
        let dn_h0 = roots.h0.deriv(1).constant_term().re;
        assert!((dn_h0 + 4.0 * a).abs() < 1e-12);
        let table = evaluated_symbol_table(&chart).unwrap();
        let m = mu(2);
        let expect = m * (m - 1.0) * (m - 2.0) * dn_h0 / (2.0 * n_fact_omega(2));
        assert!(close(table[0].computed, C64::new(expect, 0.0), 1e-12));
        for e in &table[..3] {
            assert!(e.discrepancy() < 1e-12, "{}: {} vs {}", e.name, e.computed, e.closed_form);
        }
    }
}

#[test]
fn appendix_products_in_normal_collars() {
    // C³ parts agree; for even n the coefficient table flips the sign
    let disk = evaluated_symbol_table(&disk_collar(1.0, 0.0, 1, 3).unwrap()).unwrap();
    for e in &disk[3..] {
        assert!(close(e.computed, -e.closed_form, 1e-12), "{}", e.name);
    }
    let ball = evaluated_symbol_table(&ball_collar(1.0, &[0.1, 0.2], 1, 3).unwrap()).unwrap();
    for e in &ball {
        assert!(e.discrepancy() < 1e-12, "{}: {} vs {}", e.name, e.computed, e.closed_form);
    }
}

#[test]
fn empirical_alpha_coefficients() {
    let n2 = vec![
        disk_collar(1.0, 0.0, 1, 3).unwrap(),
        stretched_half_space(2, 0.3),
        stretched_half_space(2, -0.5),
        stretched_disk(0.2),
        disk_collar(2.0, 0.0, 1, 3).unwrap(),
        ellipse_collar(1.5, 1.0, 0.7, 1, 3).unwrap(),
    ];
    let (a1, a2, res) = empirical_alpha(&n2).unwrap();
    println!("n=2: α₁ = {a1}, α₂ = {a2}, residual {res:e}");
    assert!(res < 1e-9);
    assert!((a1 + 27.0 / 8.0).abs() < 1e-9 && (a2 - 27.0 / 8.0).abs() < 1e-9);
    let n3 = vec![
        ball_collar(1.0, &[0.0, 0.0], 1, 3).unwrap(),
        stretched_half_space(3, 0.3),
        ball_collar(2.0, &[0.1, 0.0], 1, 3).unwrap(),
        stretched_half_space(3, -0.2),
    ];
    let (a1, a2, res) = empirical_alpha(&n3).unwrap();
    println!("n=3: α₁ = {a1}, α₂ = {a2}, residual {res:e}");
    assert!(res < 1e-9);
    assert!((a1 + 6.0).abs() < 1e-9 && (a2 - 6.0).abs() < 1e-9);
}

#[test]
fn json_dump_lists_factor_terms() {
    // order 2 keeps the η² jets, where the (ξ_n − h_+)^{−μ−2} term of the disk lives
    let v = boundary_symbols_json(&disk_collar(1.0, 0.0, 2, 4).unwrap(), 2).unwrap();
    assert_eq!(v["dim"], 2);
    let q1 = &v["q_plus"][1]["symbol"]["terms"];
    assert!(q1.as_array().unwrap().iter().all(|t| t["sigma"] == "+"));
    let exps: Vec<f64> = q1.as_array().unwrap().iter().map(|t| t["exp_plus"].as_f64().unwrap()).collect();
    assert!(exps.contains(&-2.5) && exps.contains(&-3.5));
    assert!(v["w_minus"][1]["symbol"]["terms"].as_array().unwrap().iter().all(|t| t["sigma"] == "-"));
}
