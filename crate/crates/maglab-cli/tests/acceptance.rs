//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the test harness so the lines are always shown. The process
//! fails only when a gating check fails; criterion 9 and the literal energy
//! comparison of criterion 7 are reported without gating.

use std::f64::consts::PI;
use std::time::Instant;

use maglab_boundary::{boundary_density_b, BoundaryEngine, Sign};
use maglab_core::{gamma_identity_check, index_set_I};
use maglab_expansion::{assemble_c, closed_form_c012, energy_series, formal_product, ExpansionSeries};
use maglab_geometry::{ball_collar, builtin_model, disk_collar, ellipse_collar, GeometryModel};
use maglab_oracle::{
    fit_coefficients_with, log_grid, nystrom_magnitude_with, pd_probe, FiniteSpace, Parallelism, Scheme,
};
use maglab_symbols::{identity_residual, leibniz_compose, n_fact_omega, random_chart, SymbolEngine, TaylorModelChart};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    /// Whether the gating part of the criterion holds.
    gate: bool,
    detail: String,
}

impl Outcome {
    fn gated(pass: bool, detail: String) -> Self {
        Outcome { pass, gate: pass, detail }
    }
}

fn model(name: &str, params: serde_json::Value) -> Box<dyn GeometryModel> {
    builtin_model(name, &params).expect("builtin model")
}

fn within(x: f64, target: f64, rel: f64) -> bool {
    (x - target).abs() <= rel * target.abs()
}

fn criterion_1() -> Outcome {
    let m = model("interval", json!({"length": 2.0}));
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for r in [5.0, 10.0, 20.0, 40.0] {
        match nystrom_magnitude_with(m.as_ref(), 2000, r, Scheme::Points, Parallelism::default()) {
            Ok(mag) => worst = worst.max((mag - (r + 1.0)).abs() / (r + 1.0)),
            Err(e) => return Outcome::gated(false, format!("solver failed at R={r}: {e}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::gated(worst <= 1e-3 && secs <= 60.0, format!("max rel err {worst:.2e} (≤ 1e-3), {secs:.1}s (≤ 60s)"))
}

fn criterion_2() -> Outcome {
    let m = model("disk", json!({"radius": 1.0}));
    let grid = log_grid(8.0, 40.0, 8);
    let start = Instant::now();
    let fit = match fit_coefficients_with(m.as_ref(), &grid, 4000, 2, Scheme::Rings, Parallelism::default()) {
        Ok(f) => f,
        Err(e) => return Outcome::gated(false, format!("rings fit failed: {e}")),
    };
    let secs = start.elapsed().as_secs_f64();
    let c = &fit.coefficients;
    let pass = within(c[0], 0.5, 0.05) && within(c[1], 1.5, 0.10) && within(c[2], 1.125, 0.25) && secs <= 600.0;
    let points = match fit_coefficients_with(m.as_ref(), &grid, 4000, 2, Scheme::Points, Parallelism::default()) {
        Ok(f) => format!("({:.4}, {:.4}, {:.4})", f.coefficients[0], f.coefficients[1], f.coefficients[2]),
        Err(e) => format!("failed: {e}"),
    };
    Outcome::gated(
        pass,
        format!(
            "rings N=4000: ĉ = ({:.5}, {:.4}, {:.4}) vs (0.5, 1.5, 1.125), {secs:.0}s (≤ 600s); \
             point-sample fit N=4000, not gating: {points}",
            c[0], c[1], c[2]
        ),
    )
}

fn criterion_3() -> Outcome {
    let m = model("sphere2_geodesic", json!({"radius": 1.0}));
    let grid = log_grid(8.0, 40.0, 8);
    match fit_coefficients_with(m.as_ref(), &grid, 3000, 2, Scheme::Corrected, Parallelism::default()) {
        Ok(f) => {
            let c = &f.coefficients;
            let pass = within(c[0], 2.0, 0.05) && c[1].abs() <= 0.1 && within(c[2], 2.0, 0.25);
            Outcome::gated(pass, format!("corrected N=3000: ĉ = ({:.5}, {:.2e}, {:.5}) vs (2, 0, 2)", c[0], c[1], c[2]))
        }
        Err(e) => Outcome::gated(false, format!("fit failed: {e}")),
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_compose: f64 = 0.0;
    let mut worst_hom: f64 = 0.0;
    let mut worst_par: f64 = 0.0;
    for n in 1..=5usize {
        let chart = random_chart(n, 3, 5, SEED + n as u64);
        let mut engine = match SymbolEngine::new(&chart, 3) {
            Ok(e) => e,
            Err(e) => return Outcome::gated(false, format!("n={n}: {e}")),
        };
        // any log term with nonzero residue surfaces here as an error
        let (q, a) = match (engine.q_family(3), engine.parametrix(3)) {
            (Ok(q), Ok(a)) => (q, a),
            (Err(e), _) | (_, Err(e)) => return Outcome::gated(false, format!("n={n}: {e}")),
        };
        let probes: Vec<(Vec<f64>, f64)> = (0..10)
            .map(|_| ((0..n).map(|_| rng.gen_range(-2.0..2.0)).collect(), rng.gen_range(0.3..2.0)))
            .collect();
        for (lhs, rhs) in [(&q, &a), (&a, &q)] {
            match leibniz_compose(lhs, rhs, 3) {
                Ok(c) => worst_compose = worst_compose.max(identity_residual(&c, &probes)),
                Err(e) => return Outcome::gated(false, format!("n={n} composition: {e}")),
            }
        }
        for _ in 0..100 {
            let xi: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let r = rng.gen_range(0.2..2.0);
            let t = rng.gen_range(0.5..2.0);
            let scaled: Vec<f64> = xi.iter().map(|v| v * t).collect();
            let flipped: Vec<f64> = xi.iter().map(|v| -v).collect();
            for (j, qj) in q.iter().enumerate() {
                let deg = -(n as i32) - 1 - j as i32;
                let base = qj.eval(&xi, r);
                let scale = base.norm().max(qj.eval_scale(&xi, r));
                worst_hom = worst_hom.max((qj.eval(&scaled, t * r) - base * t.powi(deg)).norm() / (scale * t.powi(deg)));
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                worst_par = worst_par.max((qj.eval(&flipped, r) - base * sign).norm() / scale);
            }
        }
    }
    let pass = worst_compose < 1e-10 && worst_hom < 1e-10 && worst_par < 1e-10;
    Outcome::gated(
        pass,
        format!(
            "n=1..5 order 3: composition residual {worst_compose:.1e} (< 1e-10); homogeneity {worst_hom:.1e}, \
             parity {worst_par:.1e} over 100 probes each; no log residue"
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let collars: Vec<(&str, TaylorModelChart)> = vec![
        ("half-space", TaylorModelChart::flat(2, 3, 5)),
        ("disk", disk_collar(1.0, 0.3, 3, 5).expect("disk collar")),
        ("ellipse", ellipse_collar(1.5, 1.0, 1.1, 3, 5).expect("ellipse collar")),
        ("ball3", ball_collar(1.0, &[0.3, -0.2], 3, 5).expect("ball collar")),
    ];
    let (mut fact, mut inv): (f64, f64) = (0.0, 0.0);
    for (name, chart) in &collars {
        for _ in 0..5 {
            let r: f64 = rng.gen_range(0.5..3.0);
            let xi0: Vec<f64> = (0..chart.dim - 1).map(|_| rng.gen_range(-3.0..3.0) / r).collect();
            let xns: Vec<f64> = (0..10).map(|_| rng.gen_range(-4.0..4.0) / r).collect();
            let eng = match BoundaryEngine::new(chart, 3, &xi0) {
                Ok(e) => e,
                Err(e) => return Outcome::gated(false, format!("{name}: {e}")),
            };
            for j in 0..=3 {
                fact = fact.max(eng.factorization_residual(j, &xns));
                for s in [Sign::Plus, Sign::Minus] {
                    inv = inv.max(eng.inverse_residual(s, j, &xns));
                }
            }
        }
    }
    let mut b1_err: f64 = 0.0;
    for (name, params) in [
        ("interval", json!({"length": 2.0})),
        ("disk", json!({"radius": 1.5})),
        ("ellipse", json!({"a": 1.5, "b": 1.0})),
        ("ball3", json!({"radius": 0.8})),
    ] {
        let m = model(name, params);
        let expect = (m.dim() as f64 + 1.0) / (2.0 * n_fact_omega(m.dim()));
        for p in m.boundary_quadrature(12).points.iter().take(6) {
            let chart = m.boundary_collar(p, 1, 3).ok().flatten();
            match chart.map(|c| boundary_density_b(&c, 1)) {
                Some(Ok(b1)) => b1_err = b1_err.max((b1 - expect).abs()),
                _ => return Outcome::gated(false, format!("{name}: no B₁ at {p:?}")),
            }
        }
    }
    let (a, b) = (1.5, 1.0);
    let mu = 1.5;
    let expect = mu * mu / (2.0 * n_fact_omega(2));
    let mut b2_err: f64 = 0.0;
    for i in 0..16 {
        let th = i as f64 * 2.0 * PI / 16.0 + 0.05;
        let kappa = a * b / ((a * th.sin()).powi(2) + (b * th.cos()).powi(2)).powf(1.5);
        match ellipse_collar(a, b, th, 1, 3).map(|c| boundary_density_b(&c, 2)) {
            Ok(Ok(b2)) => b2_err = b2_err.max((b2 / kappa - expect).abs()),
            _ => return Outcome::gated(false, format!("no B₂ at θ={th}")),
        }
    }
    let pass = fact < 1e-9 && inv < 1e-9 && b1_err < 1e-12 && b2_err < 1e-9;
    Outcome::gated(
        pass,
        format!(
            "factorization {fact:.1e}, inverse {inv:.1e} (< 1e-9); B₁ err {b1_err:.1e} (< 1e-12); \
             B₂/H − μ²/(2·2!ω₂) along ellipse {b2_err:.1e} (< 1e-9)"
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut worst: f64 = 0.0;
    for (name, params) in [
        ("interval", json!({"length": 2.0})),
        ("disk", json!({"radius": 1.0})),
        ("ball3", json!({"radius": 1.0})),
        ("sphere2_geodesic", json!({"radius": 1.0})),
    ] {
        let m = model(name, params);
        match (assemble_c(m.as_ref(), 2), closed_form_c012(m.as_ref())) {
            (Ok(a), Ok(c)) => {
                let scale = c.coefficients.iter().fold(0.0f64, |s, v| s.max(v.abs()));
                for (x, y) in a.coefficients.iter().zip(&c.coefficients) {
                    worst = worst.max((x - y).abs() / y.abs().max(1e-12 * scale).max(f64::MIN_POSITIVE));
                }
            }
            (Err(e), _) => return Outcome::gated(false, format!("{name}: {e}")),
            (_, Err(e)) => return Outcome::gated(false, format!("{name}: {e}")),
        }
    }
    Outcome::gated(worst < 1e-6, format!("max relative gap {worst:.1e} (< 1e-6) on interval, disk, ball3, sphere"))
}

/// The displayed energy coefficients, built from the geometric integrals.
fn literal_energy(m: &dyn GeometryModel) -> Option<[f64; 3]> {
    let cf = m.closed_form()?;
    let c2 = closed_form_c012(m).ok()?.coefficients[2];
    let n = m.dim() as f64;
    let nw = n_fact_omega(m.dim());
    let e1 = -(n + 1.0) * cf.vol_boundary / (2.0 * cf.vol);
    let e2 = (n + 1.0).powi(2) * cf.vol_boundary.powi(2) / (4.0 * cf.vol.powi(2)) - nw * c2 / cf.vol;
    Some([nw / cf.vol, e1, e2])
}

fn criterion_7() -> Outcome {
    let mut parts = Vec::new();
    let mut literal_ok = true;
    let mut gate = true;
    for (name, params) in [("interval", json!({"length": 2.0})), ("disk", json!({"radius": 1.0}))] {
        let m = model(name, params);
        let (Some(lit), Ok(c)) = (literal_energy(m.as_ref()), closed_form_c012(m.as_ref())) else {
            return Outcome::gated(false, format!("{name}: no closed form"));
        };
        let e = match energy_series(&c) {
            Ok(e) => e.coefficients,
            Err(err) => return Outcome::gated(false, format!("{name}: {err}")),
        };
        let ok = e.iter().zip(&lit).all(|(x, y)| (x - y).abs() <= 1e-12 * y.abs().max(1.0));
        literal_ok &= ok;
        // the interval has ε₀ = 1, where the literal and reciprocal forms coincide
        if name == "interval" {
            gate &= ok;
        }
        parts.push(format!(
            "{name}: ε = ({:.4}, {:.4}, {:.4}) vs displayed ({:.4}, {:.4}, {:.4}) {}",
            e[0],
            e[1],
            e[2],
            lit[0],
            lit[1],
            lit[2],
            if ok { "match" } else { "MISMATCH (displayed ε₁, ε₂ omit the factor ε₀)" }
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let c: Vec<f64> = (0..5).map(|k| if k == 0 { rng.gen_range(0.2..3.0) } else { rng.gen_range(-3.0..3.0) }).collect();
        let s = ExpansionSeries::new(2, c);
        match energy_series(&s) {
            Ok(e) => {
                let scale: f64 = s.coefficients.iter().chain(&e.coefficients).map(|v| v.abs()).fold(1.0, f64::max);
                let p = formal_product(&s, &e);
                for (k, v) in p.iter().enumerate().take(5) {
                    let target = if k == 0 { 1.0 } else { 0.0 };
                    worst = worst.max((v - target).abs() / (scale * scale));
                }
            }
            Err(err) => return Outcome::gated(false, format!("reciprocal: {err}")),
        }
    }
    let identity = worst < 1e-12;
    gate &= identity;
    parts.push(format!("reciprocal identity through K=4: {worst:.1e} (< 1e-12)"));
    let mut detail = parts.join("; ");
    if !literal_ok {
        detail.push_str("; disk mismatch is a known conflict in the displayed formulas, not gating");
    }
    Outcome { pass: literal_ok && identity, gate, detail }
}

fn criterion_8() -> Outcome {
    let mut failed = Vec::new();
    for n in 1..=15 {
        for k in 1..=7 {
            if !gamma_identity_check(n, k) {
                failed.push((n, k));
            }
        }
    }
    let sizes_ok = (1..=8u32).all(|j| index_set_I(j).len() == 1usize << (j - 1));
    Outcome::gated(
        failed.is_empty() && sizes_ok,
        format!("gamma identity failures {failed:?} over n ≤ 15, k ≤ 7; |I_j| = 2^(j−1) for j ≤ 8: {sizes_ok}"),
    )
}

fn criterion_9() -> Outcome {
    let grid = log_grid(0.1, 50.0, 10);
    let mut lines = Vec::new();
    let mut all = true;
    for (name, params, n) in [
        ("interval", json!({"length": 2.0}), 400),
        ("disk", json!({"radius": 1.0}), 600),
        ("ellipse", json!({"a": 1.5, "b": 1.0}), 600),
        ("ball3", json!({"radius": 1.0}), 600),
    ] {
        let m = model(name, params);
        match FiniteSpace::from_model(m.as_ref(), n, Parallelism::default()) {
            Ok(space) => {
                let pd = pd_probe(&space, &grid).iter().filter(|e| e.positive_definite).count();
                all &= pd == grid.len();
                lines.push(format!("{name} {pd}/{}", grid.len()));
            }
            Err(e) => {
                all = false;
                lines.push(format!("{name}: {e}"));
            }
        }
    }
    let torus = model("torus2_geodesic", json!({"length": 1.0}));
    let torus_line = match FiniteSpace::from_model(torus.as_ref(), 400, Parallelism::default()) {
        Ok(space) => {
            let entries = pd_probe(&space, &grid);
            let bad: Vec<String> = entries.iter().filter(|e| !e.positive_definite).map(|e| format!("{:.2}", e.r)).collect();
            format!("torus scan: not PD at R ∈ {{{}}}", bad.join(", "))
        }
        Err(e) => format!("torus scan failed: {e}"),
    };
    Outcome {
        pass: all,
        gate: true,
        detail: format!("Euclidean PD counts: {}; {torus_line}; diagnostic, not gating", lines.join(", ")),
    }
}

fn main() {
    let criteria: [(u8, &str, fn() -> Outcome); 9] = [
        (1, "interval ground truth", criterion_1),
        (2, "disk expansion fit", criterion_2),
        (3, "sphere expansion fit", criterion_3),
        (4, "symbol suite", criterion_4),
        (5, "boundary suite", criterion_5),
        (6, "pipeline cross-check", criterion_6),
        (7, "series algebra", criterion_7),
        (8, "exact coefficients", criterion_8),
        (9, "pd probes", criterion_9),
    ];
    let mut gate_failures = Vec::new();
    for (id, title, run) in criteria {
        let start = Instant::now();
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id} {status}: {title}: {} [{:.1}s]", o.detail, start.elapsed().as_secs_f64());
        if !o.gate {
            gate_failures.push(id);
        }
    }
    if !gate_failures.is_empty() {
        eprintln!("gating failures: {gate_failures:?}");
        std::process::exit(1);
    }
}
