//! Boundary densities `B_{d²,k}` and the evaluated low-order products.

use maglab_core::{frak_c, Mono, Poly, C64};
use maglab_symbols::{multi_indices, n_fact_omega, TaylorModelChart};
use serde_json::{json, Value};

use crate::error::BoundaryError;
use crate::factor::BoundaryEngine;
use crate::roots::Sign;
use crate::symbol::RootSymbol;

const I: C64 = C64::new(0.0, 1.0);

fn engine_for(chart: &TaylorModelChart, k: u32) -> Result<BoundaryEngine, BoundaryError> {
    if k == 0 {
        return Err(BoundaryError::Invalid("boundary densities start at k = 1".into()));
    }
    BoundaryEngine::new(chart, k - 1, &vec![0.0; chart.dim - 1])
}

/// `√det` of the tangential block of the metric at the base point.
fn boundary_volume_factor(chart: &TaylorModelChart) -> f64 {
    let h = chart.base_metric();
    let m = chart.dim - 1;
    let mut a: Vec<Vec<f64>> = (0..m).map(|i| h[i][..m].to_vec()).collect();
    // Gaussian elimination; the block is positive definite
    let mut det = 1.0;
    for c in 0..m {
        let p = a[c][c];
        det *= p;
        for r in c + 1..m {
            let f = a[r][c] / p;
            for k in c..m {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det.sqrt()
}

/// Value at `y = 0`, `ξ = 0`.
fn at_origin(s: &RootSymbol) -> C64 {
    s.at_xi_n_zero().constant_term()
}

/// `B_k` in chart coordinates (a density with respect to `dx′`).
///
/// With `φ_s = [Σ_{j+|α|=s} (1/α!) ∂_ξ^α w_{−,j} D_x^α ρ]` restricted to
/// `ξ = 0` and `t_u = Σ_{l+s+|α|=u} (1/α!) ∂_ξ^α w_{+,l} D_x^α φ_s`, the
/// density is `Σ_{u+m=k−1} i^{m−1}/(m+1)! ∂_{x_n}^m ∂_{ξ_n}^{m+1} t_u` at the
/// base point.
pub fn boundary_density_b_chart(eng: &BoundaryEngine, k: u32) -> Result<C64, BoundaryError> {
    let roots = eng.roots();
    if roots.xi0().iter().any(|&x| x != 0.0) {
        return Err(BoundaryError::Invalid("boundary densities need jets about ξ′ = 0".into()));
    }
    if k == 0 || k - 1 > eng.order() {
        return Err(BoundaryError::Invalid(format!("engine of order {} cannot give B_{k}", eng.order())));
    }
    let n = roots.dim();
    let nv = roots.nvars();
    let top = (k - 1) as usize;
    let rho = eng.density();
    let mut phi: Vec<Poly> = Vec::with_capacity(top + 1);
    for s in 0..=top {
        let mut p = Poly::zero(nv);
        for j in 0..=s {
            let m = (s - j) as u32;
            for alpha in multi_indices(n, m) {
                let w = eng.inverse(Sign::Minus, j).d_xi_multi(&alpha).at_xi_n_zero().zero_vars(n..nv);
                let d = rho.deriv_multi(&alpha).scale(C64::new(0.0, -1.0).powu(m));
                p.add_assign_scaled(&w.mul(&d, roots.trunc()), C64::new(1.0 / alpha.factorial(), 0.0));
            }
        }
        phi.push(p);
    }
    let mut b = C64::new(0.0, 0.0);
    for u in 0..=top {
        let mut t = RootSymbol::zero(roots);
        for l in 0..=u {
            for s in 0..=(u - l) {
                let m = (u - l - s) as u32;
                for alpha in multi_indices(n, m) {
                    let d = phi[s].deriv_multi(&alpha).scale(C64::new(0.0, -1.0).powu(m));
                    let term = eng.inverse(Sign::Plus, l).d_xi_multi(&alpha).mul_poly(&d);
                    t.add_assign_scaled(&term, C64::new(1.0 / alpha.factorial(), 0.0));
                }
            }
        }
        let m = top - u;
        let mut d = t;
        for _ in 0..=m {
            d = d.d_xi_n();
        }
        for _ in 0..m {
            d = d.d_y(n - 1);
        }
        let fact: f64 = (1..=m + 1).map(|i| i as f64).product();
        b += I.powi(m as i32 - 1) / fact * at_origin(&d);
    }
    Ok(b)
}

/// `B_{d²,k}` at the base point of a collar chart, as a density with respect
/// to the induced boundary measure.
pub fn boundary_density_b(chart: &TaylorModelChart, k: u32) -> Result<f64, BoundaryError> {
    let eng = engine_for(chart, k)?;
    let b = boundary_density_b_chart(&eng, k)? / boundary_volume_factor(chart);
    check_real(b)
}

fn check_real(b: C64) -> Result<f64, BoundaryError> {
    if b.im.abs() > 1e-8 * b.re.abs().max(1.0) {
        return Err(BoundaryError::Branch(b.im));
    }
    Ok(b.re)
}

/// The density defined by the literal sum
/// `Σ i^{|β|+γ_n} (−1)^{|β|+1} / (β′!(β_n+γ_n)!) ∂_x^β w_{−,j} ∂_{x_n}^{γ_n−1} ∂_ξ^{β+γ_n e_n} w_{+,l}`
/// over `|β| + γ_n + j + l = k`, `γ_n > 0`.
///
/// Kept as a diagnostic: it agrees with [`boundary_density_b`] for `k = 1`
/// but omits the density and composition terms that enter from `k = 2` on.
pub fn boundary_density_b_literal(chart: &TaylorModelChart, k: u32) -> Result<f64, BoundaryError> {
    let eng = engine_for(chart, k)?;
    let n = chart.dim;
    let mut b = C64::new(0.0, 0.0);
    for gamma in 1..=k {
        for j in 0..=(k - gamma) {
            for l in 0..=(k - gamma - j) {
                let m = k - gamma - j - l;
                for beta in multi_indices(n, m) {
                    let mut a = eng.inverse(Sign::Minus, j as usize).clone();
                    for i in 0..n {
                        for _ in 0..beta.0[i] {
                            a = a.d_y(i);
                        }
                    }
                    let mut xi = beta;
                    xi.0[n - 1] += gamma as u8;
                    let mut c = eng.inverse(Sign::Plus, l as usize).d_xi_multi(&xi);
                    for _ in 1..gamma {
                        c = c.d_y(n - 1);
                    }
                    let bn = beta.0[n - 1] as u32;
                    let tangential: f64 = (0..n - 1).map(|i| fact(beta.0[i] as u32)).product();
                    let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
                    let coef = I.powu(m + gamma) * sign / (tangential * fact(bn + gamma));
                    b += coef * at_origin(&a) * at_origin(&c);
                }
            }
        }
    }
    check_real(b / boundary_volume_factor(chart))
}

fn fact(m: u32) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

/// Contractions of `C³` at the base point with the dual metric `g` and its
/// normal column `ι_n g`: `(C³(g ⊗ ι_n g), C³(ι_n g ⊗ ι_n g ⊗ ι_n g))`.
pub fn c3_contractions(chart: &TaylorModelChart) -> (f64, f64) {
    let n = chart.dim;
    let c3 = chart.c_poly(3);
    let g = chart.base_dual();
    let zero = vec![0.0; 2 * n];
    let tensor = |a: usize, b: usize, c: usize| -> f64 {
        let mut m = Mono::one();
        m.0[n + a] += 1;
        m.0[n + b] += 1;
        m.0[n + c] += 1;
        c3.deriv_multi(&m).eval_re(&zero).re / 6.0
    };
    let mut g_n = 0.0;
    let mut nnn = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let t = tensor(a, b, c);
                g_n += t * g[a][b] * g[c][n - 1];
                nnn += t * g[a][n - 1] * g[b][n - 1] * g[c][n - 1];
            }
        }
    }
    (g_n, nnn)
}

/// One evaluated product with its closed form.
#[derive(Clone, Debug)]
pub struct TableEntry {
    pub name: &'static str,
    pub computed: C64,
    pub closed_form: C64,
}

impl TableEntry {
    pub fn discrepancy(&self) -> f64 {
        (self.computed - self.closed_form).norm()
    }
}

/// The five low-order products at `(x′, 0, ξ = 0)`:
/// `w_{−,0} ∂_{x_n}∂²_{ξ_n} w_{+,0}`, `∂_{x_n} w_{−,0} ∂²_{ξ_n} w_{+,0}`,
/// `∇_{x′} w_{−,0} · ∇_{ξ′}∂_{ξ_n} w_{+,0}`, `w_{−,1} ∂_{ξ_n} w_{+,0}` and
/// `w_{−,0} ∂_{ξ_n} w_{+,1}`, each with the closed form in terms of `h₀`,
/// `b` and the `C³` contractions.
pub fn evaluated_symbol_table(chart: &TaylorModelChart) -> Result<Vec<TableEntry>, BoundaryError> {
    let n = chart.dim;
    let eng = engine_for(chart, 2)?;
    let roots = eng.roots();
    let nw = n_fact_omega(n);
    let mu = (n as f64 + 1.0) / 2.0;
    let nf = n as f64;
    let zero = vec![0.0; roots.nvars()];
    let h0 = roots.h0.eval_re(&zero).re;
    let dn_h0 = roots.h0.deriv(n - 1).eval_re(&zero).re;
    let b_dot_grad: f64 = (0..n - 1)
        .map(|i| roots.b_xi.deriv(n + i).eval_re(&zero).re * roots.h0.deriv(i).eval_re(&zero).re)
        .sum::<f64>()
        / h0;
    let (c3_gn, c3_nnn) = c3_contractions(chart);
    let c1 = frak_c(1, n as i64).map_err(maglab_symbols::SymbolError::from)?.to_f64();

    let wm0 = eng.inverse(Sign::Minus, 0);
    let wp0 = eng.inverse(Sign::Plus, 0);
    let wm1 = eng.inverse(Sign::Minus, 1);
    let wp1 = eng.inverse(Sign::Plus, 1);
    let v = |s: &RootSymbol| at_origin(s);
    let e1 = v(wm0) * v(&wp0.d_xi_n().d_xi_n().d_y(n - 1));
    let e2 = v(&wm0.d_y(n - 1)) * v(&wp0.d_xi_n().d_xi_n());
    let e3: C64 = (0..n - 1).map(|i| v(&wm0.d_y(i)) * v(&wp0.d_xi(i).d_xi_n())).sum();
    let e4 = v(wm1) * v(&wp0.d_xi_n());
    let e5 = v(wm0) * v(&wp1.d_xi_n());

    let re = |x: f64| C64::new(x, 0.0);
    let drift = dn_h0 + b_dot_grad;
    let cf1 = re(mu * (mu - 1.0) * (mu - 2.0) * dn_h0 / (2.0 * nw));
    let cf2 = re(-mu * mu * (mu - 1.0) * dn_h0 / (2.0 * nw));
    let cf3 = re(-mu * mu * (mu - 1.0) * b_dot_grad / (2.0 * nw));
    let cf4 = I * mu * c1 * (nf * nf - 1.0) / (nw * nw) * (1.5 * c3_gn + 17.0 * (nf + 3.0) / (4.0 * h0) * c3_nnn)
        - I * 7.0 * mu.powi(3) / (4.0 * nw) * drift;
    let cf5 = I * c1 * (nf * nf - 1.0) / (nw * nw)
        * (-3.0 * (mu - 1.0) / 2.0 * c3_gn + mu * (nf + 3.0) / (4.0 * h0) * c3_nnn)
        + I * mu * mu * (3.0 * mu - 5.0) / (4.0 * nw) * drift;
    Ok(vec![
        TableEntry { name: "w_-0 dxn dxin^2 w_+0", computed: e1, closed_form: cf1 },
        TableEntry { name: "dxn w_-0 dxin^2 w_+0", computed: e2, closed_form: cf2 },
        TableEntry { name: "grad_x' w_-0 . grad_xi' dxin w_+0", computed: e3, closed_form: cf3 },
        TableEntry { name: "w_-1 dxin w_+0", computed: e4, closed_form: cf4 },
        TableEntry { name: "w_-0 dxin w_+1", computed: e5, closed_form: cf5 },
    ])
}

/// Least-squares fit of `n!ω_n B₂ = α₁ C³(ι_n g^{⊗3}) + α₂ C³(g ⊗ ι_n g)`
/// over collar charts of one dimension. Returns `(α₁, α₂, max residual)`.
pub fn empirical_alpha(charts: &[TaylorModelChart]) -> Result<(f64, f64, f64), BoundaryError> {
    if charts.len() < 2 {
        return Err(BoundaryError::Invalid("need at least two charts to separate α₁ and α₂".into()));
    }
    let n = charts[0].dim;
    let nw = n_fact_omega(n);
    let mut rows = Vec::new();
    for c in charts {
        if c.dim != n {
            return Err(BoundaryError::Invalid("charts of mixed dimension".into()));
        }
        let b2 = boundary_density_b(c, 2)?;
        let (gn, nnn) = c3_contractions(c);
        rows.push((nnn, gn, nw * b2));
    }
    let (mut s11, mut s12, mut s22, mut t1, mut t2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x1, x2, y) in &rows {
        s11 += x1 * x1;
        s12 += x1 * x2;
        s22 += x2 * x2;
        t1 += x1 * y;
        t2 += x2 * y;
    }
    let det = s11 * s22 - s12 * s12;
    if det.abs() < 1e-12 * (s11 * s22).max(1e-300) {
        return Err(BoundaryError::Invalid("C³ contractions do not separate α₁ and α₂".into()));
    }
    let a1 = (t1 * s22 - t2 * s12) / det;
    let a2 = (s11 * t2 - s12 * t1) / det;
    let resid = rows.iter().map(|&(x1, x2, y)| (a1 * x1 + a2 * x2 - y).abs()).fold(0.0, f64::max);
    Ok((a1, a2, resid))
}

/// `q_{±,j}` and `w_{±,j}` for `j ≤ order` as JSON term lists.
pub fn boundary_symbols_json(chart: &TaylorModelChart, order: u32) -> Result<Value, BoundaryError> {
    let eng = BoundaryEngine::new(chart, order, &vec![0.0; chart.dim - 1])?;
    let roots = eng.roots();
    let list = |sign: Sign, inv: bool| -> Vec<Value> {
        (0..=order as usize)
            .map(|j| {
                let s = if inv { eng.inverse(sign, j) } else { eng.factor(sign, j) };
                json!({"j": j, "symbol": s.to_json()})
            })
            .collect()
    };
    let c = |z: C64| json!([z.re, z.im]);
    Ok(json!({
        "dim": chart.dim,
        "order": order,
        "h0": roots.h0.constant_term().re,
        "h_plus": c(roots.root_at_base(Sign::Plus)),
        "h_minus": c(roots.root_at_base(Sign::Minus)),
        "q_plus": list(Sign::Plus, false),
        "q_minus": list(Sign::Minus, false),
        "w_plus": list(Sign::Plus, true),
        "w_minus": list(Sign::Minus, true),
    }))
}
