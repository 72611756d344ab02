//! Full symbol of the localized kernel operator, its parametrix, and the
//! diagonal values `a_{j,0}`.

use std::collections::HashMap;
use std::sync::Arc;

use maglab_core::{index_set_I, omega, symbol_coefficient, Mono, Poly, C64};

use crate::chart::{y_trunc, TaylorModelChart};
use crate::error::SymbolError;
use crate::symbol::{InteriorSymbol, SymbolMetric};

/// `n!·ω_n`.
pub fn n_fact_omega(n: usize) -> f64 {
    let f: f64 = (1..=n).map(|k| k as f64).product();
    f * omega(n as i64).expect("ω_n for n ≥ 0").to_f64()
}

/// Exponent vectors of total degree `m` in `n` variables.
pub fn multi_indices(n: usize, m: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur = Mono::one();
    fn rec(i: usize, n: usize, rem: u32, cur: &mut Mono, out: &mut Vec<Mono>) {
        if i + 1 == n {
            cur.0[i] = rem as u8;
            out.push(*cur);
            cur.0[i] = 0;
            return;
        }
        for e in (0..=rem).rev() {
            cur.0[i] = e as u8;
            rec(i + 1, n, rem - e, cur, out);
        }
        cur.0[i] = 0;
    }
    if n > 0 {
        rec(0, n, m, &mut cur, &mut out);
    }
    out
}

/// Builds symbols over one chart, sharing the metric and a derivative cache.
pub struct SymbolEngine {
    chart: TaylorModelChart,
    metric: Arc<SymbolMetric>,
    c_polys: Vec<Poly>,
    order: u32,
    cache: HashMap<(i32, u8, u32, Mono), InteriorSymbol>,
}

impl SymbolEngine {
    /// Prepares an engine for expansion orders up to `order`.
    pub fn new(chart: &TaylorModelChart, order: u32) -> Result<Self, SymbolError> {
        chart.require(order)?;
        let c_polys = (0..=chart.j_max()).map(|j| chart.c_poly(j)).collect();
        Ok(SymbolEngine {
            chart: chart.clone(),
            metric: SymbolMetric::new(chart),
            c_polys,
            order,
            cache: HashMap::new(),
        })
    }

    pub fn metric(&self) -> &Arc<SymbolMetric> {
        &self.metric
    }

    pub fn chart(&self) -> &TaylorModelChart {
        &self.chart
    }

    fn dim(&self) -> usize {
        self.chart.dim
    }

    /// `∂_ξ^β [S^{p_half/2} log^e S]`, memoized.
    fn power_derivative(&mut self, p_half: i32, e: u8, y_order: u32, beta: Mono) -> InteriorSymbol {
        let key = (p_half, e, y_order, beta);
        if let Some(s) = self.cache.get(&key) {
            return s.clone();
        }
        let r = match (0..self.dim()).rev().find(|&i| beta.0[i] > 0) {
            None => InteriorSymbol::power(&self.metric, p_half, e, C64::new(1.0, 0.0)).truncate_y(y_order),
            Some(i) => {
                let mut prev = beta;
                prev.0[i] -= 1;
                self.power_derivative(p_half, e, y_order, prev).d_xi(i)
            }
        };
        self.cache.insert(key, r.clone());
        r
    }

    /// The order-`j` term `q_j` of the full symbol, homogeneous of degree `−n−1−j`.
    pub fn q(&mut self, j: u32) -> Result<InteriorSymbol, SymbolError> {
        let n = self.dim();
        let deg = -(n as i32) - 1 - j as i32;
        if j == 0 {
            let p = -(n as i32 + 1);
            return Ok(InteriorSymbol::power(&self.metric, p, 0, C64::new(n_fact_omega(n), 0.0)));
        }
        self.chart.require(j)?;
        // q_j only ever meets x-derivatives of order ≤ order − j.
        let y_order = self.order.saturating_sub(j);
        let t = y_trunc(n, y_order);
        let nv = self.chart.nvars();
        // Σ_{γ ∈ I_j, rank γ = k} C^{(γ)}(y; v), grouped by rank.
        let mut by_rank: Vec<Poly> = vec![Poly::zero(nv); j as usize + 1];
        for gamma in index_set_I(j) {
            let mut p = Poly::real(nv, 1.0);
            for &entry in gamma.entries() {
                p = p.mul(&self.c_polys[entry as usize], &t);
            }
            by_rank[gamma.rank()].add_assign_scaled(&p, C64::new(1.0, 0.0));
        }
        let mut out = InteriorSymbol::zero(&self.metric);
        for (k, cg) in by_rank.iter().enumerate() {
            if cg.is_empty() {
                continue;
            }
            let coeff = symbol_coefficient(k as i64, n as i64)?;
            let e = u8::from(coeff.is_log());
            let c = coeff.value().to_f64();
            let p_half = 2 * k as i32 - n as i32 - 1;
            // Group monomials y^a v^β by β; v acts as i∂_ξ.
            let mut by_beta: std::collections::BTreeMap<Mono, Poly> = Default::default();
            for (m, val) in cg.terms() {
                let mut beta = Mono::one();
                let mut ya = *m;
                for i in 0..n {
                    beta.0[i] = m.0[n + i];
                    ya.0[n + i] = 0;
                }
                by_beta.entry(beta).or_insert_with(|| Poly::zero(nv)).add_term(ya, *val);
            }
            for (beta, py) in by_beta {
                let ipow = C64::new(0.0, 1.0).powu(beta.degree());
                let d = self.power_derivative(p_half, e, y_order, beta);
                out.add_assign_scaled(&d.mul_poly(&py, 0), ipow * c);
            }
        }
        let residue = out.log_residue();
        if residue > 0.0 {
            return Err(SymbolError::LogResidue(residue));
        }
        Ok(out.without_logs().with_degree(deg))
    }

    /// `q_0, …, q_order`.
    pub fn q_family(&mut self, order: u32) -> Result<Vec<InteriorSymbol>, SymbolError> {
        (0..=order).map(|j| self.q(j)).collect()
    }

    /// `a_0, …, a_order` with `q # a = 1` order by order.
    pub fn parametrix(&mut self, order: u32) -> Result<Vec<InteriorSymbol>, SymbolError> {
        let n = self.dim();
        let q = self.q_family(order)?;
        let a0 = InteriorSymbol::power(&self.metric, n as i32 + 1, 0, C64::new(1.0 / n_fact_omega(n), 0.0));
        let mut a = vec![a0.clone()];
        for j in 1..=order {
            let mut sum = InteriorSymbol::zero(&self.metric);
            for l in 0..j {
                for k in 0..=(j - l) {
                    let m = j - l - k;
                    for alpha in multi_indices(n, m) {
                        if k == 0 && l == 0 && m == 0 {
                            continue;
                        }
                        let term = q[k as usize]
                            .d_xi_multi(&alpha)
                            .mul(&a[l as usize].dx_multi(&alpha))
                            .scale(C64::new(1.0 / alpha.factorial(), 0.0));
                        sum.add_assign_scaled(&term, C64::new(1.0, 0.0));
                    }
                }
            }
            let aj = a0.mul(&sum).scale(C64::new(-1.0, 0.0));
            a.push(aj.with_degree(n as i32 + 1 - j as i32));
        }
        Ok(a)
    }
}

/// `q_j` for one chart.
pub fn build_q(chart: &TaylorModelChart, j: u32) -> Result<InteriorSymbol, SymbolError> {
    SymbolEngine::new(chart, j)?.q(j)
}

/// `a_j` of the parametrix for one chart.
pub fn build_parametrix(chart: &TaylorModelChart, j: u32) -> Result<InteriorSymbol, SymbolError> {
    let mut a = SymbolEngine::new(chart, j)?.parametrix(j)?;
    Ok(a.pop().expect("non-empty family"))
}

/// Graded components of `lhs # rhs` through `order`:
/// `Σ_{k+l+|α|=m} (1/α!) ∂_ξ^α lhs_k D_x^α rhs_l`.
pub fn leibniz_compose(
    lhs: &[InteriorSymbol],
    rhs: &[InteriorSymbol],
    order: u32,
) -> Result<Vec<InteriorSymbol>, SymbolError> {
    let first = lhs.first().or(rhs.first()).ok_or_else(|| SymbolError::OutOfDomain("empty symbol family".into()))?;
    let metric = first.metric().clone();
    if (order as usize) >= lhs.len() || (order as usize) >= rhs.len() {
        return Err(SymbolError::OutOfDomain(format!(
            "composition through order {order} needs {} terms per family",
            order + 1
        )));
    }
    if metric.jet_order() < order {
        return Err(SymbolError::JetShortfall { have: metric.jet_order(), need: order });
    }
    let n = metric.dim();
    let mut out = Vec::new();
    for m in 0..=order {
        let mut sum = InteriorSymbol::zero(&metric);
        for k in 0..=m {
            for l in 0..=(m - k) {
                for alpha in multi_indices(n, m - k - l) {
                    let term = lhs[k as usize]
                        .d_xi_multi(&alpha)
                        .mul(&rhs[l as usize].dx_multi(&alpha))
                        .scale(C64::new(1.0 / alpha.factorial(), 0.0));
                    sum.add_assign_scaled(&term, C64::new(1.0, 0.0));
                }
            }
        }
        out.push(sum);
    }
    Ok(out)
}

/// Relative size of `Σ_m composed_m − identity` at the base point: the
/// largest `|value|/scale` over components and probes.
pub fn identity_residual(composed: &[InteriorSymbol], probes: &[(Vec<f64>, f64)]) -> f64 {
    let mut worst: f64 = 0.0;
    for (m, c) in composed.iter().enumerate() {
        for (xi, r) in probes {
            let mut v = c.eval(xi, *r);
            if m == 0 {
                v -= 1.0;
            }
            let scale = c.eval_scale(xi, *r).max(1.0);
            worst = worst.max(v.norm() / scale);
        }
    }
    worst
}

/// Taylor coefficient of `ξ^α` in a `(y,ξ)` polynomial, as a polynomial in `y`.
fn xi_coefficient(p: &Poly, n: usize, alpha: &Mono) -> Poly {
    let mut out = Poly::zero(p.nvars());
    for (m, c) in p.terms() {
        if (0..n).all(|i| m.0[n + i] == alpha.0[i]) {
            let mut ym = *m;
            for i in 0..n {
                ym.0[n + i] = 0;
            }
            out.add_term(ym, *c);
        }
    }
    out
}

/// Diagonal values `a_{l,0}(y)` for `l ≤ j` as `y`-jets, relative to Lebesgue
/// measure, from the `ξ = 0` recursion.
fn diagonal_jets(chart: &TaylorModelChart, j: u32) -> Result<Vec<Poly>, SymbolError> {
    let n = chart.dim;
    let mut engine = SymbolEngine::new(chart, j)?;
    let t = y_trunc(n, j);
    let rho = chart.density_poly().truncate(&t);
    let rho_inv = rho.recip(&t.clone().with_group(n..2 * n, 0));
    // Taylor data of ρ⁻¹ q_k at ξ = 0 through ξ-degree j − k.
    let mut ql = Vec::new();
    for k in 0..=j {
        let taylor = engine.q(k)?.taylor_at_zero(j - k).truncate(&t);
        ql.push(taylor.mul(&rho_inv, &t));
    }
    let a0 = rho.scale_re(1.0 / n_fact_omega(n));
    let mut a = vec![a0.clone()];
    for l in 1..=j {
        if l % 2 == 1 {
            a.push(Poly::zero(chart.nvars()));
            continue;
        }
        let mut sum = Poly::zero(chart.nvars());
        for m in 0..l {
            if a[m as usize].is_empty() {
                continue;
            }
            for k in 0..=(l - m) {
                for alpha in multi_indices(n, l - m - k) {
                    let coeff = xi_coefficient(&ql[k as usize], n, &alpha);
                    if coeff.is_empty() {
                        continue;
                    }
                    let mut da = a[m as usize].clone();
                    for i in 0..n {
                        for _ in 0..alpha.0[i] {
                            da = da.deriv(i).scale(C64::new(0.0, -1.0));
                        }
                    }
                    sum.add_assign_scaled(&coeff.mul(&da, &t), C64::new(1.0, 0.0));
                }
            }
        }
        a.push(a0.mul(&sum, &t).scale_re(-1.0));
    }
    Ok(a)
}

/// `a_{j,0}(x₀, 1)` as a density with respect to Riemannian volume.
///
/// Odd orders vanish identically and return exactly zero.
pub fn eval_a_j0(chart: &TaylorModelChart, j: u32) -> Result<f64, SymbolError> {
    chart.require(j)?;
    if j % 2 == 1 {
        return Ok(0.0);
    }
    let a = diagonal_jets(chart, j)?;
    let rho0 = chart.density_poly().constant_term().re;
    Ok(a[j as usize].constant_term().re / rho0)
}

/// Cross-check of [`eval_a_j0`] through the full parametrix: evaluates
/// `(a # ρ)_j` at `ξ = 0`, `R = 1` and divides by `ρ`.
pub fn eval_a_j0_via_parametrix(chart: &TaylorModelChart, j: u32) -> Result<f64, SymbolError> {
    let mut engine = SymbolEngine::new(chart, j)?;
    let a = engine.parametrix(j)?;
    let metric = engine.metric().clone();
    let rho = InteriorSymbol::from_poly(&metric, chart.density_poly());
    let mut rho_family = vec![rho];
    for _ in 0..j {
        rho_family.push(InteriorSymbol::zero(&metric));
    }
    let composed = leibniz_compose(&a, &rho_family, j)?;
    let v = composed[j as usize].eval(&vec![0.0; chart.dim], 1.0);
    Ok(v.re / chart.density_poly().constant_term().re)
}

/// The curvature invariant `s` with `a_{2,0} = (n+1)s/(6·n!ω_n)`.
///
/// For a geodesic distance this is the scalar curvature.
pub fn scalar_curvature_invariant(chart: &TaylorModelChart) -> Result<f64, SymbolError> {
    let n = chart.dim;
    if n == 1 {
        return Err(SymbolError::OutOfDomain("no curvature invariant in dimension 1".into()));
    }
    let a20 = eval_a_j0(chart, 2)?;
    Ok(6.0 * n_fact_omega(n) * a20 / (n as f64 + 1.0))
}
