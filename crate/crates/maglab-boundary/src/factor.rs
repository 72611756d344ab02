//! Wiener–Hopf factorization `q ~ q_− # q_+` and the inverse factors `w_±`.

use std::sync::Arc;

use maglab_core::{Poly, Trunc, C64};
use maglab_symbols::{multi_indices, n_fact_omega, InteriorSymbol, SymbolEngine, TaylorModelChart};

use crate::error::BoundaryError;
use crate::roots::{split_metric, split_xi_n, RootJet, Sign};
use crate::symbol::RootSymbol;

/// Factor and inverse-factor symbols over one collar chart.
#[derive(Clone, Debug)]
pub struct BoundaryEngine {
    roots: Arc<RootJet>,
    chart: TaylorModelChart,
    order: u32,
    q: Vec<RootSymbol>,
    q_plus: Vec<RootSymbol>,
    q_minus: Vec<RootSymbol>,
    w_plus: Vec<RootSymbol>,
    w_minus: Vec<RootSymbol>,
    rho: Poly,
}

/// `(1/α!) ∂_ξ^α a · D_x^α b` summed over `|α| = m`.
fn leibniz_term(a: &RootSymbol, b: &RootSymbol, m: u32) -> RootSymbol {
    let n = a.roots().dim();
    let mut out = RootSymbol::zero(a.roots());
    for alpha in multi_indices(n, m) {
        let term = a.d_xi_multi(&alpha).mul(&b.dx_multi(&alpha));
        out.add_assign_scaled(&term, C64::new(1.0 / alpha.factorial(), 0.0));
    }
    out
}

/// `Σ_{k+l+|α|=j} (1/α!) ∂_ξ^α left_k · D_x^α right_l` over the pairs
/// accepted by `keep(k, l)`.
pub fn graded_product(
    left: &[RootSymbol],
    right: &[RootSymbol],
    j: usize,
    keep: impl Fn(usize, usize) -> bool,
) -> RootSymbol {
    let mut out = RootSymbol::zero(left[0].roots());
    for k in 0..=j.min(left.len() - 1) {
        for l in 0..=(j - k).min(right.len() - 1) {
            if !keep(k, l) {
                continue;
            }
            let m = (j - k - l) as u32;
            out.add_assign_scaled(&leibniz_term(&left[k], &right[l], m), C64::new(1.0, 0.0));
        }
    }
    out
}

/// Rewrites an interior symbol `Σ P(y,ξ) S^{p/2}` with
/// `S = h₀ (ξ_n − h_+)(ξ_n − h_−)` in the root basis.
pub fn to_root_symbol(q: &InteriorSymbol, roots: &Arc<RootJet>) -> RootSymbol {
    let dim = roots.dim();
    let t = roots.trunc();
    let mut out = RootSymbol::zero(roots);
    for (&(p_half, log), poly) in q.terms() {
        debug_assert_eq!(log, 0, "log terms are removed before factorization");
        let h0p = roots.h0_power(p_half);
        let parts = split_xi_n(poly, dim, roots.xi0(), t);
        for (m, part) in parts.iter().enumerate() {
            if part.is_empty() {
                continue;
            }
            let coeff = part.mul(&h0p, t);
            let xi = RootSymbol::xi_n_power(roots, m as u32).mul_poly(&coeff);
            out.add_assign_scaled(&xi.shift(p_half, p_half), C64::new(1.0, 0.0));
        }
    }
    out
}

impl BoundaryEngine {
    /// Factors the boundary symbol of `chart` through order `order`, with
    /// jets about the tangential covector `xi0`.
    pub fn new(chart: &TaylorModelChart, order: u32, xi0: &[f64]) -> Result<Self, BoundaryError> {
        let dim = chart.dim;
        let roots = Arc::new(split_metric(chart, order, xi0)?);
        let mut eng = SymbolEngine::new(chart, order)?;
        let q: Vec<RootSymbol> =
            (0..=order).map(|j| eng.q(j).map(|s| to_root_symbol(&s, &roots))).collect::<Result<_, _>>()?;
        let nw = n_fact_omega(dim);
        let mu2 = dim as i32 + 1;
        let h0_mu = roots.h0_power(mu2);
        let h0_neg_mu = roots.h0_power(-mu2);
        let q_plus0 = RootSymbol::root_power(&roots, Sign::Plus, -mu2, C64::new(nw, 0.0)).with_class(-mu2, 0);
        let q_minus0 =
            RootSymbol::monomial(&roots, (0, -mu2), h0_neg_mu).with_class(-mu2, 0);
        let mut q_plus = vec![q_plus0.clone()];
        let mut q_minus = vec![q_minus0.clone()];
        for j in 1..=order as usize {
            let mut r = q[j].clone();
            let known = graded_product(&q_minus, &q_plus, j, |k, l| k < j && l < j);
            r.add_assign_scaled(&known, C64::new(-1.0, 0.0));
            let normalised = r.mul_poly(&h0_mu.scale_re(1.0 / nw)).shift(mu2, mu2);
            let (fp, fm) = normalised.split()?;
            q_plus.push(q_plus0.mul(&fp).with_class(-mu2, -(j as i32)));
            q_minus.push(q_minus0.mul(&fm).with_class(-mu2, -(j as i32)));
        }
        let w_plus0 = RootSymbol::root_power(&roots, Sign::Plus, mu2, C64::new(1.0 / nw, 0.0)).with_class(mu2, 0);
        let w_minus0 = RootSymbol::monomial(&roots, (0, mu2), h0_mu.clone()).with_class(mu2, 0);
        let mut w_plus = vec![w_plus0];
        let mut w_minus = vec![w_minus0];
        for j in 1..=order as usize {
            for (w, qq) in [(&mut w_plus, &q_plus), (&mut w_minus, &q_minus)] {
                let s = graded_product(qq, w, j, |_, l| l < j);
                let wj = w[0].mul(&s).scale(C64::new(-1.0, 0.0)).with_class(mu2 - 2, 1 - j as i32);
                w.push(wj);
            }
        }
        let map: Vec<usize> = (0..2 * dim).map(|i| if i < dim { i } else { 0 }).collect();
        let rho = chart.density_poly().zero_vars(dim..2 * dim).remap(2 * dim - 1, &map[..2 * dim]);
        Ok(BoundaryEngine {
            roots,
            chart: chart.clone(),
            order,
            q,
            q_plus,
            q_minus,
            w_plus,
            w_minus,
            rho: rho.truncate(&Trunc::group(0..dim, order)),
        })
    }

    pub fn roots(&self) -> &Arc<RootJet> {
        &self.roots
    }

    pub fn chart(&self) -> &TaylorModelChart {
        &self.chart
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// The interior term `q_j` in the root basis.
    pub fn q(&self, j: usize) -> &RootSymbol {
        &self.q[j]
    }

    pub fn factor(&self, sign: Sign, j: usize) -> &RootSymbol {
        match sign {
            Sign::Plus => &self.q_plus[j],
            Sign::Minus => &self.q_minus[j],
        }
    }

    pub fn factors(&self, sign: Sign) -> &[RootSymbol] {
        match sign {
            Sign::Plus => &self.q_plus,
            Sign::Minus => &self.q_minus,
        }
    }

    pub fn inverse(&self, sign: Sign, j: usize) -> &RootSymbol {
        &self.inverses(sign)[j]
    }

    pub fn inverses(&self, sign: Sign) -> &[RootSymbol] {
        match sign {
            Sign::Plus => &self.w_plus,
            Sign::Minus => &self.w_minus,
        }
    }

    /// The Riemannian density `√det H(y)` as a jet in the root variables.
    pub fn density(&self) -> &Poly {
        &self.rho
    }

    /// `q_j − Σ_{k+l+|α|=j} (1/α!) ∂_ξ^α q_{−,k} D_x^α q_{+,l}` at the base
    /// point, relative to the size of the terms, for each given `ξ_n`.
    pub fn factorization_residual(&self, j: usize, xi_ns: &[f64]) -> f64 {
        let prod = graded_product(&self.q_minus, &self.q_plus, j, |_, _| true);
        let diff = self.q[j].sub(&prod);
        xi_ns
            .iter()
            .map(|&x| {
                // natural size of an order-j term: |q_0| ⟨ξ_n⟩^{−j}
                let natural = self.q[0].eval(x).norm() * (1.0 + x * x).powf(-(j as f64) / 2.0);
                let scale = self.q[j].eval_abs(x).max(prod.eval_abs(x)).max(natural);
                diff.eval(x).norm() / scale
            })
            .fold(0.0, f64::max)
    }

    /// `Σ_{k+l+|α|=j} (1/α!) ∂_ξ^α q_{±,k} D_x^α w_{±,l} − δ_{j0}` at the base
    /// point, in absolute value, maximised over the given `ξ_n`.
    pub fn inverse_residual(&self, sign: Sign, j: usize, xi_ns: &[f64]) -> f64 {
        let mut s = graded_product(self.factors(sign), self.inverses(sign), j, |_, _| true);
        if j == 0 {
            s.add_term((0, 0), Poly::real(self.roots.nvars(), -1.0));
        }
        xi_ns.iter().map(|&x| s.eval(x).norm()).fold(0.0, f64::max)
    }

    /// Checks that "+" objects carry only `h_+` and "−" objects only `h_−`.
    pub fn structure_ok(&self) -> bool {
        [Sign::Plus, Sign::Minus].iter().all(|&s| {
            self.factors(s).iter().all(|q| q.is_pure(s)) && self.inverses(s).iter().all(|w| w.is_pure(s))
        })
    }
}

/// Convenience wrapper: the order-`j` factor pair over a fresh engine at `ξ′₀ = 0`.
pub fn factorize_boundary_symbol(
    chart: &TaylorModelChart,
    j: u32,
) -> Result<(RootSymbol, RootSymbol), BoundaryError> {
    let eng = BoundaryEngine::new(chart, j, &vec![0.0; chart.dim - 1])?;
    Ok((eng.factor(Sign::Plus, j as usize).clone(), eng.factor(Sign::Minus, j as usize).clone()))
}

/// Convenience wrapper: `w_{±,j}` over a fresh engine at `ξ′₀ = 0`.
pub fn invert_factor(chart: &TaylorModelChart, sign: Sign, j: u32) -> Result<RootSymbol, BoundaryError> {
    let eng = BoundaryEngine::new(chart, j, &vec![0.0; chart.dim - 1])?;
    Ok(eng.inverse(sign, j as usize).clone())
}
