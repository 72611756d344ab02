//! The roots `h_±` of `R² + g(x)(ξ,ξ)` as a polynomial in `ξ_n`.
//!
//! Everything is evaluated at `R = 1` and expanded as jets in the variables
//! `(y, η)`: `y = x − x₀` in slots `0..n` and `η = ξ′ − ξ′₀` in slots
//! `n..2n−1`. The transversal coordinate is `y_{n−1}`.

use std::collections::HashMap;
use std::sync::Mutex;

use maglab_core::{Poly, Trunc, C64};
use maglab_symbols::TaylorModelChart;

use crate::error::BoundaryError;

/// Root jets and the metric splitting `g = h₀ ξ_n² + 2 (b·ξ′) ξ_n + g_Y(ξ′,ξ′)`.
#[derive(Debug)]
pub struct RootJet {
    dim: usize,
    order: u32,
    xi0: Vec<f64>,
    trunc: Trunc,
    /// `h₀(y)`.
    pub h0: Poly,
    /// `b(y)·(ξ′₀ + η)`.
    pub b_xi: Poly,
    /// `g_Y(y)(ξ′₀ + η, ξ′₀ + η)`.
    pub g_y: Poly,
    pub h_plus: Poly,
    pub h_minus: Poly,
    /// `(h_+ − h_−)⁻¹`.
    pub delta_inv: Poly,
    dh_plus: Vec<Poly>,
    dh_minus: Vec<Poly>,
    cache: Mutex<HashMap<(u8, i32), Poly>>,
}

/// Which root a factor is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// Splits `coefficient of ξ_n^e` off a `2n`-variable polynomial whose `ξ`
/// slots are `n..2n`, returning polynomials in the `2n−1` root variables with
/// `ξ′` recentred at `ξ′₀`.
pub(crate) fn split_xi_n(p: &Poly, dim: usize, xi0: &[f64], trunc: &Trunc) -> Vec<Poly> {
    let nv = 2 * dim - 1;
    let mut parts: Vec<Poly> = Vec::new();
    for (m, c) in p.terms() {
        let e = m.0[2 * dim - 1] as usize;
        let mut mm = *m;
        mm.0[2 * dim - 1] = 0;
        while parts.len() <= e {
            parts.push(Poly::zero(nv));
        }
        parts[e].add_term(mm, *c);
    }
    let subs: Vec<Poly> = (0..nv)
        .map(|i| {
            let v = Poly::var(nv, i);
            if i >= dim { v.add(&Poly::real(nv, xi0[i - dim])) } else { v }
        })
        .collect();
    parts.iter().map(|q| q.compose(&subs, trunc)).collect()
}

impl RootJet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Jet order in `y` and in `η`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// The tangential covector `ξ′₀` about which `η` is measured.
    pub fn xi0(&self) -> &[f64] {
        &self.xi0
    }

    /// Number of jet variables, `2n − 1`.
    pub fn nvars(&self) -> usize {
        2 * self.dim - 1
    }

    pub fn trunc(&self) -> &Trunc {
        &self.trunc
    }

    /// `h_±` at `y = 0, η = 0`.
    pub fn root_at_base(&self, sign: Sign) -> C64 {
        self.root(sign).constant_term()
    }

    pub fn root(&self, sign: Sign) -> &Poly {
        match sign {
            Sign::Plus => &self.h_plus,
            Sign::Minus => &self.h_minus,
        }
    }

    /// `∂h_± / ∂(variable v)`.
    pub fn root_deriv(&self, sign: Sign, v: usize) -> &Poly {
        match sign {
            Sign::Plus => &self.dh_plus[v],
            Sign::Minus => &self.dh_minus[v],
        }
    }

    fn cached(&self, key: (u8, i32), f: impl FnOnce() -> Poly) -> Poly {
        if let Some(p) = self.cache.lock().expect("cache lock").get(&key) {
            return p.clone();
        }
        let p = f();
        self.cache.lock().expect("cache lock").insert(key, p.clone());
        p
    }

    /// `(−h_±)^{a/2}` with the principal branch.
    pub fn neg_root_power(&self, sign: Sign, a_half: i32) -> Poly {
        let tag = match sign {
            Sign::Plus => 0,
            Sign::Minus => 1,
        };
        self.cached((tag, a_half), || {
            self.root(sign).scale_re(-1.0).powc(C64::new(a_half as f64 / 2.0, 0.0), &self.trunc)
        })
    }

    /// `h₀^{p/2}`.
    pub fn h0_power(&self, p_half: i32) -> Poly {
        self.cached((2, p_half), || self.h0.powc(C64::new(p_half as f64 / 2.0, 0.0), &self.trunc))
    }

    /// `(h_+ − h_−)^k` for any integer `k`.
    pub fn delta_power(&self, k: i32) -> Poly {
        self.cached((3, k), || {
            if k >= 0 {
                self.h_plus.sub(&self.h_minus).powi(k as u32, &self.trunc)
            } else {
                self.delta_inv.powi((-k) as u32, &self.trunc)
            }
        })
    }

    /// `h_+^m`.
    pub fn h_plus_power(&self, m: u32) -> Poly {
        self.cached((4, m as i32), || self.h_plus.powi(m, &self.trunc))
    }

    /// `h₀ (ξ_n − h_+)(ξ_n − h_−) − (1 + g(ξ,ξ))` at `y = 0, η = 0`, in
    /// absolute value.
    pub fn root_identity_residual(&self, xi_n: f64) -> f64 {
        let zero = vec![0.0; self.nvars()];
        let h0 = self.h0.eval_re(&zero);
        let hp = self.h_plus.eval_re(&zero);
        let hm = self.h_minus.eval_re(&zero);
        let lhs = h0 * (xi_n - hp) * (xi_n - hm);
        let rhs = h0 * xi_n * xi_n
            + self.b_xi.eval_re(&zero) * 2.0 * xi_n
            + self.g_y.eval_re(&zero)
            + 1.0;
        (lhs - rhs).norm()
    }

    /// The same identity as jets: the largest coefficient of
    /// `h₀(h_+ + h_−) + 2 b·ξ′` and `h₀ h_+ h_− − 1 − g_Y`.
    pub fn root_identity_jet_residual(&self) -> f64 {
        let t = &self.trunc;
        let sum = self.h0.mul(&self.h_plus.add(&self.h_minus), t).add(&self.b_xi.scale_re(2.0));
        let prod = self
            .h0
            .mul(&self.h_plus.mul(&self.h_minus, t), t)
            .sub(&self.g_y)
            .sub(&Poly::real(self.nvars(), 1.0));
        sum.max_abs().max(prod.max_abs())
    }
}

/// Extracts `h₀`, `b`, `g_Y` from a collar chart and expands the roots
/// `h_± = (−b·ξ′ ± i √(h₀(1 + g_Y(ξ′,ξ′)) − (b·ξ′)²)) / h₀` about `ξ′₀`.
///
/// `order` caps the jets in `y` and in `η` separately.
pub fn split_metric(chart: &TaylorModelChart, order: u32, xi0: &[f64]) -> Result<RootJet, BoundaryError> {
    let dim = chart.dim;
    if xi0.len() + 1 != dim {
        return Err(BoundaryError::Invalid(format!("ξ′₀ needs {} entries, got {}", dim - 1, xi0.len())));
    }
    let nv = 2 * dim - 1;
    let trunc = Trunc::group(0..dim, order).with_group(dim..nv, order);
    let parts = split_xi_n(&chart.dual_poly(), dim, xi0, &trunc);
    let get = |e: usize| parts.get(e).cloned().unwrap_or_else(|| Poly::zero(nv));
    let h0 = get(2);
    let b_xi = get(1).scale_re(0.5);
    let g_y = get(0);
    let h00 = h0.constant_term();
    if h00.re <= 0.0 || !h00.re.is_finite() {
        return Err(BoundaryError::DegenerateMetric(format!("h₀ = {} at the base point", h00.re)));
    }
    let one = Poly::real(nv, 1.0);
    let disc = h0.mul(&one.add(&g_y), &trunc).sub(&b_xi.mul(&b_xi, &trunc));
    let d0 = disc.constant_term().re;
    if d0 <= 0.0 {
        return Err(BoundaryError::CoincidentRoots);
    }
    let root = disc.sqrt(&trunc).scale(C64::new(0.0, 1.0));
    let h0_inv = h0.recip(&trunc);
    let h_plus = root.sub(&b_xi).mul(&h0_inv, &trunc);
    let h_minus = root.scale_re(-1.0).sub(&b_xi).mul(&h0_inv, &trunc);
    let delta_inv = h_plus.sub(&h_minus).recip(&trunc);
    let dh_plus = (0..nv).map(|v| h_plus.deriv(v)).collect();
    let dh_minus = (0..nv).map(|v| h_minus.deriv(v)).collect();
    Ok(RootJet {
        dim,
        order,
        xi0: xi0.to_vec(),
        trunc,
        h0,
        b_xi,
        g_y,
        h_plus,
        h_minus,
        delta_inv,
        dh_plus,
        dh_minus,
        cache: Mutex::new(HashMap::new()),
    })
}
