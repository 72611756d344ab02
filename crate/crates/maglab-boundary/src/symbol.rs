//! Symbols `Σ P(y,η) (ξ_n − h_+)^{a/2} (ξ_n − h_−)^{c/2}` over a [`RootJet`].

use std::collections::BTreeMap;
use std::sync::Arc;

use maglab_core::{Mono, Poly, C64};
use serde_json::{json, Value};

use crate::error::BoundaryError;
use crate::roots::{RootJet, Sign};

/// Exponents of `(ξ_n − h_+)` and `(ξ_n − h_−)` in half units.
pub type RootKey = (i32, i32);

/// A finite sum of root powers with jet coefficients.
///
/// Factor symbols carry only one root: "+" objects have keys `(a, 0)` and
/// are holomorphic in `Im ξ_n < 0`, "−" objects have keys `(0, c)`.
#[derive(Clone, Debug)]
pub struct RootSymbol {
    roots: Arc<RootJet>,
    terms: BTreeMap<RootKey, Poly>,
    /// Mixed-regularity class `(u, m)`, `u` in half units, when known.
    class: Option<(i32, i32)>,
}

fn binom(n: i64, k: i64) -> f64 {
    if k < 0 || k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl RootSymbol {
    pub fn zero(roots: &Arc<RootJet>) -> Self {
        RootSymbol { roots: roots.clone(), terms: BTreeMap::new(), class: None }
    }

    /// `p · (ξ_n − h_+)^{a/2} (ξ_n − h_−)^{c/2}`.
    pub fn monomial(roots: &Arc<RootJet>, key: RootKey, p: Poly) -> Self {
        let mut s = Self::zero(roots);
        s.add_term(key, p);
        s
    }

    /// The constant `c (ξ_n − h_±)^{a/2}`.
    pub fn root_power(roots: &Arc<RootJet>, sign: Sign, a_half: i32, c: C64) -> Self {
        let key = match sign {
            Sign::Plus => (a_half, 0),
            Sign::Minus => (0, a_half),
        };
        Self::monomial(roots, key, Poly::constant(roots.nvars(), c))
    }

    /// `ξ_n^m = Σ_i C(m,i) h_+^{m−i} (ξ_n − h_+)^i`.
    pub fn xi_n_power(roots: &Arc<RootJet>, m: u32) -> Self {
        let mut s = Self::zero(roots);
        for i in 0..=m {
            let c = binom(m as i64, i as i64);
            s.add_term((2 * i as i32, 0), roots.h_plus_power(m - i).scale_re(c));
        }
        s
    }

    pub fn with_class(mut self, u_half: i32, m: i32) -> Self {
        self.class = Some((u_half, m));
        self
    }

    pub fn class(&self) -> Option<(i32, i32)> {
        self.class
    }

    pub fn roots(&self) -> &Arc<RootJet> {
        &self.roots
    }

    pub fn terms(&self) -> &BTreeMap<RootKey, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: RootKey, p: Poly) {
        if p.is_empty() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(|| Poly::zero(p.nvars()));
        e.add_assign_scaled(&p, C64::new(1.0, 0.0));
        if e.is_empty() {
            self.terms.remove(&key);
        }
    }

    pub fn add_assign_scaled(&mut self, other: &RootSymbol, s: C64) {
        for (k, p) in &other.terms {
            self.add_term(*k, p.scale(s));
        }
    }

    pub fn add(&self, other: &RootSymbol) -> RootSymbol {
        let mut r = self.clone();
        r.add_assign_scaled(other, C64::new(1.0, 0.0));
        r.class = None;
        r
    }

    pub fn sub(&self, other: &RootSymbol) -> RootSymbol {
        let mut r = self.clone();
        r.add_assign_scaled(other, C64::new(-1.0, 0.0));
        r.class = None;
        r
    }

    pub fn scale(&self, s: C64) -> RootSymbol {
        let mut r = Self::zero(&self.roots);
        r.add_assign_scaled(self, s);
        r.class = self.class;
        r
    }

    pub fn mul_poly(&self, p: &Poly) -> RootSymbol {
        let t = self.roots.trunc();
        let mut r = Self::zero(&self.roots);
        for (k, q) in &self.terms {
            r.add_term(*k, q.mul(p, t));
        }
        r
    }

    pub fn mul(&self, other: &RootSymbol) -> RootSymbol {
        let t = self.roots.trunc();
        let mut r = Self::zero(&self.roots);
        for (k1, p1) in &self.terms {
            for (k2, p2) in &other.terms {
                r.add_term((k1.0 + k2.0, k1.1 + k2.1), p1.mul(p2, t));
            }
        }
        r
    }

    /// Multiplies every key by the shift `(da, dc)` half units.
    pub fn shift(&self, da: i32, dc: i32) -> RootSymbol {
        let mut r = Self::zero(&self.roots);
        for (k, p) in &self.terms {
            r.add_term((k.0 + da, k.1 + dc), p.clone());
        }
        r
    }

    /// `∂_{ξ_n}`.
    pub fn d_xi_n(&self) -> RootSymbol {
        let mut r = Self::zero(&self.roots);
        for (&(a, c), p) in &self.terms {
            if a != 0 {
                r.add_term((a - 2, c), p.scale_re(a as f64 / 2.0));
            }
            if c != 0 {
                r.add_term((a, c - 2), p.scale_re(c as f64 / 2.0));
            }
        }
        r
    }

    /// Derivative in jet variable `v` (a `y` or an `η` slot).
    pub fn d_var(&self, v: usize) -> RootSymbol {
        let t = self.roots.trunc();
        let mut r = Self::zero(&self.roots);
        for (&(a, c), p) in &self.terms {
            r.add_term((a, c), p.deriv(v));
            if a != 0 {
                let dh = self.roots.root_deriv(Sign::Plus, v);
                r.add_term((a - 2, c), p.mul(dh, t).scale_re(-(a as f64) / 2.0));
            }
            if c != 0 {
                let dh = self.roots.root_deriv(Sign::Minus, v);
                r.add_term((a, c - 2), p.mul(dh, t).scale_re(-(c as f64) / 2.0));
            }
        }
        r
    }

    /// `∂_{ξ_i}`, with `i = n−1` the transversal covariable.
    pub fn d_xi(&self, i: usize) -> RootSymbol {
        let n = self.roots.dim();
        if i + 1 == n {
            self.d_xi_n()
        } else {
            self.d_var(n + i)
        }
    }

    /// `∂_{y_i}`.
    pub fn d_y(&self, i: usize) -> RootSymbol {
        self.d_var(i)
    }

    /// `∂_ξ^α` for `α` over the `n` covariables.
    pub fn d_xi_multi(&self, alpha: &Mono) -> RootSymbol {
        let mut r = self.clone();
        for i in 0..self.roots.dim() {
            for _ in 0..alpha.0[i] {
                r = r.d_xi(i);
            }
        }
        r
    }

    /// `D_x^α = (−i∂_y)^α`.
    pub fn dx_multi(&self, alpha: &Mono) -> RootSymbol {
        let mut r = self.clone();
        for i in 0..self.roots.dim() {
            for _ in 0..alpha.0[i] {
                r = r.d_y(i);
            }
        }
        r.scale(C64::new(0.0, -1.0).powu(alpha.degree()))
    }

    /// Value at `y = 0`, `η = 0` for real `ξ_n`, principal branch.
    pub fn eval(&self, xi_n: f64) -> C64 {
        let hp = self.roots.root_at_base(Sign::Plus);
        let hm = self.roots.root_at_base(Sign::Minus);
        let xp = C64::new(xi_n, 0.0) - hp;
        let xm = C64::new(xi_n, 0.0) - hm;
        let mut s = C64::new(0.0, 0.0);
        for (&(a, c), p) in &self.terms {
            let mut v = p.constant_term();
            if a != 0 {
                v *= xp.powf(a as f64 / 2.0);
            }
            if c != 0 {
                v *= xm.powf(c as f64 / 2.0);
            }
            s += v;
        }
        s
    }

    /// Sum of the absolute values of the terms at `(0, 0, ξ_n)`, a scale for
    /// relative residuals.
    pub fn eval_abs(&self, xi_n: f64) -> f64 {
        self.terms
            .iter()
            .map(|(k, p)| RootSymbol::monomial(&self.roots, *k, p.clone()).eval(xi_n).norm())
            .sum()
    }

    /// The restriction to `ξ_n = 0` as a jet in `(y, η)`.
    pub fn at_xi_n_zero(&self) -> Poly {
        let t = self.roots.trunc();
        let mut out = Poly::zero(self.roots.nvars());
        for (&(a, c), p) in &self.terms {
            let mut v = p.clone();
            if a != 0 {
                v = v.mul(&self.roots.neg_root_power(Sign::Plus, a), t);
            }
            if c != 0 {
                v = v.mul(&self.roots.neg_root_power(Sign::Minus, c), t);
            }
            out.add_assign_scaled(&v, C64::new(1.0, 0.0));
        }
        out
    }

    /// True when only the given root appears.
    pub fn is_pure(&self, sign: Sign) -> bool {
        self.terms.keys().all(|&(a, c)| match sign {
            Sign::Plus => c == 0,
            Sign::Minus => a == 0,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|p| p.max_abs()).fold(0.0, f64::max)
    }

    /// Drops coefficients below `tol` in absolute value.
    pub fn prune(&self, tol: f64) -> RootSymbol {
        let mut r = Self::zero(&self.roots);
        for (k, p) in &self.terms {
            r.add_term(*k, p.prune(tol));
        }
        r.class = self.class;
        r
    }

    /// Partial fractions: writes a symbol with integral exponents and no
    /// polynomial part in `ξ_n` as a "+" part plus a "−" part.
    pub fn split(&self) -> Result<(RootSymbol, RootSymbol), BoundaryError> {
        let roots = &self.roots;
        let t = roots.trunc();
        let mut plus = Self::zero(roots);
        let mut minus = Self::zero(roots);
        let mut poly_part = Self::zero(roots);
        for (&(a2, c2), p) in &self.terms {
            if a2 % 2 != 0 || c2 % 2 != 0 {
                return Err(BoundaryError::NonIntegralExponent(a2, c2));
            }
            let (a, c) = (a2 / 2, c2 / 2);
            if a < 0 && c < 0 {
                let (pa, pb) = ((-a) as i64, (-c) as i64);
                for k in 0..pa {
                    let coef = if k % 2 == 0 { 1.0 } else { -1.0 } * binom(pb + k - 1, k);
                    let d = roots.delta_power(-(pb + k) as i32);
                    plus.add_term((2 * (k - pa) as i32, 0), p.mul(&d, t).scale_re(coef));
                }
                for k in 0..pb {
                    // (−δ)^{−a−k} = (−1)^{a+k} δ^{−a−k}
                    let sgn = if (k + pa) % 2 == 0 { 1.0 } else { -1.0 };
                    let coef = if k % 2 == 0 { 1.0 } else { -1.0 } * binom(pa + k - 1, k) * sgn;
                    let d = roots.delta_power(-(pa + k) as i32);
                    minus.add_term((0, 2 * (k - pb) as i32), p.mul(&d, t).scale_re(coef));
                }
            } else if a < 0 {
                // (ξ_n − h_−)^c = Σ_i C(c,i) δ^{c−i} (ξ_n − h_+)^i
                for i in 0..=c {
                    let term = p.mul(&roots.delta_power(c - i), t).scale_re(binom(c as i64, i as i64));
                    let e = a + i;
                    if e < 0 {
                        plus.add_term((2 * e, 0), term);
                    } else {
                        poly_part.add_term((2 * e, 0), term);
                    }
                }
            } else if c < 0 {
                // (ξ_n − h_+)^a = Σ_i C(a,i) (−δ)^{a−i} (ξ_n − h_−)^i
                for i in 0..=a {
                    let sgn = if (a - i) % 2 == 0 { 1.0 } else { -1.0 };
                    let term = p.mul(&roots.delta_power(a - i), t).scale_re(sgn * binom(a as i64, i as i64));
                    let e = c + i;
                    if e < 0 {
                        minus.add_term((0, 2 * e), term);
                    } else {
                        poly_part.add_term((0, 2 * e), term);
                    }
                }
            } else {
                poly_part.add_term((a2, c2), p.clone());
            }
        }
        let leftover = poly_part.max_abs();
        let scale = self.max_abs().max(1.0);
        if leftover > 1e-9 * scale {
            return Err(BoundaryError::PolynomialPart(leftover));
        }
        Ok((plus, minus))
    }

    /// Term list: exponents of `(ξ_n − h_±)` and jet coefficients.
    pub fn to_json(&self) -> Value {
        let n = self.roots.nvars();
        let dim = self.roots.dim();
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(&(a, c), p)| {
                let sigma = match (a != 0, c != 0) {
                    (true, false) => "+",
                    (false, true) => "-",
                    (false, false) => "0",
                    (true, true) => "+-",
                };
                let coeffs: Vec<Value> = p
                    .terms()
                    .iter()
                    .map(|(m, v)| {
                        json!({
                            "y": m.0[..dim].to_vec(),
                            "eta": m.0[dim..n].to_vec(),
                            "re": v.re,
                            "im": v.im,
                        })
                    })
                    .collect();
                json!({
                    "sigma": sigma,
                    "exp_plus": a as f64 / 2.0,
                    "exp_minus": c as f64 / 2.0,
                    "coeff": coeffs,
                })
            })
            .collect();
        json!({
            "class": self.class.map(|(u, m)| json!({"u": u as f64 / 2.0, "m": m})),
            "terms": terms,
        })
    }
}

/// `ξ_n^p (ξ_n − h_+)^{−a} (ξ_n − h_−)^{−b}` split into its "+" and "−"
/// parts. Requires `p < a + b`.
pub fn partial_fraction_xi(
    p: u32,
    a: u32,
    b: u32,
    roots: &Arc<RootJet>,
) -> Result<(RootSymbol, RootSymbol), BoundaryError> {
    if roots.root_at_base(Sign::Plus) == roots.root_at_base(Sign::Minus) {
        return Err(BoundaryError::CoincidentRoots);
    }
    RootSymbol::xi_n_power(roots, p).shift(-2 * a as i32, -2 * b as i32).split()
}

/// `K_{m,l} = (ξ_n − h_+)^{−m} (ξ_n − h_−)^{−l}` split into its "+" and "−"
/// parts.
pub fn partial_fraction(m: u32, l: u32, roots: &Arc<RootJet>) -> Result<(RootSymbol, RootSymbol), BoundaryError> {
    partial_fraction_xi(0, m, l, roots)
}
