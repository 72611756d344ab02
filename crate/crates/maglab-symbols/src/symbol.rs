//! Symbols built from powers and logarithms of `S = R² + g(x)(ξ,ξ)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use maglab_core::{JetTensor, Mono, Poly, Trunc, C64};
use serde_json::{json, Value};

use crate::chart::{y_trunc, TaylorModelChart};

/// The dual metric shared by every symbol built over one chart.
#[derive(Clone, Debug)]
pub struct SymbolMetric {
    dim: usize,
    jet_order: u32,
    g: Poly,
    dg_xi: Vec<Poly>,
    dg_y: Vec<Poly>,
    trunc: Trunc,
}

impl SymbolMetric {
    pub fn new(chart: &TaylorModelChart) -> Arc<Self> {
        Self::from_dual(chart.dim, chart.jet_order, chart.dual_poly())
    }

    /// From `g(y)(ξ,ξ)` given as a polynomial in `y` (slots `0..n`) and `ξ`.
    pub fn from_dual(dim: usize, jet_order: u32, g: Poly) -> Arc<Self> {
        let trunc = y_trunc(dim, jet_order);
        let g = g.truncate(&trunc);
        let dg_xi = (0..dim).map(|i| g.deriv(dim + i)).collect();
        let dg_y = (0..dim).map(|i| g.deriv(i)).collect();
        Arc::new(SymbolMetric { dim, jet_order, g, dg_xi, dg_y, trunc })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn jet_order(&self) -> u32 {
        self.jet_order
    }

    /// `g(y)(ξ,ξ)`.
    pub fn g(&self) -> &Poly {
        &self.g
    }

    pub fn trunc(&self) -> &Trunc {
        &self.trunc
    }

    pub fn nvars(&self) -> usize {
        2 * self.dim
    }
}

/// Key of a term: the exponent `p_half/2` of `S` and the power of `log S`.
pub type TermKey = (i32, u8);

/// A finite sum `Σ P(y,ξ) S^{p_half/2} log^e S` with `S = R² + g(y)(ξ,ξ)`.
///
/// Every `P` is homogeneous in `ξ`, so each term is homogeneous in `(ξ,R)`.
#[derive(Clone, Debug)]
pub struct InteriorSymbol {
    metric: Arc<SymbolMetric>,
    terms: BTreeMap<TermKey, Poly>,
    degree: Option<i32>,
    /// Order through which the `y`-jets of the coefficients are exact.
    y_order: u32,
}

impl InteriorSymbol {
    pub fn zero(metric: &Arc<SymbolMetric>) -> Self {
        InteriorSymbol {
            metric: metric.clone(),
            terms: BTreeMap::new(),
            degree: None,
            y_order: metric.jet_order,
        }
    }

    /// `c · S^{p_half/2} log^e S`.
    pub fn power(metric: &Arc<SymbolMetric>, p_half: i32, log_power: u8, c: C64) -> Self {
        let mut s = Self::zero(metric);
        s.add_term((p_half, log_power), Poly::constant(metric.nvars(), c));
        s.degree = Some(p_half);
        s
    }

    /// Restricts the `y`-jets to `order`.
    pub fn truncate_y(&self, order: u32) -> Self {
        let mut r = self.clone();
        r.y_order = order.min(self.y_order);
        let t = r.trunc();
        r.terms = r
            .terms
            .into_iter()
            .map(|(k, p)| (k, p.truncate(&t)))
            .filter(|(_, p)| !p.is_empty())
            .collect();
        r
    }

    pub fn y_order(&self) -> u32 {
        self.y_order
    }

    fn trunc(&self) -> Trunc {
        y_trunc(self.metric.dim, self.y_order)
    }

    /// A symbol independent of `ξ`, such as a density.
    pub fn from_poly(metric: &Arc<SymbolMetric>, p: Poly) -> Self {
        let mut s = Self::zero(metric);
        s.add_term((0, 0), p.truncate(&metric.trunc));
        s.degree = Some(0);
        s
    }

    pub fn metric(&self) -> &Arc<SymbolMetric> {
        &self.metric
    }

    /// The dual metric `g` as a jet tensor.
    pub fn metric_dual(&self) -> JetTensor {
        JetTensor::from_poly(&self.metric.g, self.metric.dim, 2, self.metric.jet_order)
    }

    pub fn dim(&self) -> usize {
        self.metric.dim
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Homogeneity degree in `(ξ,R)` if known and uniform.
    pub fn homogeneity_degree(&self) -> Option<i32> {
        self.degree
    }

    pub fn with_degree(mut self, degree: i32) -> Self {
        self.degree = Some(degree);
        self
    }

    fn add_term(&mut self, key: TermKey, p: Poly) {
        if p.is_empty() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(q) => {
                q.add_assign_scaled(&p, C64::new(1.0, 0.0));
                if q.is_empty() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, p);
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &InteriorSymbol, s: C64) {
        let was_empty = self.terms.is_empty();
        if !other.terms.is_empty() {
            self.y_order = if was_empty { other.y_order } else { self.y_order.min(other.y_order) };
        }
        let t = self.trunc();
        for (k, p) in &other.terms {
            self.add_term(*k, p.scale(s).truncate(&t));
        }
        if was_empty && !other.terms.is_empty() {
            let order = self.y_order;
            *self = self.truncate_y(order);
        }
        self.degree = match (self.degree, other.degree) {
            _ if other.terms.is_empty() => self.degree,
            _ if was_empty => other.degree,
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        };
    }

    pub fn add(&self, other: &InteriorSymbol) -> InteriorSymbol {
        let mut r = self.clone();
        r.add_assign_scaled(other, C64::new(1.0, 0.0));
        r
    }

    pub fn scale(&self, s: C64) -> InteriorSymbol {
        let mut r = Self::zero(&self.metric);
        for (k, p) in &self.terms {
            r.add_term(*k, p.scale(s));
        }
        r.degree = self.degree;
        r.y_order = self.y_order;
        r
    }

    /// Multiplies every coefficient by a polynomial of `ξ`-degree `deg`.
    pub fn mul_poly(&self, p: &Poly, deg: u32) -> InteriorSymbol {
        let mut r = Self::zero(&self.metric);
        r.y_order = self.y_order;
        let t = self.trunc();
        for (k, q) in &self.terms {
            r.add_term(*k, q.mul(p, &t));
        }
        r.degree = self.degree.map(|d| d + deg as i32);
        r
    }

    pub fn mul(&self, other: &InteriorSymbol) -> InteriorSymbol {
        let mut r = Self::zero(&self.metric);
        r.y_order = self.y_order.min(other.y_order);
        let t = r.trunc();
        for ((pa, ea), a) in &self.terms {
            for ((pb, eb), b) in &other.terms {
                r.add_term((pa + pb, ea + eb), a.mul(b, &t));
            }
        }
        r.degree = match (self.degree, other.degree) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        r
    }

    /// Differentiates along slot `var`, with `dg` the derivative of `g` there.
    fn derive(&self, var: usize, dg: &Poly, lowers: i32) -> InteriorSymbol {
        let mut r = Self::zero(&self.metric);
        r.y_order = if var < self.metric.dim { self.y_order.saturating_sub(1) } else { self.y_order };
        let t = &r.trunc();
        for (&(p, e), q) in &self.terms {
            r.add_term((p, e), q.deriv(var).truncate(t));
            if dg.is_empty() {
                continue;
            }
            let qdg = if p != 0 || e > 0 { q.mul(dg, t) } else { continue };
            if p != 0 {
                r.add_term((p - 2, e), qdg.scale_re(p as f64 / 2.0));
            }
            if e > 0 {
                r.add_term((p - 2, e - 1), qdg.scale_re(e as f64));
            }
        }
        r.degree = self.degree.map(|d| d - lowers);
        r
    }

    /// `∂_{ξ_i}`.
    pub fn d_xi(&self, i: usize) -> InteriorSymbol {
        let n = self.metric.dim;
        self.derive(n + i, &self.metric.dg_xi[i], 1)
    }

    /// `∂_{x_i}` (through the `y`-jets).
    pub fn d_y(&self, i: usize) -> InteriorSymbol {
        self.derive(i, &self.metric.dg_y[i], 0)
    }

    /// `∂_ξ^α` for `α` indexed over `0..n`.
    pub fn d_xi_multi(&self, alpha: &Mono) -> InteriorSymbol {
        let mut r = self.clone();
        for i in 0..self.metric.dim {
            for _ in 0..alpha.0[i] {
                r = r.d_xi(i);
            }
        }
        r
    }

    /// `D_x^α = (−i∂_x)^α` for `α` indexed over `0..n`.
    pub fn dx_multi(&self, alpha: &Mono) -> InteriorSymbol {
        let mut r = self.clone();
        for i in 0..self.metric.dim {
            for _ in 0..alpha.0[i] {
                r = r.d_y(i).scale(C64::new(0.0, -1.0));
            }
        }
        r
    }

    /// Largest coefficient among terms carrying `log S`.
    pub fn log_residue(&self) -> f64 {
        self.terms.iter().filter(|((_, e), _)| *e > 0).map(|(_, p)| p.max_abs()).fold(0.0, f64::max)
    }

    /// Drops every term with a logarithmic factor.
    pub fn without_logs(&self) -> InteriorSymbol {
        let mut r = self.clone();
        r.terms.retain(|(_, e), _| *e == 0);
        r
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|p| p.max_abs()).fold(0.0, f64::max)
    }

    /// Value at base-point offset `y`, covector `ξ` and parameter `R`.
    ///
    /// Only `y = 0` is exact; other offsets evaluate the truncated jets.
    pub fn eval_at(&self, y: &[f64], xi: &[f64], r: f64) -> C64 {
        let n = self.metric.dim;
        let mut pt = vec![C64::new(0.0, 0.0); 2 * n];
        for i in 0..n {
            pt[i] = C64::new(y[i], 0.0);
            pt[n + i] = C64::new(xi[i], 0.0);
        }
        let s = r * r + self.metric.g.eval(&pt).re;
        let ls = s.ln();
        let mut total = C64::new(0.0, 0.0);
        for (&(p, e), q) in &self.terms {
            total += q.eval(&pt) * s.powf(p as f64 / 2.0) * ls.powi(e as i32);
        }
        total
    }

    /// Value at the base point.
    pub fn eval(&self, xi: &[f64], r: f64) -> C64 {
        self.eval_at(&vec![0.0; self.metric.dim], xi, r)
    }

    /// The sum of the moduli of the individual terms at the base point, the
    /// natural scale for relative cancellation checks.
    pub fn eval_scale(&self, xi: &[f64], r: f64) -> f64 {
        let n = self.metric.dim;
        let mut pt = vec![C64::new(0.0, 0.0); 2 * n];
        for i in 0..n {
            pt[n + i] = C64::new(xi[i], 0.0);
        }
        let s = r * r + self.metric.g.eval(&pt).re;
        let mut total = 0.0;
        for (&(p, e), q) in &self.terms {
            let f = s.powf(p as f64 / 2.0) * s.ln().abs().powi(e as i32);
            for (m, c) in q.terms() {
                if m.degree_in(0..n) > 0 {
                    continue;
                }
                let mono: f64 = (0..n).map(|i| xi[i].abs().powi(m.0[n + i] as i32)).product();
                total += c.norm() * mono * f;
            }
        }
        total
    }

    /// Taylor polynomial in `(y, ξ)` at `ξ = 0`, `R = 1`, through `ξ`-degree
    /// `xi_order`.
    pub fn taylor_at_zero(&self, xi_order: u32) -> Poly {
        let n = self.metric.dim;
        let t = self.trunc().with_group(n..2 * n, xi_order);
        let nv = self.metric.nvars();
        let mut base = self.metric.g.truncate(&t);
        base.add_term(Mono::one(), C64::new(1.0, 0.0));
        let log = base.ln(&t);
        let mut out = Poly::zero(nv);
        let mut powers: BTreeMap<i32, Poly> = BTreeMap::new();
        for (&(p, e), q) in &self.terms {
            let sp = powers.entry(p).or_insert_with(|| base.powf(p as f64 / 2.0, &t)).clone();
            let mut f = q.truncate(&t).mul(&sp, &t);
            for _ in 0..e {
                f = f.mul(&log, &t);
            }
            out.add_assign_scaled(&f, C64::new(1.0, 0.0));
        }
        out
    }

    /// The `(p_half, log_power, ξ-degree)` triples present at the base point.
    pub fn structure(&self) -> Vec<(i32, u8, u32)> {
        let n = self.metric.dim;
        let mut out = Vec::new();
        for (&(p, e), q) in &self.terms {
            for m in q.terms().keys() {
                let entry = (p, e, m.degree_in(n..2 * n));
                if !out.contains(&entry) {
                    out.push(entry);
                }
            }
        }
        out.sort();
        out
    }

    /// JSON tree of the base-point terms for debugging dumps.
    pub fn to_json(&self) -> Value {
        let n = self.metric.dim;
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(&(p, e), q)| {
                let coeffs: Vec<Value> = q
                    .terms()
                    .iter()
                    .filter(|(m, _)| m.degree_in(0..n) == 0)
                    .map(|(m, c)| {
                        json!({
                            "xi": m.0[n..2 * n].to_vec(),
                            "re": c.re,
                            "im": c.im,
                        })
                    })
                    .collect();
                json!({ "p_half": p, "log_power": e, "coefficients": coeffs })
            })
            .collect();
        json!({
            "dim": n,
            "homogeneity_degree": self.degree,
            "terms": terms,
        })
    }
}
