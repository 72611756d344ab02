//! Concrete model spaces and the builtin catalog.

use std::f64::consts::PI;
use std::fmt::Debug;

use maglab_core::{Mono, Poly, Trunc, C64};
use maglab_symbols::TaylorModelChart;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::charts::{
    ball_collar, disk_collar, ellipse_collar, graph_collar, sphere_chordal_chart, sphere_geodesic_chart,
    stereographic_coords, submanifold_chart, GeodesicRoute,
};
use crate::error::GeometryError;
use crate::quadrature::{
    fibonacci_sphere, gauss_legendre_on, gauss_sphere, midpoint_interval, polar_grid, spherical_grid, sunflower_disk,
    Quadrature,
};

/// Geometric integrals entering the first three expansion coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub vol: f64,
    pub vol_boundary: f64,
    /// `∫_X s dV` for the scalar curvature `s`.
    pub integral_s: f64,
    /// `∫_{∂X} H dA` for the mean curvature `H` (mean of principal curvatures).
    pub integral_h: f64,
}

/// A compact metric space with the data needed by the symbolic and numeric
/// pipelines. Points are given in ambient coordinates.
pub trait GeometryModel: Debug + Send + Sync {
    fn name(&self) -> &str;
    fn dim(&self) -> usize;
    /// Parameters as JSON, in the form accepted by [`model_from_spec`].
    fn params(&self) -> Value;
    /// Caveats attached to the model.
    fn flags(&self) -> Vec<&'static str> {
        Vec::new()
    }
    fn exact_distance(&self, a: &[f64], b: &[f64]) -> f64;
    /// Quadrature nodes for the discretized magnitude problem.
    fn sample(&self, n: usize) -> Quadrature;
    fn closed_form(&self) -> Option<ClosedForm>;
    /// Taylor chart of `d²` at an interior point.
    fn interior_chart(&self, p: &[f64], jet_order: u32, j_max: usize) -> Result<TaylorModelChart, GeometryError>;
    /// Quadrature for the Riemannian volume, used to integrate densities.
    fn interior_quadrature(&self, budget: usize) -> Quadrature;
    /// Metric-normal collar chart at a boundary point; `None` without boundary.
    fn boundary_collar(
        &self,
        p: &[f64],
        jet_order: u32,
        j_max: usize,
    ) -> Result<Option<TaylorModelChart>, GeometryError>;
    /// Quadrature for the boundary measure (counting measure when `n = 1`).
    fn boundary_quadrature(&self, budget: usize) -> Quadrature;
    /// Whether all interior (resp. boundary) charts are isometric, so that a
    /// density need only be evaluated once.
    fn homogeneous(&self) -> (bool, bool) {
        (false, false)
    }
    /// `∫_X e^{−R d(p,y)} dV(y)` when known in closed form.
    fn kernel_integral(&self, _p: &[f64], _r: f64) -> Option<f64> {
        None
    }
    /// `(n, ρ)` when the model is isometric to the Euclidean ball of radius
    /// `ρ` in `ℝ^n`.
    fn radial_ball(&self) -> Option<(usize, f64)> {
        None
    }
}

fn param(params: &Value, key: &str, default: f64) -> Result<f64, GeometryError> {
    match params.get(key) {
        None | Some(Value::Null) => Ok(default),
        Some(v) => {
            let x = v.as_f64().ok_or_else(|| GeometryError::InvalidParams(format!("`{key}` must be a number")))?;
            if x.is_finite() && x > 0.0 {
                Ok(x)
            } else {
                Err(GeometryError::InvalidParams(format!("`{key}` must be positive")))
            }
        }
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// The interval `[0, ℓ]`.
#[derive(Clone, Debug)]
pub struct Interval {
    pub length: f64,
}

impl GeometryModel for Interval {
    fn name(&self) -> &str {
        "interval"
    }
    fn dim(&self) -> usize {
        1
    }
    fn params(&self) -> Value {
        json!({ "length": self.length })
    }
    fn exact_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        (a[0] - b[0]).abs()
    }
    fn sample(&self, n: usize) -> Quadrature {
        midpoint_interval(self.length, n)
    }
    fn closed_form(&self) -> Option<ClosedForm> {
        Some(ClosedForm { vol: self.length, vol_boundary: 2.0, integral_s: 0.0, integral_h: 0.0 })
    }
    fn interior_chart(&self, _p: &[f64], jet_order: u32, j_max: usize) -> Result<TaylorModelChart, GeometryError> {
        Ok(TaylorModelChart::flat(1, jet_order, j_max))
    }
    fn interior_quadrature(&self, budget: usize) -> Quadrature {
        midpoint_interval(self.length, budget.max(1))
    }
    fn boundary_collar(&self, _p: &[f64], jet_order: u32, j_max: usize) -> Result<Option<TaylorModelChart>, GeometryError> {
        Ok(Some(TaylorModelChart::flat(1, jet_order, j_max)))
    }
    fn boundary_quadrature(&self, _budget: usize) -> Quadrature {
        Quadrature { points: vec![vec![0.0], vec![self.length]], weights: vec![1.0, 1.0] }
    }
    fn kernel_integral(&self, p: &[f64], r: f64) -> Option<f64> {
        Some((2.0 - (-r * p[0]).exp() - (-r * (self.length - p[0])).exp()) / r)
    }
    fn radial_ball(&self) -> Option<(usize, f64)> {
        Some((1, self.length / 2.0))
    }
    fn homogeneous(&self) -> (bool, bool) {
        (true, true)
    }
}

/// The ellipse domain `x²/a² + y²/b² ≤ 1`; the disk when `a = b`.
#[derive(Clone, Debug)]
pub struct EllipseDomain {
    pub a: f64,
    pub b: f64,
}

impl EllipseDomain {
    fn is_disk(&self) -> bool {
        self.a == self.b
    }

    fn angle_of(&self, p: &[f64]) -> f64 {
        (p[1] / self.b).atan2(p[0] / self.a)
    }

    fn perimeter(&self) -> f64 {
        self.boundary_quadrature(4096).total_weight()
    }
}

impl GeometryModel for EllipseDomain {
    fn name(&self) -> &str {
        if self.is_disk() {
            "disk"
        } else {
            "ellipse"
        }
    }
    fn dim(&self) -> usize {
        2
    }
    fn params(&self) -> Value {
        if self.is_disk() {
            json!({ "radius": self.a })
        } else {
            json!({ "a": self.a, "b": self.b })
        }
    }
    fn exact_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        euclid(a, b)
    }
    fn sample(&self, n: usize) -> Quadrature {
        let mut q = sunflower_disk(1.0, n);
        for (p, w) in q.points.iter_mut().zip(q.weights.iter_mut()) {
            p[0] *= self.a;
            p[1] *= self.b;
            *w *= self.a * self.b;
        }
        q
    }
    fn closed_form(&self) -> Option<ClosedForm> {
        Some(ClosedForm { vol: PI * self.a * self.b, vol_boundary: self.perimeter(), integral_s: 0.0, integral_h: 2.0 * PI })
    }
    fn interior_chart(&self, _p: &[f64], jet_order: u32, j_max: usize) -> Result<TaylorModelChart, GeometryError> {
        Ok(TaylorModelChart::flat(2, jet_order, j_max))
    }
    fn interior_quadrature(&self, budget: usize) -> Quadrature {
        let mut q = polar_grid(1.0, budget.max(1));
        for (p, w) in q.points.iter_mut().zip(q.weights.iter_mut()) {
            p[0] *= self.a;
            p[1] *= self.b;
            *w *= self.a * self.b;
        }
        q
    }
    fn radial_ball(&self) -> Option<(usize, f64)> {
        self.is_disk().then_some((2, self.a))
    }
    fn boundary_collar(&self, p: &[f64], jet_order: u32, j_max: usize) -> Result<Option<TaylorModelChart>, GeometryError> {
        let th = self.angle_of(p);
        let chart = if self.is_disk() {
            disk_collar(self.a, th, jet_order, j_max)?
        } else {
            ellipse_collar(self.a, self.b, th, jet_order, j_max)?
        };
        Ok(Some(chart))
    }
    fn boundary_quadrature(&self, budget: usize) -> Quadrature {
        let m = budget.max(1);
        let h = 2.0 * PI / m as f64;
        let mut q = Quadrature::default();
        for j in 0..m {
            let t = j as f64 * h;
            let speed = ((self.a * t.sin()).powi(2) + (self.b * t.cos()).powi(2)).sqrt();
            q.push(vec![self.a * t.cos(), self.b * t.sin()], speed * h);
        }
        q
    }
    fn homogeneous(&self) -> (bool, bool) {
        (true, self.is_disk())
    }
}

/// The closed ball of radius `r` in `ℝ³`.
#[derive(Clone, Debug)]
pub struct Ball3 {
    pub radius: f64,
}

impl GeometryModel for Ball3 {
    fn name(&self) -> &str {
        "ball3"
    }
    fn dim(&self) -> usize {
        3
    }
    fn params(&self) -> Value {
        json!({ "radius": self.radius })
    }
    fn exact_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        euclid(a, b)
    }
    fn sample(&self, n: usize) -> Quadrature {
        spherical_grid(self.radius, n)
    }
    fn closed_form(&self) -> Option<ClosedForm> {
        let r = self.radius;
        Some(ClosedForm {
            vol: 4.0 * PI * r.powi(3) / 3.0,
            vol_boundary: 4.0 * PI * r * r,
            integral_s: 0.0,
            integral_h: 4.0 * PI * r,
        })
    }
    fn interior_chart(&self, _p: &[f64], jet_order: u32, j_max: usize) -> Result<TaylorModelChart, GeometryError> {
        Ok(TaylorModelChart::flat(3, jet_order, j_max))
    }
    fn interior_quadrature(&self, budget: usize) -> Quadrature {
        // Gauss in the radius so that the volume is exact
        let nr = ((budget as f64 / 8.0).cbrt().ceil() as usize).max(1);
        let (rs, wr) = gauss_legendre_on(nr, 0.0, self.radius);
        let shell = gauss_sphere(1.0, nr.max(2));
        let mut q = Quadrature::default();
        for (r, w) in rs.iter().zip(&wr) {
            for (p, ws) in shell.points.iter().zip(&shell.weights) {
                q.push(p.iter().map(|c| c * r).collect(), ws * r * r * w);
            }
        }
        q
    }
    fn boundary_collar(&self, p: &[f64], jet_order: u32, j_max: usize) -> Result<Option<TaylorModelChart>, GeometryError> {
        let unit: Vec<f64> = p.iter().map(|c| c / self.radius).collect();
        let (u0, _) = stereographic_coords(1.0, &unit);
        Ok(Some(ball_collar(self.radius, &u0, jet_order, j_max)?))
    }
    fn boundary_quadrature(&self, budget: usize) -> Quadrature {
        let nz = ((budget as f64 / 2.0).sqrt().round() as usize).max(1);
        gauss_sphere(self.radius, nz)
    }
    fn radial_ball(&self) -> Option<(usize, f64)> {
        Some((3, self.radius))
    }
    fn homogeneous(&self) -> (bool, bool) {
        (true, true)
    }
}

/// The round sphere `S²(ρ) ⊂ ℝ³` with geodesic or chordal distance.
#[derive(Clone, Debug)]
pub struct Sphere2 {
    pub radius: f64,
    pub geodesic: bool,
}

impl GeometryModel for Sphere2 {
    fn name(&self) -> &str {
        if self.geodesic {
            "sphere2_geodesic"
        } else {
            "sphere2_chordal"
        }
    }
    fn dim(&self) -> usize {
        2
    }
    fn params(&self) -> Value {
        json!({ "radius": self.radius })
    }
    fn exact_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let chord = euclid(a, b);
        if self.geodesic {
            2.0 * self.radius * (chord / (2.0 * self.radius)).min(1.0).asin()
        } else {
            chord
        }
    }
    fn sample(&self, n: usize) -> Quadrature {
        fibonacci_sphere(self.radius, n)
    }
    fn closed_form(&self) -> Option<ClosedForm> {
        if !self.geodesic {
            return None;
        }
        let r2 = self.radius * self.radius;
        Some(ClosedForm { vol: 4.0 * PI * r2, vol_boundary: 0.0, integral_s: 8.0 * PI, integral_h: 0.0 })
    }
    fn interior_chart(&self, p: &[f64], jet_order: u32, j_max: usize) -> Result<TaylorModelChart, GeometryError> {
        let (x0, _) = stereographic_coords(self.radius, p);
        if self.geodesic {
            sphere_geodesic_chart(self.radius, &x0, jet_order, j_max, GeodesicRoute::Christoffel)
        } else {
            sphere_chordal_chart(self.radius, &x0, jet_order, j_max)
        }
    }
    fn interior_quadrature(&self, budget: usize) -> Quadrature {
        fibonacci_sphere(self.radius, budget.max(1))
    }
    fn boundary_collar(&self, _p: &[f64], _jet_order: u32, _j_max: usize) -> Result<Option<TaylorModelChart>, GeometryError> {
        Ok(None)
    }
    fn boundary_quadrature(&self, _budget: usize) -> Quadrature {
        Quadrature::default()
    }
    fn kernel_integral(&self, _p: &[f64], r: f64) -> Option<f64> {
        let rho = self.radius;
        if self.geodesic {
            let rr = r * rho;
            Some(2.0 * PI * rho * rho * (1.0 + (-PI * rr).exp()) / (1.0 + rr * rr))
        } else {
            // chord t = 2ρ sin(θ/2) turns the area element into 2π t dt
            let x = 2.0 * r * rho;
            Some(2.0 * PI * (1.0 - (-x).exp() * (1.0 + x)) / (r * r))
        }
    }
    fn homogeneous(&self) -> (bool, bool) {
        (true, true)
    }
}

/// The flat torus `ℝ²/Lℤ²`, points in `[0, L)²`.
///
/// Its distance is not smooth at the cut locus, so no Taylor charts are
/// offered and the model only feeds the numeric oracle.
#[derive(Clone, Debug)]
pub struct FlatTorus {
    pub length: f64,
}

impl GeometryModel for FlatTorus {
    fn name(&self) -> &str {
        "torus2_geodesic"
    }
    fn dim(&self) -> usize {
        2
    }
    fn params(&self) -> Value {
        json!({ "length": self.length })
    }
    fn flags(&self) -> Vec<&'static str> {
        vec!["oracle only: the distance fails the smooth-expansion property at the cut locus"]
    }
    fn exact_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let l = self.length;
        a.iter()
            .zip(b)
            .map(|(x, y)| {
                let d = (x - y).abs().rem_euclid(l);
                d.min(l - d).powi(2)
            })
            .sum::<f64>()
            .sqrt()
    }
    fn sample(&self, n: usize) -> Quadrature {
        let m = ((n as f64).sqrt().round() as usize).max(1);
        let h = self.length / m as f64;
        let mut q = Quadrature::default();
        for i in 0..m {
            for j in 0..m {
                q.push(vec![(i as f64 + 0.5) * h, (j as f64 + 0.5) * h], h * h);
            }
        }
        q
    }
    fn closed_form(&self) -> Option<ClosedForm> {
        Some(ClosedForm { vol: self.length * self.length, vol_boundary: 0.0, integral_s: 0.0, integral_h: 0.0 })
    }
    fn interior_chart(&self, _p: &[f64], _jet_order: u32, _j_max: usize) -> Result<TaylorModelChart, GeometryError> {
        Err(GeometryError::NoSymbolicPath(self.name().into()))
    }
    fn interior_quadrature(&self, budget: usize) -> Quadrature {
        self.sample(budget)
    }
    fn boundary_collar(&self, _p: &[f64], _jet_order: u32, _j_max: usize) -> Result<Option<TaylorModelChart>, GeometryError> {
        Err(GeometryError::NoSymbolicPath(self.name().into()))
    }
    fn boundary_quadrature(&self, _budget: usize) -> Quadrature {
        Quadrature::default()
    }
    fn kernel_integral(&self, _p: &[f64], r: f64) -> Option<f64> {
        // eight copies of the triangle 0 ≤ θ ≤ π/4 of the centred square
        let (th, w) = gauss_legendre_on(64, 0.0, PI / 4.0);
        let s: f64 = th
            .iter()
            .zip(&w)
            .map(|(t, w)| {
                let x = r * self.length / (2.0 * t.cos());
                w * (1.0 - (-x).exp() * (1.0 + x))
            })
            .sum();
        Some(8.0 * s / (r * r))
    }
}

/// `φ(x₀ + y)` as a polynomial in `y`.
pub fn recentre(phi: &Poly, x0: &[f64]) -> Poly {
    let k = phi.nvars();
    let subs: Vec<Poly> = (0..k).map(|i| Poly::var(k, i).add(&Poly::real(k, x0[i]))).collect();
    phi.compose(&subs, &Trunc::none())
}

/// Parses `[{"exps": [..], "coeff": c}, ...]` into a polynomial.
pub fn poly_from_json(v: &Value, nvars: usize) -> Result<Poly, GeometryError> {
    let terms: Vec<PolyTerm> = serde_json::from_value(v.clone())?;
    let mut p = Poly::zero(nvars);
    for t in terms {
        if t.exps.len() != nvars {
            return Err(GeometryError::InvalidParams(format!("monomial needs {nvars} exponents")));
        }
        p.add_term(Mono::from_exps(&t.exps), C64::new(t.coeff, 0.0));
    }
    Ok(p)
}

/// One monomial of a polynomial given in JSON.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyTerm {
    pub exps: Vec<u8>,
    pub coeff: f64,
}

fn poly_to_json(p: &Poly) -> Value {
    let terms: Vec<PolyTerm> = p
        .terms()
        .iter()
        .map(|(m, c)| PolyTerm { exps: m.0[..p.nvars()].to_vec(), coeff: c.re })
        .collect();
    json!(terms)
}

fn box_grid(dim: usize, half: f64, n: usize) -> Quadrature {
    let m = ((n as f64).powf(1.0 / dim as f64).round() as usize).max(1);
    let h = 2.0 * half / m as f64;
    let mut q = Quadrature::default();
    let total = m.pow(dim as u32);
    for idx in 0..total {
        let mut r = idx;
        let mut p = Vec::with_capacity(dim);
        for _ in 0..dim {
            p.push(-half + (r % m) as f64 * h + 0.5 * h);
            r /= m;
        }
        q.push(p, h.powi(dim as i32));
    }
    q
}

/// The domain `{x′ ∈ [−a, a]^{n−1}, φ(x′) ≤ x_n ≤ φ(x′) + depth}` with the
/// Euclidean distance; the boundary part `x_n = φ(x′)` carries collars.
#[derive(Clone, Debug)]
pub struct GraphDomain {
    pub phi: Poly,
    pub half_width: f64,
    pub depth: f64,
}

impl GeometryModel for GraphDomain {
    fn name(&self) -> &str {
        "graph_domain"
    }
    fn dim(&self) -> usize {
        self.phi.nvars() + 1
    }
    fn params(&self) -> Value {
        json!({ "dim": self.dim(), "phi": poly_to_json(&self.phi), "half_width": self.half_width, "depth": self.depth })
    }
    fn flags(&self) -> Vec<&'static str> {
        vec!["local patch: only the graph part of the boundary carries collars"]
    }
    fn exact_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        euclid(a, b)
    }
    fn sample(&self, n: usize) -> Quadrature {
        let d = self.dim();
        let mut q = box_grid(d, 0.5, n);
        for p in q.points.iter_mut() {
            for c in p[..d - 1].iter_mut() {
                *c *= 2.0 * self.half_width;
            }
            let base = self.phi.eval_re(&p[..d - 1]).re;
            p[d - 1] = base + (p[d - 1] + 0.5) * self.depth;
        }
        let scale = (2.0 * self.half_width).powi(d as i32 - 1) * self.depth;
        q.weights.iter_mut().for_each(|w| *w *= scale);
        q
    }
    fn closed_form(&self) -> Option<ClosedForm> {
        None
    }
    fn interior_chart(&self, _p: &[f64], jet_order: u32, j_max: usize) -> Result<TaylorModelChart, GeometryError> {
        Ok(TaylorModelChart::flat(self.dim(), jet_order, j_max))
    }
    fn interior_quadrature(&self, budget: usize) -> Quadrature {
        self.sample(budget)
    }
    fn boundary_collar(&self, p: &[f64], jet_order: u32, j_max: usize) -> Result<Option<TaylorModelChart>, GeometryError> {
        let d = self.dim();
        let phi = recentre(&self.phi, &p[..d - 1]);
        Ok(Some(graph_collar(&phi, jet_order, j_max)?))
    }
    fn boundary_quadrature(&self, budget: usize) -> Quadrature {
        let d = self.dim();
        let mut q = box_grid(d - 1, self.half_width, budget);
        for (p, w) in q.points.iter_mut().zip(q.weights.iter_mut()) {
            let grad: f64 = (0..d - 1).map(|i| self.phi.deriv(i).eval_re(p).re.powi(2)).sum();
            *w *= (1.0 + grad).sqrt();
            let z = self.phi.eval_re(p).re;
            p.push(z);
        }
        q
    }
}

/// The graph `{(x, φ(x)) : x ∈ [−a, a]ⁿ} ⊂ ℝ^{n+m}` with the chordal distance.
#[derive(Clone, Debug)]
pub struct GraphSubmanifold {
    pub phis: Vec<Poly>,
    pub dim: usize,
    pub half_width: f64,
}

impl GraphSubmanifold {
    fn embed(&self, x: &[f64]) -> Vec<f64> {
        let mut p = x.to_vec();
        p.extend(self.phis.iter().map(|f| f.eval_re(x).re));
        p
    }
}

impl GeometryModel for GraphSubmanifold {
    fn name(&self) -> &str {
        "submanifold"
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn params(&self) -> Value {
        let phis: Vec<Value> = self.phis.iter().map(poly_to_json).collect();
        json!({ "dim": self.dim, "phis": phis, "half_width": self.half_width })
    }
    fn flags(&self) -> Vec<&'static str> {
        vec!["local patch: the edge of the patch is ignored by the symbolic path"]
    }
    fn exact_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        euclid(a, b)
    }
    fn sample(&self, n: usize) -> Quadrature {
        let mut q = box_grid(self.dim, self.half_width, n);
        for (p, w) in q.points.iter_mut().zip(q.weights.iter_mut()) {
            // √det(I + Σ ∇φ_l ∇φ_lᵀ) by Cholesky of the induced metric
            let grads: Vec<Vec<f64>> =
                self.phis.iter().map(|f| (0..self.dim).map(|i| f.deriv(i).eval_re(p).re).collect()).collect();
            let g: Vec<Vec<f64>> = (0..self.dim)
                .map(|i| {
                    (0..self.dim)
                        .map(|j| f64::from(i == j) + grads.iter().map(|gr| gr[i] * gr[j]).sum::<f64>())
                        .collect()
                })
                .collect();
            let l = maglab_symbols::chart::cholesky(&g).expect("induced metric is positive definite");
            *w *= (0..self.dim).map(|i| l[i][i]).product::<f64>();
            *p = self.embed(p);
        }
        q
    }
    fn closed_form(&self) -> Option<ClosedForm> {
        None
    }
    fn interior_chart(&self, p: &[f64], jet_order: u32, j_max: usize) -> Result<TaylorModelChart, GeometryError> {
        let phis: Vec<Poly> = self.phis.iter().map(|f| recentre(f, &p[..self.dim])).collect();
        submanifold_chart(&phis, self.dim, jet_order, j_max)
    }
    fn interior_quadrature(&self, budget: usize) -> Quadrature {
        self.sample(budget)
    }
    fn boundary_collar(&self, _p: &[f64], _jet_order: u32, _j_max: usize) -> Result<Option<TaylorModelChart>, GeometryError> {
        Ok(None)
    }
    fn boundary_quadrature(&self, _budget: usize) -> Quadrature {
        Quadrature::default()
    }
}

/// The geometry spec accepted by the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometrySpec {
    pub model: String,
    #[serde(default)]
    pub params: Value,
    #[serde(default = "default_jet_order")]
    pub jet_order: u32,
    #[serde(default = "default_quadrature_n")]
    pub quadrature_n: usize,
}

fn default_jet_order() -> u32 {
    2
}

fn default_quadrature_n() -> usize {
    1000
}

/// Catalog entry for a builtin model.
#[derive(Clone, Debug, Serialize)]
pub struct ModelInfo {
    pub name: &'static str,
    pub dim: usize,
    pub params: Value,
    pub symbolic: bool,
    pub flags: Vec<&'static str>,
}

/// Names of all models accepted by [`model_from_spec`], with default
/// parameters.
pub fn builtin_models() -> Vec<ModelInfo> {
    let names = [
        "interval",
        "disk",
        "ellipse",
        "ball3",
        "sphere2_geodesic",
        "sphere2_chordal",
        "torus2_geodesic",
        "half_space",
    ];
    names
        .iter()
        .map(|name| {
            let m = builtin_model(name, &Value::Null).expect("builtin defaults are valid");
            ModelInfo {
                name,
                dim: m.dim(),
                params: m.params(),
                symbolic: m.interior_chart(&m.sample(1).points[0], 0, 2).is_ok(),
                flags: m.flags(),
            }
        })
        .collect()
}

/// Builds a model by name; missing parameters take their defaults.
pub fn builtin_model(name: &str, params: &Value) -> Result<Box<dyn GeometryModel>, GeometryError> {
    let model: Box<dyn GeometryModel> = match name {
        "interval" => Box::new(Interval { length: param(params, "length", 1.0)? }),
        "disk" => {
            let r = param(params, "radius", 1.0)?;
            Box::new(EllipseDomain { a: r, b: r })
        }
        "ellipse" => Box::new(EllipseDomain { a: param(params, "a", 1.5)?, b: param(params, "b", 1.0)? }),
        "ball3" => Box::new(Ball3 { radius: param(params, "radius", 1.0)? }),
        "sphere2_geodesic" => Box::new(Sphere2 { radius: param(params, "radius", 1.0)?, geodesic: true }),
        "sphere2_chordal" => Box::new(Sphere2 { radius: param(params, "radius", 1.0)?, geodesic: false }),
        "torus2_geodesic" => Box::new(FlatTorus { length: param(params, "length", 1.0)? }),
        "half_space" | "graph_domain" => {
            let dim = params.get("dim").and_then(Value::as_u64).unwrap_or(2) as usize;
            if !(2..=4).contains(&dim) {
                return Err(GeometryError::InvalidParams("graph domains need 2 ≤ dim ≤ 4".into()));
            }
            let phi = match params.get("phi") {
                Some(v) if name == "graph_domain" => poly_from_json(v, dim - 1)?,
                _ => Poly::zero(dim - 1),
            };
            Box::new(GraphDomain {
                phi,
                half_width: param(params, "half_width", 0.5)?,
                depth: param(params, "depth", 1.0)?,
            })
        }
        "submanifold" => {
            let dim = params.get("dim").and_then(Value::as_u64).unwrap_or(2) as usize;
            if !(1..=4).contains(&dim) {
                return Err(GeometryError::InvalidParams("submanifolds need 1 ≤ dim ≤ 4".into()));
            }
            let phis = match params.get("phis").and_then(Value::as_array) {
                Some(list) => list.iter().map(|v| poly_from_json(v, dim)).collect::<Result<Vec<_>, _>>()?,
                None => Vec::new(),
            };
            Box::new(GraphSubmanifold { phis, dim, half_width: param(params, "half_width", 0.5)? })
        }
        other => return Err(GeometryError::UnknownModel(other.into())),
    };
    Ok(model)
}

/// Builds the model named in a geometry spec.
pub fn model_from_spec(spec: &GeometrySpec) -> Result<Box<dyn GeometryModel>, GeometryError> {
    builtin_model(&spec.model, &spec.params)
}
