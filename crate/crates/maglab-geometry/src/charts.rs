//! Chart builders: Taylor models of squared distances at one base point.
//!
//! Every builder returns a [`TaylorModelChart`] whose `y` variables are chart
//! coordinates centred at the base point. Collar charts put the inward
//! transversal coordinate last.

use maglab_core::{Poly, Trunc, C64};
use maglab_symbols::TaylorModelChart;

use crate::error::GeometryError;
use crate::expansion::{arccos_sq_series, embedding_expansion, expansion_trunc, geodesic_expansion};

/// Lifts a polynomial in `k ≤ n` chart variables (Taylor data about the base
/// point) into the `2n`-variable space used by the expansions.
pub fn lift(p: &Poly, dim: usize) -> Poly {
    let map: Vec<usize> = (0..p.nvars()).collect();
    p.remap(2 * dim, &map)
}

/// `x₀ + y` as `2n`-variable polynomials.
pub fn shifted_coords(x0: &[f64], dim: usize) -> Vec<Poly> {
    x0.iter().enumerate().map(|(i, &c)| Poly::var(2 * dim, i).add(&Poly::real(2 * dim, c))).collect()
}

fn sq_norm(xs: &[Poly], t: &Trunc) -> Poly {
    let nv = xs[0].nvars();
    let mut s = Poly::zero(nv);
    for x in xs {
        s.add_assign_scaled(&x.mul(x, t), C64::new(1.0, 0.0));
    }
    s
}

fn check_jets(jet_order: u32, j_max: usize) -> Result<(), GeometryError> {
    if j_max < 2 {
        return Err(GeometryError::InsufficientJets(format!("j_max = {j_max} < 2")));
    }
    if jet_order as usize + j_max > 14 {
        return Err(GeometryError::InsufficientJets(format!(
            "jet order {jet_order} with j_max {j_max} exceeds the supported degree"
        )));
    }
    Ok(())
}

fn chart(dim: usize, g: &Poly, jet_order: u32, j_max: usize) -> Result<TaylorModelChart, GeometryError> {
    Ok(TaylorModelChart::from_expansion(dim, g, jet_order, j_max)?)
}

/// Chart of the pull-back of the Euclidean distance along an embedding whose
/// components are given as `2n`-variable polynomials in `y`.
pub fn embedded_chart(
    components: &[Poly],
    dim: usize,
    jet_order: u32,
    j_max: usize,
) -> Result<TaylorModelChart, GeometryError> {
    check_jets(jet_order, j_max)?;
    chart(dim, &embedding_expansion(components, dim, jet_order, j_max), jet_order, j_max)
}

/// Inverse stereographic map `ℝⁿ → Sⁿ(ρ) ⊂ ℝⁿ⁺¹` at `x = x₀ + y`, with `x = 0`
/// at the north pole, exact through total degree `deg`.
pub fn stereographic(rho: f64, x0: &[f64], deg: u32) -> Vec<Poly> {
    let n = x0.len();
    let t = Trunc::total(deg);
    let x = shifted_coords(x0, n);
    let s = sq_norm(&x, &t);
    let inv = s.add(&Poly::real(2 * n, rho * rho)).recip(&t);
    let mut out: Vec<Poly> = x.iter().map(|xi| xi.mul(&inv, &t).scale_re(2.0 * rho * rho)).collect();
    out.push(Poly::real(2 * n, rho * rho).sub(&s).mul(&inv, &t).scale_re(rho));
    out
}

/// Stereographic coordinates of a point on `Sⁿ(ρ)`, projecting from the pole
/// farther from `p`; the flag records whether the south pole was used.
pub fn stereographic_coords(rho: f64, p: &[f64]) -> (Vec<f64>, bool) {
    let n = p.len() - 1;
    let last = p[n];
    let from_south = last >= 0.0;
    let den = if from_south { rho + last } else { rho - last };
    (p[..n].iter().map(|c| rho * c / den).collect(), from_south)
}

/// The conformal metric `4ρ⁴/(ρ² + |x|²)² δ` of stereographic coordinates.
pub fn stereographic_metric(rho: f64, x0: &[f64], deg: u32) -> Vec<Vec<Poly>> {
    let n = x0.len();
    let t = Trunc::total(deg);
    let x = shifted_coords(x0, n);
    let f = sq_norm(&x, &t).add(&Poly::real(2 * n, rho * rho)).powf(-2.0, &t).scale_re(4.0 * rho.powi(4));
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { f.clone() } else { Poly::zero(2 * n) }).collect())
        .collect()
}

/// How the geodesic distance on a round sphere is expanded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeodesicRoute {
    /// Exponential-map recursion from the Christoffel symbols.
    Christoffel,
    /// `ρ² arccos(1 − chord²/2ρ²)²` applied to the chordal expansion.
    Arccos,
}

/// Geodesic chart of `Sⁿ(ρ)` in stereographic coordinates at `x₀`.
pub fn sphere_geodesic_chart(
    rho: f64,
    x0: &[f64],
    jet_order: u32,
    j_max: usize,
    route: GeodesicRoute,
) -> Result<TaylorModelChart, GeometryError> {
    check_jets(jet_order, j_max)?;
    let n = x0.len();
    let deg = jet_order + j_max as u32;
    let g = match route {
        GeodesicRoute::Christoffel => geodesic_expansion(&stereographic_metric(rho, x0, deg + 1), jet_order, j_max),
        GeodesicRoute::Arccos => {
            let chord = embedding_expansion(&stereographic(rho, x0, deg), n, jet_order, j_max);
            let t = expansion_trunc(n, jet_order, j_max);
            arccos_sq_series(&chord.scale_re(0.5 / (rho * rho)), &t, j_max / 2 + 1).scale_re(rho * rho)
        }
    };
    chart(n, &g, jet_order, j_max)
}

/// Chordal chart of `Sⁿ(ρ) ⊂ ℝⁿ⁺¹` in stereographic coordinates at `x₀`.
pub fn sphere_chordal_chart(rho: f64, x0: &[f64], jet_order: u32, j_max: usize) -> Result<TaylorModelChart, GeometryError> {
    embedded_chart(&stereographic(rho, x0, jet_order + j_max as u32), x0.len(), jet_order, j_max)
}

/// Chart of the graph `x ↦ (x, φ_1(x), …)` in `ℝ^{n+m}` with the chordal
/// distance; each `φ_l` is a polynomial in `n` variables centred at the base
/// point.
pub fn submanifold_chart(phis: &[Poly], dim: usize, jet_order: u32, j_max: usize) -> Result<TaylorModelChart, GeometryError> {
    let mut comps: Vec<Poly> = (0..dim).map(|i| Poly::var(2 * dim, i)).collect();
    for p in phis {
        if p.nvars() != dim {
            return Err(GeometryError::InvalidParams(format!("graph function must use {dim} variables")));
        }
        comps.push(lift(p, dim));
    }
    embedded_chart(&comps, dim, jet_order, j_max)
}

/// Metric-normal collar `F(s, t) = γ(s) + t N(s)`; `gamma` and `normal` are
/// `2n`-variable polynomials in the `n − 1` boundary variables, `normal` a
/// unit inward normal.
pub fn normal_collar(
    gamma: &[Poly],
    normal: &[Poly],
    dim: usize,
    jet_order: u32,
    j_max: usize,
) -> Result<TaylorModelChart, GeometryError> {
    let t = Trunc::total(jet_order + j_max as u32);
    let tv = Poly::var(2 * dim, dim - 1);
    let comps: Vec<Poly> = gamma.iter().zip(normal).map(|(g, nn)| g.add(&tv.mul(nn, &t))).collect();
    embedded_chart(&comps, dim, jet_order, j_max)
}

/// Metric-normal collar of the domain `{x_n > φ(x′)}` at `x′ = 0`.
pub fn graph_collar(phi: &Poly, jet_order: u32, j_max: usize) -> Result<TaylorModelChart, GeometryError> {
    let dim = phi.nvars() + 1;
    let t = Trunc::total(jet_order + j_max as u32);
    let p = lift(phi, dim);
    let grad: Vec<Poly> = (0..dim - 1).map(|i| p.deriv(i)).collect();
    let inv_len = sq_norm(&grad, &t).add(&Poly::real(2 * dim, 1.0)).powf(-0.5, &t);
    let mut gamma: Vec<Poly> = (0..dim - 1).map(|i| Poly::var(2 * dim, i)).collect();
    gamma.push(p);
    let mut normal: Vec<Poly> = grad.iter().map(|g| g.mul(&inv_len, &t).scale_re(-1.0)).collect();
    normal.push(inv_len);
    normal_collar(&gamma, &normal, dim, jet_order, j_max)
}

/// The boundary-straightening chart `F(x′, x_n) = (x′, x_n + φ(x′))`, which
/// is not metric-normal unless `∇φ` vanishes identically.
pub fn graph_chart(phi: &Poly, jet_order: u32, j_max: usize) -> Result<TaylorModelChart, GeometryError> {
    let dim = phi.nvars() + 1;
    let mut comps: Vec<Poly> = (0..dim - 1).map(|i| Poly::var(2 * dim, i)).collect();
    comps.push(Poly::var(2 * dim, dim - 1).add(&lift(phi, dim)));
    embedded_chart(&comps, dim, jet_order, j_max)
}

/// Collar of the disk of radius `r` at boundary angle `θ₀`, coordinates
/// `(θ − θ₀, t)`.
pub fn disk_collar(r: f64, theta0: f64, jet_order: u32, j_max: usize) -> Result<TaylorModelChart, GeometryError> {
    ellipse_collar(r, r, theta0, jet_order, j_max)
}

/// Collar of the ellipse `(a cos θ, b sin θ)` at `θ₀`, coordinates
/// `(θ − θ₀, t)`.
pub fn ellipse_collar(a: f64, b: f64, theta0: f64, jet_order: u32, j_max: usize) -> Result<TaylorModelChart, GeometryError> {
    let t = Trunc::total(jet_order + j_max as u32);
    let th = Poly::var(4, 0).add(&Poly::real(4, theta0));
    let (c, s) = (th.cos(&t), th.sin(&t));
    let bc = c.scale_re(b);
    let as_ = s.scale_re(a);
    let inv_len = bc.mul(&bc, &t).add(&as_.mul(&as_, &t)).powf(-0.5, &t);
    let gamma = [c.scale_re(a), s.scale_re(b)];
    let normal = [bc.mul(&inv_len, &t).scale_re(-1.0), as_.mul(&inv_len, &t).scale_re(-1.0)];
    normal_collar(&gamma, &normal, 2, jet_order, j_max)
}

/// Collar of the ball of radius `r` in `ℝ³` at the boundary point with unit
/// sphere stereographic coordinates `u₀`, coordinates `(u − u₀, t)`.
pub fn ball_collar(r: f64, u0: &[f64], jet_order: u32, j_max: usize) -> Result<TaylorModelChart, GeometryError> {
    let deg = jet_order + j_max as u32;
    // stereographic() works in 2·2 variables; widen to the 3-dimensional space
    let s: Vec<Poly> = stereographic(1.0, u0, deg).iter().map(|p| p.remap(6, &[0, 1, 3, 4])).collect();
    let gamma: Vec<Poly> = s.iter().map(|p| p.scale_re(r)).collect();
    let normal: Vec<Poly> = s.iter().map(|p| p.scale_re(-1.0)).collect();
    normal_collar(&gamma, &normal, 3, jet_order, j_max)
}
