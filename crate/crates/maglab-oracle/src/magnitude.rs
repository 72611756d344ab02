//! Magnitude of finite spaces and of discretized model spaces.

use std::f64::consts::PI;

use maglab_geometry::{gauss_legendre, GeometryModel};
use serde::{Deserialize, Serialize};

use crate::error::OracleError;
use crate::linalg::{for_rows, spd_solve, sym_matvec, Parallelism};
use crate::space::FiniteSpace;

/// Largest accepted solver residual.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Discretization used by [`nystrom_magnitude_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// The magnitude of the finite set of `N` model sample points. A lower
    /// bound that converges slowly once `R h ≳ 1` for node spacing `h`.
    Points,
    /// Nyström with the kernel singularity subtracted on the diagonal, so
    /// that constants are integrated exactly. Needs closed-form kernel
    /// integrals; exact for homogeneous spaces, unreliable at boundaries.
    Corrected,
    /// Galerkin on `N` uniform measures on concentric spheres of a Euclidean
    /// ball. Still a lower bound, with no tangential discretization error.
    Rings,
    /// `Rings` for balls, else `Corrected` when available, else `Points`.
    #[default]
    Auto,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Points => "points",
            Scheme::Corrected => "corrected",
            Scheme::Rings => "rings",
            Scheme::Auto => "auto",
        }
    }

    /// The concrete scheme `Auto` picks for a model.
    pub fn resolve(self, model: &dyn GeometryModel) -> Scheme {
        if self != Scheme::Auto {
            return self;
        }
        let boundaryless = model.boundary_quadrature(1).is_empty();
        let p = model.sample(1).points.remove(0);
        if model.radial_ball().is_some() {
            Scheme::Rings
        } else if boundaryless && model.kernel_integral(&p, 1.0).is_some() {
            Scheme::Corrected
        } else {
            Scheme::Points
        }
    }
}

fn check_scale(r: f64) -> Result<(), OracleError> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(OracleError::InvalidScale(r))
    }
}

fn check_residual(resid: f64) -> Result<(), OracleError> {
    if resid < RESIDUAL_TOL {
        Ok(())
    } else {
        Err(OracleError::Residual(resid))
    }
}

/// The magnitude of a finite space at scale `R`.
///
/// With `K_ij = e^{−R d_ij} w_j`, solving `K u = 1` and returning `Σ w_i u_i`
/// is the same as solving `E v = 1` for the symmetric `E_ij = e^{−R d_ij}`
/// and returning `Σ v_i`; the weights cancel, and the symmetric form is
/// solved by Cholesky.
pub fn finite_magnitude(space: &FiniteSpace, r: f64) -> Result<f64, OracleError> {
    finite_magnitude_with(space, r, Parallelism::default())
}

pub fn finite_magnitude_with(space: &FiniteSpace, r: f64, par: Parallelism) -> Result<f64, OracleError> {
    check_scale(r)?;
    let n = space.len();
    if n == 0 {
        return Ok(0.0);
    }
    let ones = vec![1.0; n];
    let (v, resid) = spd_solve(space.kernel(r, par), n, &ones, par, |x| space.kernel_apply(r, x, par))?;
    check_residual(resid)?;
    Ok(v.iter().sum())
}

/// [`nystrom_magnitude_with`] using the best scheme the model supports.
pub fn nystrom_magnitude(model: &dyn GeometryModel, n: usize, r: f64) -> Result<f64, OracleError> {
    nystrom_magnitude_with(model, n, r, Scheme::Auto, Parallelism::default())
}

/// Magnitude of a model at scale `R` with `n` degrees of freedom.
pub fn nystrom_magnitude_with(
    model: &dyn GeometryModel,
    n: usize,
    r: f64,
    scheme: Scheme,
    par: Parallelism,
) -> Result<f64, OracleError> {
    check_scale(r)?;
    if n == 0 {
        return Err(OracleError::ZeroBudget);
    }
    match scheme.resolve(model) {
        Scheme::Points => finite_magnitude_with(&FiniteSpace::from_model(model, n, par)?, r, par),
        Scheme::Corrected => corrected_magnitude(model, n, r, par),
        Scheme::Rings => {
            let (dim, rho) = model
                .radial_ball()
                .ok_or_else(|| OracleError::Unsupported { scheme: "rings", model: model.name().into() })?;
            ring_magnitude(dim, rho, n, r, par)
        }
        Scheme::Auto => unreachable!("resolved above"),
    }
}

/// Singularity-subtracted Nyström: row `i` of `∫ e^{−R d(x_i,y)} u(y) dy`
/// becomes `Σ_{j≠i} w_j k_ij u_j + u_i (I_i − Σ_{j≠i} w_j k_ij)` with
/// `I_i = ∫ e^{−R d(x_i,y)} dy`. Scaling by `√w` makes it symmetric.
fn corrected_magnitude(model: &dyn GeometryModel, n: usize, r: f64, par: Parallelism) -> Result<f64, OracleError> {
    let unsupported = || OracleError::Unsupported { scheme: "corrected", model: model.name().into() };
    let space = FiniteSpace::from_model(model, n, par)?;
    let n = space.len();
    let integrals = space
        .points
        .iter()
        .map(|p| model.kernel_integral(p, r).ok_or_else(unsupported))
        .collect::<Result<Vec<f64>, _>>()?;
    let sw: Vec<f64> = space.weights.iter().map(|w| w.sqrt()).collect();
    let mut s = space.kernel(r, par);
    for_rows(&mut s, n, 0, par, |i, row| {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| space.weights[j] * row[j]).sum();
        for (j, v) in row.iter_mut().enumerate() {
            *v *= sw[i] * sw[j];
        }
        row[i] = integrals[i] - off;
    });
    let copy = s.clone();
    let (z, resid) = spd_solve(s, n, &sw, par, |x| sym_matvec(&copy, n, x, par))?;
    check_residual(resid)?;
    Ok(z.iter().zip(&sw).map(|(zi, wi)| zi * wi).sum())
}

/// `⟨μ_r, e^{−R|·−·|} μ_s⟩` for the uniform probability measures `μ` on the
/// spheres of radii `r`, `s` about the origin of `ℝ^dim`.
pub fn shell_kernel(dim: usize, r: f64, s: f64, scale: f64, nodes: &(Vec<f64>, Vec<f64>)) -> f64 {
    match dim {
        1 => 0.5 * ((-scale * (r - s).abs()).exp() + (-scale * (r + s)).exp()),
        2 => {
            // (1/π) ∫_0^π exp(−R √((r−s)² + 4rs sin²(φ/2))) dφ on panels refined toward φ = 0
            let (x, w) = nodes;
            let dist = |phi: f64| ((r - s).powi(2) + 4.0 * r * s * (0.5 * phi).sin().powi(2)).sqrt();
            // below φ ~ |r−s|/√(rs) the integrand is flat, so one panel covers it
            let flat = 0.25 * (r - s).abs() / (r * s).sqrt();
            let finest = (1..=RING_PANELS).rev().find(|&k| PI / f64::from(1u32 << k) >= flat).unwrap_or(0);
            let mut total = 0.0;
            let mut lo = 0.0;
            for k in (0..=finest).rev() {
                let hi = PI / f64::from(1u32 << k);
                if scale * dist(lo) > 50.0 {
                    break;
                }
                let (c, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
                total += h * x.iter().zip(w).map(|(t, wt)| wt * (-scale * dist(c + h * t)).exp()).sum::<f64>();
                lo = hi;
            }
            total / PI
        }
        3 => {
            // (1/(2rs)) ∫_{|r−s|}^{r+s} t e^{−Rt} dt
            let (a, b) = ((r - s).abs(), r + s);
            let primitive = |t: f64| (-scale * t).exp() * (1.0 + scale * t);
            let integral = if scale * (b - a) < 0.5 {
                let (x, w) = nodes;
                let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
                h * x.iter().zip(w).map(|(t, wt)| wt * (c + h * t) * (-scale * (c + h * t)).exp()).sum::<f64>()
            } else {
                (primitive(a) - primitive(b)) / (scale * scale)
            };
            integral / (2.0 * r * s)
        }
        _ => panic!("shell kernel supports dimensions 1 to 3"),
    }
}

const RING_PANELS: u32 = 14;
const RING_NODES: usize = 16;

/// Galerkin magnitude of the ball of radius `rho` in `ℝ^dim` on `n`
/// uniform spheres at radii `ρ i/n`, `i = 1..=n`.
pub fn ring_magnitude(dim: usize, rho: f64, n: usize, r: f64, par: Parallelism) -> Result<f64, OracleError> {
    check_scale(r)?;
    if !(1..=3).contains(&dim) {
        return Err(OracleError::Unsupported { scheme: "rings", model: format!("ball in dimension {dim}") });
    }
    let radii: Vec<f64> = (1..=n).map(|i| rho * i as f64 / n as f64).collect();
    let nodes = gauss_legendre(RING_NODES);
    let mut a = vec![0.0; n * n];
    for_rows(&mut a, n, 0, par, |i, row| {
        for j in i..n {
            row[j] = shell_kernel(dim, radii[i], radii[j], r, &nodes);
        }
    });
    for i in 0..n {
        for j in 0..i {
            a[i * n + j] = a[j * n + i];
        }
    }
    let copy = a.clone();
    let ones = vec![1.0; n];
    let (v, resid) = spd_solve(a, n, &ones, par, |x| sym_matvec(&copy, n, x, par))?;
    check_residual(resid)?;
    Ok(v.iter().sum())
}
