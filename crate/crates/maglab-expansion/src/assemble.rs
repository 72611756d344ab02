//! Quadrature of interior and boundary densities.

use maglab_boundary::boundary_density_b;
use maglab_geometry::{pairwise_sum, GeometryModel, Quadrature};
use maglab_symbols::{eval_a_j0, n_fact_omega};

use crate::error::ExpansionError;
use crate::series::ExpansionSeries;

/// Highest order the pipeline supports.
pub const MAX_ORDER: u32 = 4;

/// Highest order with closed-form cross-checks; beyond it `experimental`
/// must be set.
pub const STABLE_ORDER: u32 = 2;

/// Quadrature budgets and gating for [`assemble_c_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AssembleOptions {
    pub interior_budget: usize,
    pub boundary_budget: usize,
    /// Permits `K` up to [`MAX_ORDER`].
    pub experimental: bool,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        AssembleOptions { interior_budget: 400, boundary_budget: 64, experimental: false }
    }
}

type Densities = Result<Vec<f64>, ExpansionError>;

#[cfg(feature = "parallel")]
fn map_points<F>(points: &[Vec<f64>], f: F) -> Result<Vec<Vec<f64>>, ExpansionError>
where
    F: Fn(&[f64]) -> Densities + Sync + Send,
{
    use rayon::prelude::*;
    points.par_iter().map(|p| f(p)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_points<F>(points: &[Vec<f64>], f: F) -> Result<Vec<Vec<f64>>, ExpansionError>
where
    F: Fn(&[f64]) -> Densities,
{
    points.iter().map(|p| f(p)).collect()
}

/// `∫ f` for a vector-valued density; a homogeneous model evaluates `f` once.
fn integrate<F>(quad: &Quadrature, len: usize, homogeneous: bool, f: F) -> Densities
where
    F: Fn(&[f64]) -> Densities + Sync + Send,
{
    if quad.is_empty() {
        return Ok(vec![0.0; len]);
    }
    if homogeneous {
        let d = f(&quad.points[0])?;
        let w = quad.total_weight();
        return Ok(d.iter().map(|x| x * w).collect());
    }
    let values = map_points(&quad.points, f)?;
    Ok((0..len)
        .map(|k| {
            let terms: Vec<f64> = values.iter().zip(&quad.weights).map(|(v, w)| v[k] * w).collect();
            pairwise_sum(&terms)
        })
        .collect())
}

fn finite(values: Vec<f64>, p: &[f64]) -> Densities {
    match values.iter().find(|v| !v.is_finite()) {
        Some(&value) => Err(ExpansionError::NonFinite { value, point: p.to_vec() }),
        None => Ok(values),
    }
}

/// [`assemble_c_with`] under the default options.
pub fn assemble_c(model: &dyn GeometryModel, k: u32) -> Result<ExpansionSeries, ExpansionError> {
    assemble_c_with(model, k, &AssembleOptions::default())
}

/// `c_k = ∫_X a_{k,0} dV + ∫_{∂X} B_k dA` for `k = 0..=K`.
///
/// Interior densities of odd order vanish identically and are skipped. Each
/// boundary point gets its own collar chart.
pub fn assemble_c_with(
    model: &dyn GeometryModel,
    k: u32,
    opts: &AssembleOptions,
) -> Result<ExpansionSeries, ExpansionError> {
    if k > MAX_ORDER {
        return Err(ExpansionError::JetShortfall { need: k, max: MAX_ORDER });
    }
    if k > STABLE_ORDER {
        if !opts.experimental {
            return Err(ExpansionError::Experimental);
        }
        log::warn!("order {k} is experimental: no closed form pins c_3 or c_4");
    }
    if opts.interior_budget == 0 || opts.boundary_budget == 0 {
        return Err(ExpansionError::ZeroBudget);
    }
    let len = k as usize + 1;
    let (hom_interior, hom_boundary) = model.homogeneous();
    let interior_quad = model.interior_quadrature(opts.interior_budget);
    let interior = integrate(&interior_quad, len, hom_interior, |p| {
        let chart = model.interior_chart(p, k, k as usize + 2)?;
        let values = (0..=k)
            .map(|j| if j % 2 == 1 { Ok(0.0) } else { eval_a_j0(&chart, j) })
            .collect::<Result<Vec<f64>, _>>()?;
        finite(values, p)
    })?;
    let boundary_quad = model.boundary_quadrature(opts.boundary_budget);
    let boundary = integrate(&boundary_quad, len, hom_boundary, |p| {
        let Some(chart) = model.boundary_collar(p, k.max(1), k as usize + 2)? else {
            return Ok(vec![0.0; len]);
        };
        let mut values = vec![0.0];
        for j in 1..=k {
            values.push(boundary_density_b(&chart, j)?);
        }
        finite(values, p)
    })?;
    let coefficients = interior.iter().zip(&boundary).map(|(a, b)| a + b).collect();
    Ok(ExpansionSeries::new(model.dim(), coefficients))
}

/// `c_0 = vol/n!ω_n`, `c_1 = (n+1) vol(∂X)/(2 n!ω_n)` and
/// `c_2 = (n+1)/(6 n!ω_n) ∫s + (n−1)(n+1)²/(8 n!ω_n) ∫H`, straight from the
/// model's geometric integrals.
pub fn closed_form_c012(model: &dyn GeometryModel) -> Result<ExpansionSeries, ExpansionError> {
    let cf = model.closed_form().ok_or_else(|| ExpansionError::MissingClosedForm(model.name().to_string()))?;
    let n = model.dim() as f64;
    let nw = n_fact_omega(model.dim());
    let c0 = cf.vol / nw;
    let c1 = (n + 1.0) * cf.vol_boundary / (2.0 * nw);
    let c2 = (n + 1.0) / (6.0 * nw) * cf.integral_s + (n - 1.0) * (n + 1.0).powi(2) / (8.0 * nw) * cf.integral_h;
    Ok(ExpansionSeries::new(model.dim(), vec![c0, c1, c2]))
}
