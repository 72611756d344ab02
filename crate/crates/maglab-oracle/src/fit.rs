//! Least-squares fits of numerical magnitudes to the large-`R` expansion.

use maglab_geometry::GeometryModel;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::OracleError;
use crate::linalg::Parallelism;
use crate::magnitude::{nystrom_magnitude_with, Scheme};

/// Largest accepted condition number of the design matrix.
pub const MAX_CONDITION: f64 = 1e12;

/// Fitted `ĉ_0..ĉ_K` with the data and diagnostics behind them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub dim: usize,
    pub scheme: Scheme,
    pub n: usize,
    pub r_grid: Vec<f64>,
    pub magnitudes: Vec<f64>,
    pub coefficients: Vec<f64>,
    /// `‖M − Σ ĉ_k R^{n−k}‖₂` over the grid.
    pub residual_norm: f64,
    /// 2-norm condition number of the matrix `(R_i^{−k})`.
    pub condition: f64,
}

/// `m` log-spaced radii from `a` to `b` inclusive.
pub fn log_grid(a: f64, b: f64, m: usize) -> Vec<f64> {
    match m {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..m).map(|i| a * (b / a).powf(i as f64 / (m - 1) as f64)).collect(),
    }
}

/// Fits `M(R) ≈ Σ_{k≤K} c_k R^{n−k}` by least squares on `M/R^n` against
/// powers of `1/R`.
pub fn fit_series(dim: usize, r_grid: &[f64], magnitudes: &[f64], k: usize) -> Result<(Vec<f64>, f64, f64), OracleError> {
    let need = k + 2;
    if r_grid.len() < need || magnitudes.len() != r_grid.len() {
        return Err(OracleError::GridTooShort { order: k, need, got: r_grid.len().min(magnitudes.len()) });
    }
    let m = r_grid.len();
    let design = DMatrix::from_fn(m, k + 1, |i, j| r_grid[i].powi(-(j as i32)));
    let rhs = DVector::from_fn(m, |i, _| magnitudes[i] / r_grid[i].powi(dim as i32));
    let svd = design.clone().svd(true, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > MAX_CONDITION {
        return Err(OracleError::IllConditioned(condition));
    }
    let c = svd.solve(&rhs, 0.0).map_err(|e| OracleError::InvalidSpace(e.to_string()))?;
    let coefficients: Vec<f64> = c.iter().copied().collect();
    let residual_norm = r_grid
        .iter()
        .zip(magnitudes)
        .map(|(r, mag)| {
            let model: f64 = coefficients.iter().enumerate().map(|(j, cj)| cj * r.powi(dim as i32 - j as i32)).sum();
            (mag - model).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    Ok((coefficients, residual_norm, condition))
}

/// [`fit_coefficients_with`] with the `Auto` scheme.
pub fn fit_coefficients(model: &dyn GeometryModel, r_grid: &[f64], n: usize, k: usize) -> Result<FitReport, OracleError> {
    fit_coefficients_with(model, r_grid, n, k, Scheme::Auto, Parallelism::default())
}

/// Computes the magnitude at each radius and fits `ĉ_0..ĉ_K`.
pub fn fit_coefficients_with(
    model: &dyn GeometryModel,
    r_grid: &[f64],
    n: usize,
    k: usize,
    scheme: Scheme,
    par: Parallelism,
) -> Result<FitReport, OracleError> {
    if r_grid.len() < k + 2 {
        return Err(OracleError::GridTooShort { order: k, need: k + 2, got: r_grid.len() });
    }
    let scheme = scheme.resolve(model);
    let magnitudes = r_grid
        .iter()
        .map(|&r| {
            let m = nystrom_magnitude_with(model, n, r, scheme, par)?;
            log::info!("{} R = {r}: M = {m}", model.name());
            Ok(m)
        })
        .collect::<Result<Vec<f64>, OracleError>>()?;
    let (coefficients, residual_norm, condition) = fit_series(model.dim(), r_grid, &magnitudes, k)?;
    Ok(FitReport {
        dim: model.dim(),
        scheme,
        n,
        r_grid: r_grid.to_vec(),
        magnitudes,
        coefficients,
        residual_norm,
        condition,
    })
}
