//! Magnitude and energy series and their formal algebra.

use serde::{Deserialize, Serialize};

use crate::error::ExpansionError;

/// `magnitude(R) ≈ Σ_k c_k R^{n−k}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionSeries {
    pub dim: usize,
    pub coefficients: Vec<f64>,
}

/// `energy(R) ≈ Σ_k ε_k R^{−n−k}`, the reciprocal of the magnitude.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergySeries {
    pub dim: usize,
    pub coefficients: Vec<f64>,
}

impl ExpansionSeries {
    pub fn new(dim: usize, coefficients: Vec<f64>) -> Self {
        ExpansionSeries { dim, coefficients }
    }

    /// Highest order `K` carried.
    pub fn order(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn eval(&self, r: f64) -> f64 {
        eval_series(self, r)
    }
}

impl EnergySeries {
    /// `Σ_k ε_k R^{−n−k}`.
    pub fn eval(&self, r: f64) -> f64 {
        let lead = r.powi(-(self.dim as i32));
        lead * horner(&self.coefficients, 1.0 / r)
    }
}

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

/// `Σ_k c_k R^{n−k}`. Returns `NaN` for `R ≤ 0`.
pub fn eval_series(s: &ExpansionSeries, r: f64) -> f64 {
    if r <= 0.0 || r.is_nan() {
        return f64::NAN;
    }
    r.powi(s.dim as i32) * horner(&s.coefficients, 1.0 / r)
}

/// The formal reciprocal: `ε_0 = 1/c_0`, `ε_k = −(1/c_0) Σ_{j=1}^k c_j ε_{k−j}`.
pub fn energy_series(c: &ExpansionSeries) -> Result<EnergySeries, ExpansionError> {
    let c0 = *c.coefficients.first().ok_or(ExpansionError::VanishingLeading)?;
    if c0 == 0.0 || !c0.is_finite() {
        return Err(ExpansionError::VanishingLeading);
    }
    let mut eps: Vec<f64> = Vec::with_capacity(c.coefficients.len());
    for k in 0..c.coefficients.len() {
        if k == 0 {
            eps.push(1.0 / c0);
            continue;
        }
        let s: f64 = (1..=k).map(|j| c.coefficients[j] * eps[k - j]).sum();
        eps.push(-s / c0);
    }
    Ok(EnergySeries { dim: c.dim, coefficients: eps })
}

/// Coefficients of the formal product `Σ c_k t^k · Σ ε_k t^k` through the
/// shorter of the two orders; equals `(1, 0, 0, …)` for a reciprocal pair.
pub fn formal_product(c: &ExpansionSeries, e: &EnergySeries) -> Vec<f64> {
    let len = c.coefficients.len().min(e.coefficients.len());
    (0..len).map(|k| (0..=k).map(|j| c.coefficients[j] * e.coefficients[k - j]).sum()).collect()
}
