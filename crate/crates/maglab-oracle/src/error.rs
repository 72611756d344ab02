//! Errors raised by the numerical oracle.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("kernel is not positive definite: pivot {pivot:e} at row {index}; run pd-probe to scan R")]
    NotPositiveDefinite { index: usize, pivot: f64 },
    #[error("solver residual {0:e} exceeds 1e-8")]
    Residual(f64),
    #[error("design matrix condition {0:e} exceeds 1e12")]
    IllConditioned(f64),
    #[error("fit of order {order} needs at least {need} radii, got {got}")]
    GridTooShort { order: usize, need: usize, got: usize },
    #[error("invalid finite space: {0}")]
    InvalidSpace(String),
    #[error("scheme `{scheme}` is unavailable for model `{model}`")]
    Unsupported { scheme: &'static str, model: String },
    #[error("R must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("sample budget must be positive")]
    ZeroBudget,
}
