//! Global coefficients of the large-`R` magnitude expansion.
//!
//! The magnitude behaves as `Σ_k c_k R^{n−k}`, where each `c_k` integrates a
//! local interior density over `X` and a local boundary density over `∂X`.
//! The ground-state energy is its reciprocal, `Σ_k ε_k R^{−n−k}`.
//!
//! The power convention counts the `1/R` prefactor of the magnitude pairing:
//! the interval `[0, ℓ]` has magnitude exactly `1 + ℓR/2`, so `c = (ℓ/2, 1, 0)`.

pub mod assemble;
pub mod error;
pub mod series;

pub use assemble::{assemble_c, assemble_c_with, closed_form_c012, AssembleOptions, MAX_ORDER, STABLE_ORDER};
pub use error::ExpansionError;
pub use series::{energy_series, eval_series, formal_product, EnergySeries, ExpansionSeries};
