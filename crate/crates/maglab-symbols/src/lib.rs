//! Interior symbol calculus with parameter.
//!
//! A [`TaylorModelChart`] holds the Taylor expansion of a squared distance
//! near the diagonal at one point. From it the engine builds the homogeneous
//! terms `q_j` of the full symbol of the localized kernel operator, the
//! parametrix terms `a_j`, and their diagonal values `a_{j,0}(x,1)`, which are
//! the interior densities of the magnitude expansion.

pub mod chart;
pub mod engine;
pub mod error;
pub mod symbol;

pub use chart::{random_chart, TaylorModelChart};
pub use engine::{
    build_parametrix, build_q, eval_a_j0, eval_a_j0_via_parametrix, identity_residual,
    leibniz_compose, multi_indices, n_fact_omega, scalar_curvature_invariant, SymbolEngine,
};
pub use error::SymbolError;
pub use symbol::{InteriorSymbol, SymbolMetric, TermKey};
