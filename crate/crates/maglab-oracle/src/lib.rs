//! Numerical magnitude by dense linear algebra.
//!
//! The magnitude of a finite metric space at scale `R` is `Σ v_i` where
//! `(e^{−R d_ij}) v = 1`. Discretizing a model space gives lower bounds on
//! its magnitude that converge as the discretization refines; fitting them
//! over a range of `R` recovers the expansion coefficients independently of
//! the symbolic pipeline.
//!
//! Kernel assembly and the Cholesky trailing updates run on the rayon pool
//! with the `parallel` feature (on by default) and sequentially otherwise.

pub mod error;
pub mod fit;
pub mod linalg;
pub mod magnitude;
pub mod probe;
pub mod space;

pub use error::OracleError;
pub use fit::{fit_coefficients, fit_coefficients_with, fit_series, log_grid, FitReport, MAX_CONDITION};
pub use linalg::{cholesky_in_place, cholesky_solve, spd_solve, Parallelism};
pub use magnitude::{
    finite_magnitude, finite_magnitude_with, nystrom_magnitude, nystrom_magnitude_with, ring_magnitude, shell_kernel,
    Scheme, RESIDUAL_TOL,
};
pub use probe::{pd_probe, pd_probe_with, PdEntry};
pub use space::FiniteSpace;
