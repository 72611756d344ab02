//! Wiener–Hopf factorization of boundary symbols.
//!
//! Near a boundary point, in a collar chart whose last coordinate is
//! transversal, `R² + g(x)(ξ,ξ)` factors as `h₀ (ξ_n − h_+)(ξ_n − h_−)`.
//! The full symbol `q` then splits as `q ~ q_− # q_+` with factors that are
//! holomorphic in opposite half planes of `ξ_n`. The inverse factors `w_±`
//! determine the boundary densities `B_{d²,k}` of the magnitude expansion.
//!
//! All symbols are evaluated at `R = 1` and carried as jets in `(y, η)`
//! about one base point and one tangential covector `ξ′₀`.

pub mod density;
pub mod error;
pub mod factor;
pub mod roots;
pub mod symbol;

pub use density::{
    boundary_density_b, boundary_density_b_chart, boundary_density_b_literal, boundary_symbols_json,
    c3_contractions, empirical_alpha, evaluated_symbol_table, TableEntry,
};
pub use error::BoundaryError;
pub use factor::{factorize_boundary_symbol, graded_product, invert_factor, to_root_symbol, BoundaryEngine};
pub use roots::{split_metric, RootJet, Sign};
pub use symbol::{partial_fraction, partial_fraction_xi, RootKey, RootSymbol};
