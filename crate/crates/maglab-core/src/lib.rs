//! Shared substrate for the magnitude expansion engines.
//!
//! Exact π-graded rationals for the universal constants, the index sets
//! `I_j` that organise the symbol expansion, symmetric tensors, and a sparse
//! truncated polynomial type used for every jet computation downstream.

pub mod coeffs;
pub mod error;
pub mod index_set;
pub mod pigraded;
pub mod poly;
pub mod tensor;

pub use coeffs::{
    gamma_half, gamma_identity_check, omega, frak_c, pochhammer_k, symbol_coefficient,
    SymbolCoefficient,
};
pub use error::CoreError;
pub use index_set::{index_set_I, MultiIndexGamma};
pub use pigraded::PiGradedRational;
pub use poly::{Mono, Poly, Trunc, C64, MAXV};
pub use tensor::{JetTensor, SymTensor};
