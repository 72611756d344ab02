//! Errors raised while assembling expansion coefficients.

use maglab_boundary::BoundaryError;
use maglab_geometry::GeometryError;
use maglab_symbols::SymbolError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExpansionError {
    #[error("jet order {need} is beyond the supported maximum {max}")]
    JetShortfall { need: u32, max: u32 },
    #[error("orders above 2 are experimental; enable them explicitly")]
    Experimental,
    #[error("quadrature budget must be positive")]
    ZeroBudget,
    #[error("model `{0}` has no closed-form geometric integrals")]
    MissingClosedForm(String),
    #[error("leading coefficient vanishes")]
    VanishingLeading,
    #[error("non-finite density {value} at point {point:?}")]
    NonFinite { value: f64, point: Vec<f64> },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
}
