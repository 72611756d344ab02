use maglab_symbols::SymbolError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoundaryError {
    #[error("degenerate boundary metric: {0}")]
    DegenerateMetric(String),
    #[error("roots h_+ and h_- coincide at the base point")]
    CoincidentRoots,
    #[error("exponent ({0}/2, {1}/2) is not integral after normalisation")]
    NonIntegralExponent(i32, i32),
    #[error("partial fractions left a polynomial part of size {0:e}")]
    PolynomialPart(f64),
    #[error("factorization residual {0:e} exceeds tolerance")]
    Residual(f64),
    #[error("boundary density has imaginary part {0:e}")]
    Branch(f64),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}
