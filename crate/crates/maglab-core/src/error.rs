use thiserror::Error;

/// Errors raised by the exact arithmetic and tensor layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("cannot add π-graded values of different grades ({0} vs {1})")]
    GradeMismatch(i32, i32),
    #[error("omega(n) is undefined for negative even n = {0}")]
    OmegaPole(i64),
    #[error("gamma function pole at {0}/2")]
    GammaPole(i64),
    #[error("invalid argument: {0}")]
    Invalid(String),
}
