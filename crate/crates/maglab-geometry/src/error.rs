//! Errors raised while building models and charts.

use maglab_symbols::SymbolError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("insufficient jets: {0}")]
    InsufficientJets(String),
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("model `{0}` has no Taylor charts (oracle only)")]
    NoSymbolicPath(String),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
