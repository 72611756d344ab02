//! Command errors and their exit codes.

use maglab_boundary::BoundaryError;
use maglab_expansion::ExpansionError;
use maglab_geometry::GeometryError;
use maglab_oracle::OracleError;
use maglab_symbols::SymbolError;
use thiserror::Error;

/// Failures of a command, each tied to a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, geometry specs or parameters.
    #[error("usage: {0}")]
    Usage(String),
    /// An engine refused the input or failed an internal check.
    #[error("engine: {0}")]
    Engine(String),
    /// The run completed but a compared quantity is out of tolerance.
    #[error("tolerance: {0}")]
    Tolerance(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// `2` usage, `3` engine assertion, `4` tolerance failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Engine(_) | CliError::Io(_) => 3,
            CliError::Tolerance(_) => 4,
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::InvalidParams(_) | GeometryError::UnknownModel(_) => CliError::Usage(e.to_string()),
            other => CliError::Engine(other.to_string()),
        }
    }
}

impl From<ExpansionError> for CliError {
    fn from(e: ExpansionError) -> Self {
        match e {
            ExpansionError::Geometry(g) => g.into(),
            ExpansionError::JetShortfall { .. } | ExpansionError::Experimental | ExpansionError::ZeroBudget => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Engine(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::GridTooShort { .. }
            | OracleError::InvalidScale(_)
            | OracleError::ZeroBudget
            | OracleError::Unsupported { .. } => CliError::Usage(e.to_string()),
            other => CliError::Engine(other.to_string()),
        }
    }
}

impl From<SymbolError> for CliError {
    fn from(e: SymbolError) -> Self {
        CliError::Engine(e.to_string())
    }
}

impl From<BoundaryError> for CliError {
    fn from(e: BoundaryError) -> Self {
        CliError::Engine(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Engine(e.to_string())
    }
}
