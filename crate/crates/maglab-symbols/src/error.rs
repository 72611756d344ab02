use maglab_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SymbolError {
    #[error("chart lacks Taylor coefficient C^{0}")]
    MissingTaylor(usize),
    #[error("chart jets reach order {have}, order {need} is required")]
    JetShortfall { have: u32, need: u32 },
    #[error("metric is not positive definite at the base point")]
    NotPositiveDefinite,
    #[error("logarithmic terms failed to cancel (residue {0:e})")]
    LogResidue(f64),
    #[error("{0}")]
    OutOfDomain(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}
