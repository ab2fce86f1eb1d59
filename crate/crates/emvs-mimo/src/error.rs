//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by tensor algebra, synthesis, decomposition and the
/// benchmark harness.
#[derive(Debug, Error)]
pub enum Error {
    /// Operand shapes are incompatible.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An argument is outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input contains non-finite entries.
    #[error("non-finite input: {0}")]
    NonFinite(String),

    /// The requested rank fails the uniqueness/identifiability bounds.
    #[error("identifiability violation: {0}")]
    Identifiability(String),

    /// Geometry or response degenerate beyond recovery.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// An iterative solver produced NaN or otherwise broke down.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Too many Monte-Carlo trials failed at one sweep point.
    #[error("sweep failure at snr {snr_db} dB, method {method}: {failed}/{total} trials failed")]
    SweepFailure {
        snr_db: f64,
        method: String,
        failed: usize,
        total: usize,
    },

    /// Error tagged with the pipeline stage that produced it.
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Wrap an error with the pipeline stage it came from.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
