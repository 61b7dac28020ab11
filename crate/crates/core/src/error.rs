use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid argument or configuration.
    #[error("invalid input: {0}")]
    Input(String),

    /// Not enough data points to carry out the computation.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// The sample is degenerate for the requested estimator
    /// (e.g. every retained value equals the lower cutoff).
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    /// A closed-form expression diverges for the given parameters.
    #[error("divergent quantity: {0}")]
    Divergence(String),

    /// A trained model violates its own ordering invariants, which
    /// signals that the data does not satisfy the method assumptions.
    #[error("model consistency: {0}")]
    ModelConsistency(String),

    /// Correlation is undefined (all-tied ranks).
    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
