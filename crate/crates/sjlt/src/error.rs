use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Vector or matrix shapes do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A code is structurally incompatible with the requested sketch shape.
    #[error("code mismatch: {0}")]
    CodeMismatch(String),

    /// The sketched system has a numerically rank-deficient design matrix.
    #[error("rank-deficient system: column {column} has negligible pivot {pivot:e}")]
    RankDeficient { column: usize, pivot: f64 },

    /// Power iteration failed to stabilize; carries the best estimate seen.
    #[error("operator norm estimate did not converge (best estimate {best})")]
    NonConvergence { best: f64 },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
