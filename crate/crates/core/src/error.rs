/// Errors shared by every module of the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A requested target lies outside the attainable region (for
    /// example a guess probability above the noiseless ceiling).
    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The truncated Fock representation would drop more norm than the
    /// caller allows.
    #[error("truncation tail bound {bound:.3e} exceeds tolerance {tol:.3e}")]
    TruncationTail { bound: f64, tol: f64 },

    /// The position grid cannot resolve the state's momentum content.
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("unsupported envelope: {0}")]
    UnsupportedEnvelope(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
