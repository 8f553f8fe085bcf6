use thiserror::Error;

/// Everything that can go wrong while building or querying a σ-space.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),

    #[error("missing σ entry for ordered pair ({0}, {1})")]
    MissingEntry(String, String),

    #[error("more than one σ entry for ordered pair ({0}, {1})")]
    DuplicateEntry(String, String),

    #[error("σ({0}, {0}) = {1} is not zero within tolerance")]
    NonzeroDiagonal(String, f64),

    #[error("σ({0}, {1}) = {2} is not a finite real")]
    NonFiniteValue(String, String, f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("the point set is empty")]
    EmptySpace,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("invalid tolerance {0}: must be a finite non-negative real")]
    InvalidTolerance(f64),

    #[error("coefficients must be finite (got α={0}, β={1})")]
    NonFiniteCoefficient(f64, f64),

    #[error("cannot chain ({0}, {1}) with ({2}, {3}): end of the first is not the origin of the second")]
    ChainMismatch(String, String, String, String),

    #[error("no always-defined case applies to this combination")]
    NotGuaranteed,

    #[error("space has {size} points, search limit is {limit}")]
    SearchLimitExceeded { size: usize, limit: usize },

    #[error("space has {size} points, oracle limit is {limit}")]
    OracleLimitExceeded { size: usize, limit: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
