use thiserror::Error;

/// Errors produced anywhere in `jsr-core`.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimension must be at least 1")]
    ZeroDimension,
    #[error("matrix of dimension {dim} needs {expected} entries, got {found}")]
    EntryCount {
        dim: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite matrix entry at row {row}, column {col}")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("matrix set is empty")]
    EmptySet,
    #[error("matrix {index} has dimension {found}, expected {expected}")]
    MixedDimensions {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("every matrix in the set is zero")]
    AllZero,
    #[error("dimension {0} is not supported (only 2x2 matrices are)")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("node count {0} is invalid (must be even and at least 8)")]
    InvalidNodeCount(usize),
    #[error("profile value {value} at node {index} is not a positive finite number")]
    InvalidProfileValue { index: usize, value: f64 },
    #[error("node counts differ: {left} vs {right}")]
    NodeCountMismatch { left: usize, right: usize },
    #[error("vector must be nonzero and finite")]
    ZeroVector,
    #[error("scaling factor gamma = {0} must be positive and finite")]
    InvalidGamma(f64),
    #[error("relaxation parameter lambda = {0} must lie in (0, 1)")]
    InvalidLambda(f64),
    #[error("averaging inputs must satisfy 0 < t <= s, got ({0}, {1})")]
    InvalidAveragingInputs(f64, f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("reference vector ({0}, {1}) does not point along a grid node")]
    OffGridReference(f64, f64),
    #[error("normalization drifted: reference norm is {0}, expected 1")]
    NormalizationDrift(f64),

    #[error("enumeration needs {required} products, cap is {cap}")]
    BudgetExceeded { required: u128, cap: u128 },
    #[error("product depth must be at least 1")]
    ZeroDepth,

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
