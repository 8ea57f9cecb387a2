use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension n must be at least 1")]
    ZeroDimension,

    #[error("Sp(n) requires an even dimension, got n = {0}")]
    OddSymplecticDimension(usize),

    #[error("index component {value} outside 1..={n}")]
    IndexOutOfRange { value: usize, n: usize },

    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("shape mismatch: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("no ({order})\\{n}-diagrams exist: need n <= l+k and matching parity")]
    NoGroodDiagrams { order: usize, n: usize },

    #[error("diagram has {got} free vertices but the target dimension is {expected}")]
    FreeVertexMismatch { expected: usize, got: usize },

    #[error("cannot parse diagram `{input}`: {reason}")]
    DiagramParse { input: String, reason: String },

    #[error("feature dimensions must be positive (d_k = {d_k}, d_l = {d_l})")]
    InvalidFeatureDims { d_k: usize, d_l: usize },

    #[error("spanning set already carries feature dimensions")]
    FeaturesAlreadyAttached,

    #[error("a local spanning set needs at least one factor")]
    NoFactors,

    #[error("weight vector has length {got}, spanning set has {expected} elements")]
    WeightCount { expected: usize, got: usize },

    #[error("unknown activation `{0}`")]
    UnknownActivation(String),

    #[error("unknown group `{0}` (expected O, SO or Sp)")]
    UnknownGroup(String),

    #[error("oracle system has {size} unknowns, above the limit of {limit}")]
    OracleTooLarge { size: usize, limit: usize },

    #[error("group element fails membership check for {group}: residual {residual:e}")]
    NotInGroup { group: String, residual: f64 },

    #[error("unsupported export format version {0}")]
    UnsupportedFormat(u32),

    #[error("invalid export file: {0}")]
    InvalidExport(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
