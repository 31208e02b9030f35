use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("not a square in Q(sqrt2): {0}")]
    NotASquare(String),
    #[error("degenerate metric")]
    DegenerateMetric,
    #[error("isotropic vector at position {position}: self-product is zero")]
    IsotropicVector { position: usize },
    #[error("determinant {det} is not 1")]
    NotUnimodular { det: f64 },
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("shape violation: {0}")]
    Shape(String),
    #[error("preset has no matrix realization: {0}")]
    MissingRealization(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("finite-difference step {h} too small: halving disagreement {disagreement:e}")]
    StepTooSmall { h: f64, disagreement: f64 },
    #[error("finite-difference step {h} too large: halving disagreement {disagreement:e}")]
    StepTooLarge { h: f64, disagreement: f64 },
}
