use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{0} is not a sublattice of {1}")]
    NotSublattice(String, String),
    #[error("grading violation: {0}")]
    GradingViolation(String),
    #[error("fiber is unbounded")]
    UnboundedFiber,
    #[error("fiber sweep exceeded cardinality guard of {guard} points")]
    CardinalityGuard { guard: usize },
    #[error("facet description unavailable: {0}")]
    FacetsUnavailable(String),
    #[error("semigroup hole detected at {0}; projected-fiber description refused")]
    HoleDetected(String),
    #[error("preorders fail the compatibility condition on sampled pair {0}")]
    IncompatiblePreorders(String),
    #[error("move is not in the image of the grading map")]
    MoveNotInImage,
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("oracle rejected input basis: {0}")]
    OracleFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
