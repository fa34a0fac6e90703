use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("cannot resolve {0}")]
    Resolution(String),

    #[error("chart mismatch: {0}")]
    ChartMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("2-form cannot be inverted polynomially: {0}")]
    NondegenerateInverseUnavailable(String),

    #[error("bivector is not invertible in the polynomial ring: {0}")]
    DegeneratePi(String),

    #[error("2-form and endomorphism do not commute")]
    CommutationFailure,

    #[error("bivector is not Poisson")]
    NotPoisson,

    #[error("point is not regular: {0}")]
    NotRegularPoint(String),

    #[error("B-field is not closed")]
    NonClosedB,

    #[error("covector is not in the isotropy kernel")]
    NotInIsotropyKernel,

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
