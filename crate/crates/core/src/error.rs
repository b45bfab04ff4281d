use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("all components of the tuple are identically zero")]
    ZeroTuple,

    #[error("tuple is not homogeneous")]
    NotHomogeneous,

    #[error("all components evaluate to zero (indeterminate point)")]
    Indeterminate,

    #[error("exponent matrix is singular (degenerate monomial map)")]
    SingularExponentMatrix,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("exponent too large for exact coefficient power: {0} bits")]
    ExponentTooLarge(u64),

    #[error("function nearly vanishes on the contour (min modulus {min_modulus:e})")]
    VanishingOnContour { min_modulus: f64 },

    #[error("winding number residual {residual:e} too large; increase the quadrature budget")]
    ResidualTooLarge { residual: f64 },

    #[error("zero counts of two generic combinations disagree: {first} vs {second}")]
    ZeroCountDisagreement { first: usize, second: usize },

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
