use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("wrong length: expected {expected} images, got {got}")]
    WrongLength { expected: usize, got: usize },

    #[error("image value {value} out of range 1..={degree}")]
    OutOfRange { value: usize, degree: usize },

    #[error("degree {0} out of supported range 1..=255")]
    UnsupportedDegree(usize),

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("syntax error: {0}")]
    Syntax(String),

    #[error("construct enumeration is not available for family {0}")]
    UnsupportedMethod(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("refusing to filter {n}^{n} maps (ceiling is {ceiling}^{ceiling}); enable force_scale to override")]
    ScaleRefusal { n: usize, ceiling: usize },

    #[error("{element} is not a member of {family}")]
    NotAMember { element: String, family: String },

    #[error("set is not closed under composition: {left} * {right} = {product} is outside")]
    NotClosed {
        left: String,
        right: String,
        product: String,
    },
}
