use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("polyhedron is unbounded")]
    Unbounded,

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("space is not polyhedral: {0}")]
    NotPolyhedral(String),

    #[error("operator norm is {norm}, expected 1")]
    NotNormOne { norm: String },

    #[error("operator norm {norm} exceeds 1")]
    NormExceedsOne { norm: String },

    #[error("invalid ball: {0}")]
    InvalidBall(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("enumeration too large: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::Empty(_) => "Empty",
            Error::Unbounded => "Unbounded",
            Error::Infeasible => "Infeasible",
            Error::NotPolyhedral(_) => "NotPolyhedral",
            Error::NotNormOne { .. } => "NotNormOne",
            Error::NormExceedsOne { .. } => "NormExceedsOne",
            Error::InvalidBall(_) => "InvalidBall",
            Error::Unsupported(_) => "Unsupported",
            Error::Invalid(_) => "Invalid",
            Error::TooLarge(_) => "TooLarge",
        }
    }
}
