use thiserror::Error;

use crate::affinity::Witness;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("overlapping multi-indices: {0}")]
    Overlap(String),

    #[error("position {position} out of range for an index of length {len}")]
    Position { position: usize, len: usize },

    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("grade mismatch: {0}")]
    GradeMismatch(String),

    #[error("zero axis: the direction vector must be nonzero")]
    ZeroAxis,

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("function is not {class}: nonzero t^{} coefficient {}", .witness.t_power, .witness.value)]
    NotAffine { class: &'static str, witness: Box<Witness> },

    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),

    #[error("degree bound violated: {0}")]
    DegreeViolation(String),

    #[error("ill-defined alpha coefficient: {0}")]
    IllDefinedAlpha(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
