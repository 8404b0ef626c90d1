use thiserror::Error;

/// Errors raised by the core library.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("activation {activation} cannot act on a {dim}-dimensional algebra")]
    AlgebraMismatch { activation: String, dim: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("value {value} at neuron {neuron} is not in the activation codomain")]
    NotInCodomain { neuron: usize, value: String },

    #[error("excitation overflowed for memory {index}")]
    Overflow { index: usize },

    #[error("potential-function singularity: state matches memory {index}")]
    PotentialSingularity { index: usize },

    #[error("state space of {size} states exceeds the limit of {limit}")]
    StateSpaceTooLarge { size: u128, limit: u128 },

    #[error("cannot decode component {index}: no codomain element within 0.5")]
    Decode { index: usize },

    #[error("malformed algebra block: {0}")]
    AlgebraFormat(String),

    #[error("image error: {0}")]
    Image(String),

    #[error("empty memory set")]
    EmptyMemorySet,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
