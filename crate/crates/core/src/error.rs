use thiserror::Error;

use crate::parse::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// `axis` is 1-based, as in `x1..xn`.
    #[error("axis x{axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("input is not {m}-polyharmonic: the {m}-fold Laplacian is nonzero")]
    NotPolyharmonic { m: u32 },

    /// Weight profile fails `phi^(j)(0) = 0` for some `j < required`.
    #[error("weight profile violates phi^({derivative})(0) = 0 (needs vanishing through order {required})")]
    WeightVanishing { derivative: usize, required: usize },

    #[error("invalid request: {0}")]
    InvalidRequest(String),

    #[error("{label}: {source}")]
    Element {
        label: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("serialization failed: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn labelled(self, label: impl Into<String>) -> Error {
        Error::Element {
            label: label.into(),
            source: Box::new(self),
        }
    }
}
