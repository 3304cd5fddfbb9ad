use thiserror::Error;

use crate::exactalg::Rat;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Zero divisor, zero denominator, or a gcd of two zero polynomials.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("evaluation at a pole: z = {at}")]
    Pole { at: Rat },

    #[error("polynomial degree {degree} exceeds the cap of {cap}")]
    DegreeCap { degree: usize, cap: usize },

    /// 1 - P vanishes identically, so every closed-loop entry is undefined.
    #[error("degenerate network: {0}")]
    DegenerateNetwork(String),

    #[error("degenerate sample point: product of edge gains equals 1")]
    DegeneratePoint,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported size n = {n} (supported range {min}..={max})")]
    UnsupportedSize { n: usize, min: usize, max: usize },

    #[error("not identifiable: {0}")]
    NotIdentifiable(String),

    #[error("non-generic instance: {0}")]
    NonGeneric(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid field `{field}`: {message}")]
    Format { field: String, message: String },

    #[error("resampling gave up after {attempts} attempts")]
    ResampleExhausted { attempts: usize },
}

impl Error {
    pub(crate) fn format(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            field: field.into(),
            message: message.into(),
        }
    }
}
