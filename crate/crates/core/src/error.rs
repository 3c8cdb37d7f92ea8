use thiserror::Error;

/// Errors raised by the symbolic and combinatorial layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero function")]
    DivisionByZero,
    #[error("pole: a denominator vanishes at the evaluation point")]
    Pole,
    #[error("variable context mismatch: {0}")]
    ContextMismatch(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("degree undefined: the function is identically zero")]
    DegreeUndefined,
    /// The restriction of a function to a co-character curve vanished identically.
    /// For a positive map this cannot happen, so it certifies non-positivity.
    #[error("cancellation: restriction to the co-character curve {0:?} is identically zero")]
    Cancellation(Vec<i64>),
    #[error("invalid reduced word {word:?} for GL_{n}")]
    InvalidWord { word: Vec<usize>, n: usize },
    #[error("unsupported Cartan entry pair ({0}, {1})")]
    UnsupportedCartanPair(i32, i32),
    #[error("point outside the chart: {0}")]
    OutsideChart(String),
    #[error("enumeration inconsistency: {0}")]
    Inconsistent(String),
    #[error("highest weight is not unique in component: {0}")]
    HighestWeight(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
