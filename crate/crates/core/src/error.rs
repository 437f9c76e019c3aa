use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("not a latin square: row/column {axis} {index} repeats element {element}")]
    NotLatinSquare {
        axis: &'static str,
        index: usize,
        element: usize,
    },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NonAssociative(usize, usize, usize),
    #[error("group order {order} exceeds the enumeration bound {bound}")]
    OrderBoundExceeded { order: usize, bound: usize },
    #[error("unknown group name {0:?}")]
    UnknownGroup(String),
    #[error("eigenvalue clusters unresolvable: gap {gap:e} within 10x tolerance {tol:e}")]
    DegenerateSplit { gap: f64, tol: f64 },
    #[error("size mismatch: expected {expected}, got {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid p-norm exponent {0}")]
    InvalidP(f64),
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid tolerance {0}")]
    InvalidTolerance(f64),
    #[error("numerical check failed: {0}")]
    NumericalCheck(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
