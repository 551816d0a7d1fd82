use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("index n = {n} is excluded for r = {r} (2n + r = 0)")]
    ForbiddenIndex { n: i64, r: i64 },
    #[error("not enough coefficients: {0}")]
    InsufficientCoefficients(String),
    #[error("constraint violated at gamma_{index}: expected 0, found {value}")]
    ConstraintViolation { index: i64, value: String },
    #[error("r = {r} requires a free coefficient gamma_{index}")]
    MissingFreeCoefficient { r: i64, index: i64 },
    #[error("group closure exceeded {0} elements")]
    OrderExceeded(usize),
    #[error("Molien sum produced a non-rational coefficient (internal arithmetic error)")]
    NonRationalResult,
    #[error("eigenvalues unavailable for element {0}")]
    EigenvaluesUnavailable(usize),
    #[error("operation requires odd negative r, got {0}")]
    WrongParityOrSign(i64),
    #[error("row {0} is outside the triangle")]
    RowOutOfRange(i64),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::IndexOutOfRange(_) => "IndexOutOfRange",
            Error::ForbiddenIndex { .. } => "ForbiddenIndex",
            Error::InsufficientCoefficients(_) => "InsufficientCoefficients",
            Error::ConstraintViolation { .. } => "ConstraintViolation",
            Error::MissingFreeCoefficient { .. } => "MissingFreeCoefficient",
            Error::OrderExceeded(_) => "OrderExceeded",
            Error::NonRationalResult => "NonRationalResult",
            Error::EigenvaluesUnavailable(_) => "EigenvaluesUnavailable",
            Error::WrongParityOrSign(_) => "WrongParityOrSign",
            Error::RowOutOfRange(_) => "RowOutOfRange",
            Error::Inconsistent(_) => "Inconsistent",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
