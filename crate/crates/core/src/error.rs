use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("sqrt({0}) lies outside the declared radical basis")]
    UnknownRadical(u64),
    #[error("division requires a denominator outside the atom list: {0}")]
    NonAtomDenominator(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("operands live in different charts or particle counts")]
    ChartMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("operator does not conserve the fermion number")]
    NotNumberConserving,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("construction check `{what}` failed; residual: {residual}")]
    ConstructionCheck { what: String, residual: String },
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
