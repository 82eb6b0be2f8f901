use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("operation requires a singly indexed ring")]
    NotSingleRing,
    #[error("operation is undefined on the unit monomial")]
    UnitMonomial,
    #[error("{divisor} does not divide {dividend}")]
    NotDivisible { divisor: String, dividend: String },
    #[error("monomial {monomial} has degree {degree} > d = {bound}")]
    DegreeOverflow { monomial: String, degree: u32, bound: u32 },
    #[error("{0} is not in the ideal")]
    NotInIdeal(String),
    #[error("{0} is not a minimal generator")]
    NotGenerator(String),
    #[error("ideal is not Borel fixed: {0}")]
    NotBorel(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
