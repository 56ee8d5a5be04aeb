use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("galois exponent {exponent} is not coprime to conductor {conductor}")]
    NotCoprime { exponent: i64, conductor: u32 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("value with conductor {found} does not lie in the field of conductor {expected}")]
    NotInField { found: u32, expected: u32 },
    #[error("matrix entries are not in a dyadic cyclotomic field")]
    NotDyadic,
    #[error("matrix is not unitary")]
    NotUnitary,
    #[error("matrix is not Clifford: {0}")]
    NotClifford(String),
    #[error("not a full stabilizer group: {found} independent generators, {expected} required")]
    NotFullStabilizerGroup { found: usize, expected: usize },
    #[error("not a stabilizer operator: {0}")]
    NotStabilizerOperator(String),
    #[error("resource cap of {cap} exceeded")]
    CapExceeded { cap: usize },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
