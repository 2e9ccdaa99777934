use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("generator sets differ: {left:?} vs {right:?}")]
    GeneratorMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("generators: {0}")]
    Generators(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("parse error at column {column}: {message} (in {input:?})")]
    Parse {
        input: String,
        column: usize,
        message: String,
    },
    #[error("rank deficient: {0}")]
    RankDeficient(String),
    #[error("degenerate form: {0}")]
    Degenerate(String),
    #[error("matrix is not alternating")]
    NotAlternating,
    #[error("elementary divisors do not pair up: {0:?}")]
    OddMultiplicity(Vec<String>),
    #[error("point is not in the kernel of the polarising isogeny: pairing value {pairing} with basis vector {index} is not integral")]
    NotInKernel { index: usize, pairing: String },
    #[error("frame: {0}")]
    Frame(String),
    #[error("determinant is zero: not an isogeny")]
    NotAnIsogeny,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("document: {0}")]
    Document(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
