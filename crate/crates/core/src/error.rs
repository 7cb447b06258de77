use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("unknown series pattern `{0}`")]
    UnknownPattern(String),

    #[error("cannot parse scalar `{input}`: {reason}")]
    ScalarParse { input: String, reason: String },

    #[error("tensor rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("commutator table populated to z^{populated}, rewrite needs z^{needed}")]
    TableIncomplete { needed: u32, populated: u32 },

    #[error("coproduct series available to order {available}, needs order {needed}")]
    SeriesIncomplete { needed: u32, available: u32 },

    #[error("invalid bialgebra: {0}")]
    InvalidBialgebra(String),

    #[error("generator `{0}` is not central")]
    NotCentral(String),

    #[error("unsupported double family `{0}`")]
    UnsupportedFamily(String),

    #[error("no solution at order {order} ({stage}): {detail}")]
    NoSolution {
        order: u32,
        stage: String,
        detail: String,
    },

    #[error("basis has a singular linear part")]
    NonInvertibleBasis,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("duplicate entry `{0}`")]
    DuplicateEntry(String),

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid job: {0}")]
    InvalidJob(String),

    #[error("i/o error: {0}")]
    Io(String),
}
