use thiserror::Error;

/// Errors raised by the kernel, the verifier and the expression front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation pole at q = {0}")]
    EvaluationPole(String),
    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("constant term is not invertible")]
    NonUnitConstantTerm,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("coefficient index {index} exceeds truncation order {order}")]
    OrderExceeded { index: usize, order: usize },
    #[error("sequence has {got} terms, {needed} needed")]
    InsufficientTerms { got: usize, needed: usize },
    #[error("lower parameter makes a denominator vanish: {0}")]
    DenominatorDegeneracy(String),
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("identity `{0}` has no per-term exponent structure")]
    UnsupportedIdentity(String),
    #[error("parse error at line {line}, column {column}: expected one of {}, found {found}", expected.join(", "))]
    ParseError {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("`{name}` expects {expected}, got {got}")]
    ArityError {
        name: String,
        expected: String,
        got: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
