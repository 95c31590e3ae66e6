use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("not a series-communication-parallel pomset: {0}")]
    NotScp(String),
    #[error("ambiguous communication: event {0} takes part in more than one communication edge")]
    Ambiguity(usize),
    #[error("communication undefined for ({0},{1})")]
    CommTable(String, String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unsupported operator: {0}")]
    UnsupportedOperator(String),
    #[error("unsupported hypothesis: {0}")]
    UnsupportedHypothesis(String),
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),
    #[error("unsupported automaton structure: {0}")]
    UnsupportedStructure(String),
    #[error("state cap {cap} exceeded after {count} states")]
    CapExceeded { cap: usize, count: usize },
    #[error("input form: {0}")]
    InputForm(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
