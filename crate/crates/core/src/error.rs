use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("variable x{index} is outside x1..x{n}")]
    VariableOutOfRange { index: usize, n: usize },

    #[error("variable x{0} assigned more than once")]
    DuplicateVariable(usize),

    #[error("variable count {n} outside supported range {min}..={max}")]
    VariableCount { n: usize, min: usize, max: usize },

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("invalid variable order: {0}")]
    InvalidOrder(String),

    #[error("variable x{0} is already folded")]
    AlreadyFolded(usize),

    #[error("invalid variable set: {0}")]
    InvalidSet(String),

    #[error("invalid truth table file: {0}")]
    Format(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("split sizes collapse for alphas {alphas:?} over {size} variables")]
    SplitCollapse { alphas: Vec<f64>, size: usize },

    #[error("empty search domain")]
    EmptyDomain,

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("solver failed: {0}")]
    Solver(String),

    #[error("{what} limited to n <= {max}, got n = {n}")]
    TooLarge { what: &'static str, n: usize, max: usize },
}
