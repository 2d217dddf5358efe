use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("degree mismatch: expected {expected}, got {actual}")]
    DegreeMismatch { expected: usize, actual: usize },

    #[error("subgroups belong to different parent groups")]
    MixedParents,

    #[error("subgroup is not normal: {0}")]
    NotNormal(String),

    #[error("budget exceeded: {what} is {actual}, cap is {cap}")]
    Budget {
        what: &'static str,
        cap: usize,
        actual: usize,
    },

    /// `line` is 1-based; 0 for text that is not read from a file.
    #[error("parse error{}: {message}", at_line(*.line))]
    Parse { line: usize, message: String },

    #[error("order mismatch for {name}: expected {expected}, got {actual}")]
    OrderMismatch {
        name: String,
        expected: u64,
        actual: u64,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Two computations of the same fact disagree.
    #[error("inconsistent result: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn at_line(line: usize) -> String {
    if line == 0 {
        String::new()
    } else {
        format!(" at line {line}")
    }
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
