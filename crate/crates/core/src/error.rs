use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("empty matrix file")]
    EmptyFile,

    #[error("line {line}: cannot parse {cell:?} as a number")]
    BadCell { line: usize, cell: String },

    #[error("line {line}: expected {expected} columns, found {found}")]
    RaggedRows {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("invalid dimensions: {0}")]
    Dimension(String),

    #[error("non-finite value at {0}")]
    NonFinite(String),

    #[error("index {index} out of range for {n} columns")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("missing score for subset {0:?}")]
    MissingScore(Vec<usize>),

    #[error("{what} needs {required} units but the budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        budget: u128,
    },

    #[error("graph is not connected")]
    Disconnected,
}
