use thiserror::Error;

/// Errors raised by graph construction, evaluation and search.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge ({l}, {r}) out of range for a {n_left}x{n_right} bipartite graph")]
    EdgeOutOfRange {
        l: usize,
        r: usize,
        n_left: usize,
        n_right: usize,
    },
    #[error("duplicate edge ({l}, {r})")]
    DuplicateEdge { l: usize, r: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what}: size {actual} exceeds the limit of {limit}")]
    Capacity {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("infeasible instance: {0}")]
    Infeasible(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn check_probability(name: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(invalid(format!("{name} must lie in [0, 1], got {value}")))
    }
}
