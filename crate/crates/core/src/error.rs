use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("numeric integration did not converge: {0}")]
    Integration(String),

    #[error("degree sum {0} is odd")]
    OddDegreeSum(u64),

    #[error("graph needs at least {needed} edges, found {found}")]
    TooFewEdges { needed: usize, found: usize },

    #[error("node {0} has no neighbours and no jump is possible")]
    IsolatedNode(u32),

    #[error("trace too short: need at least {needed} samples, got {got}")]
    TraceTooShort { needed: usize, got: usize },

    #[error("trace is constant, copula is undefined")]
    ConstantTrace,

    #[error("need at least {needed} exceedances of {threshold}, found {found}")]
    TooFewExceedances {
        threshold: f64,
        needed: usize,
        found: usize,
    },

    #[error("only {found} windows of length {length} fit in the trace, need {needed}")]
    TooFewWindows {
        length: usize,
        needed: usize,
        found: usize,
    },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
