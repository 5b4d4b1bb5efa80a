use std::path::PathBuf;

use crate::dist::{Axis, Violation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    Violation(Violation),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unknown axis `{0}`")]
    UnknownAxis(Axis),
    #[error("overlapping variable sets: {0}")]
    Overlap(String),
    #[error("alphabet mismatch: {0}")]
    Mismatch(String),
    #[error("structure mismatch: {0}")]
    Structure(String),
    #[error("internal consistency: {0}")]
    Consistency(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("size guard exceeded: {0}")]
    Guard(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}
