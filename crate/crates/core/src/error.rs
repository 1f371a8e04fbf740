use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the formula is defined.
    #[error("`{param}` {reason} (got {value})")]
    Domain {
        param: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A root finder or series failed to converge.
    #[error("{routine} did not converge")]
    Convergence { routine: &'static str },

    /// An integer search ran past its upper limit without finding a solution.
    #[error("no sample size up to {limit} satisfies the requested precision")]
    NoSolution { limit: u64 },

    #[error("table {table}: empty grid for `{axis}`")]
    EmptyGrid { table: String, axis: &'static str },

    #[error("unknown table id `{0}`")]
    UnknownTable(String),

    #[error("unknown {what} `{input}`")]
    Unknown { what: &'static str, input: String },

    #[error("table {table}, cell ({row}, {col}): {source}")]
    Cell {
        table: String,
        row: usize,
        col: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("golden file {path}: {message}")]
    Golden { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn domain(param: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            param,
            value,
            reason,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
