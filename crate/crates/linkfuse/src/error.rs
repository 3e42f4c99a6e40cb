//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty graph: no edges in input")]
    EmptyGraph,

    #[error("node id {id} out of range (graph has {count} nodes)")]
    NodeOutOfRange { id: usize, count: usize },

    #[error("unknown node label '{0}'")]
    UnknownLabel(String),

    #[error("unknown attribute '{0}'")]
    UnknownAttribute(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("edge list mixes timestamped and untimestamped lines")]
    MixedTimestamps,

    #[error("temporal holdout requires timestamps on every edge")]
    MissingTimestamps,

    #[error("unweightable attribute '{0}': all values missing")]
    UnweightableAttribute(String),

    #[error("no viable policy: no grid point produced a correct prediction")]
    NoViablePolicy,

    #[error("degenerate null model: randomized replicas have zero variance")]
    DegenerateNullModel,

    #[error("degenerate scorer: {0}")]
    DegenerateScorer(String),

    #[error("no weight supplied for attribute '{0}'")]
    MissingWeight(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of the computation itself (degenerate denominators,
    /// zero-variance null models, empty tuning grids) as opposed to bad input.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::UnweightableAttribute(_)
                | Error::NoViablePolicy
                | Error::DegenerateNullModel
                | Error::DegenerateScorer(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
