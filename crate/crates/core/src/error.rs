use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("hypergraph has no hyperedge with at least two distinct vertices")]
    EmptyHypergraph,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("vertex {vertex} has no incident hyperedge")]
    IsolatedVertex { vertex: usize },

    #[error("candidate {edge:?} contains a vertex absent from the scored hypergraph")]
    UnknownCandidateVertex { edge: Vec<String> },

    #[error("Katz series diverges: beta {beta} >= 1/spectral radius {limit}")]
    KatzDivergence { beta: f64, limit: f64 },

    #[error("metric undefined: {0}")]
    MetricUndefined(&'static str),

    #[error("trial {trial}: no missing hyperedge survived pruning after {attempts} attempts")]
    DegenerateTrial { trial: usize, attempts: usize },

    #[error("sampling failed: {0}")]
    Sampling(String),

    #[error("trial {trial} failed: {source}")]
    Trial {
        trial: usize,
        #[source]
        source: Box<Error>,
    },
}
