use thiserror::Error;

/// A single broken invariant found by [`crate::WeightedHypergraph::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("edge {edge}: vertex {vertex} is out of range (n = {n})")]
    OutOfRange {
        edge: usize,
        vertex: usize,
        n: usize,
    },
    #[error("edge {edge}: negative weight {weight}")]
    NegativeWeight { edge: usize, weight: String },
    #[error("edge {edge}: vertices are not sorted or contain duplicates")]
    Unsorted { edge: usize },
    #[error("edge {edge}: empty vertex set")]
    EmptyEdge { edge: usize },
    #[error("total weight mismatch: stored {stored}, sum of edges {actual}")]
    TotalWeightMismatch { stored: String, actual: String },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid hypergraph: {0}")]
    Invalid(#[from] Violation),
    #[error("negative Lagrange multiplier {0}")]
    NegativeLambda(String),
    #[error("integer capacity overflow while scaling the flow network")]
    CapacityOverflow,
    #[error("coverage target {tau} exceeds the weight reachable by the full chain")]
    InfeasibleCoverage { tau: String },
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("malformed rational {0:?}")]
    Rational(String),
    #[error("sampler: {0}")]
    Sampler(String),
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
