use thiserror::Error;

/// Errors raised while building or validating a [`Graph`](crate::graph::Graph).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("edge ({src}, {dst}) has non-positive or non-finite weight {weight}")]
    BadWeight { src: usize, dst: usize, weight: f64 },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("node index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("{what} has length {got}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("{what} entry {index} is invalid: {value}")]
    BadValue {
        what: &'static str,
        index: usize,
        value: f64,
    },
    #[error("added weight must be positive, got {0}")]
    BadAddedWeight(f64),
    #[error("graph with {n} nodes is too large for {op} (limit {limit})")]
    TooLarge {
        op: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("malformed graph document: {0}")]
    Document(String),
}

/// Failures of the dense linear-algebra kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is singular to working precision (pivot {pivot:e} at step {step})")]
    Singular { step: usize, pivot: f64 },
    #[error("matrix is not positive definite (pivot {pivot:e} at step {step})")]
    NotPositiveDefinite { step: usize, pivot: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Top-level error for the analysis modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("iteration did not converge after {iterations} steps (last change {change:e})")]
    NotConverged { iterations: usize, change: f64 },
    #[error(
        "component {component:?} has no node with positive weight; optimum is underdetermined"
    )]
    Unanchored { component: Vec<usize> },
    #[error("unsupported for this instance: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numerical check failed: {0}")]
    Numerical(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
