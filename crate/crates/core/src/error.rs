use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("graph must have between 1 and {max} vertices, got {n}", max = crate::graph::MAX_VERTICES)]
    VertexCount { n: usize },

    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("cycle needs at least 3 vertices, got {0}")]
    CycleTooShort(usize),

    #[error("vertex set is empty")]
    EmptyVertexSet,

    #[error("invalid inequality: {0}")]
    InvalidInequality(String),

    #[error("weights of test {test} sum to {sum}, expected 1")]
    WeightCondition { test: usize, sum: String },

    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("{n} tests exceed the enumeration guard of {max}")]
    EnumerationGuard { n: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector {index} is not unit norm (norm {norm})")]
    NotUnit { index: usize, norm: f64 },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("context {context} is not a clique of the representation")]
    NotAClique { context: usize },

    #[error("degenerate collapse measuring test {test} in context {context}")]
    DegenerateCollapse { context: usize, test: usize },

    #[error("no deterministic behavior saturates the bound {bound}")]
    NoSaturatingVertex { bound: String },

    #[error("bound {bound} is violated by a deterministic behavior reaching {value}")]
    BoundViolated { bound: String, value: String },

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error(
        "SDP solver did not converge after {iterations} iterations (value {value}, gap {gap:e})"
    )]
    SdpNotConverged {
        value: f64,
        gap: f64,
        iterations: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown id `{0}`")]
    UnknownId(String),
}
