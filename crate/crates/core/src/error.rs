use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("infeasible graph request: {0}")]
    Infeasible(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{n} qubits exceeds the simulation cap of {cap}")]
    TooManyQubits { n: usize, cap: usize },

    #[error("{n} vertices exceeds the brute-force cap of {cap}")]
    TooLargeForBruteForce { n: usize, cap: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("layer {layer} out of range for depth {p}")]
    InvalidLayer { layer: usize, p: usize },

    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("degenerate instance: C_max == C_min == {0}")]
    DegenerateExtremes(f64),

    #[error("operation needs an EWS or OWS instance, got {0}")]
    UnsupportedClass(String),

    #[error("no orbit member lies in U1^p or U2^p")]
    NotRepresentable,

    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(usize, usize),

    #[error("instance has no edges")]
    EmptyEdgeSet,

    #[error("reduction chain mismatch at step {step}: {reason}")]
    ChainMismatch { step: usize, reason: String },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
