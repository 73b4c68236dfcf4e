use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: vertex {vertex} out of range for {vertex_count} vertices")]
    VertexOutOfRange {
        line: usize,
        vertex: usize,
        vertex_count: usize,
    },

    #[error("line {line}: self-loop on vertex {vertex} (adjacency diagonal must be zero)")]
    SelfLoop { line: usize, vertex: usize },

    #[error("edge ({u}, {v}) invalid for a graph on {vertex_count} vertices")]
    InvalidEdge {
        u: usize,
        v: usize,
        vertex_count: usize,
    },

    #[error("{kind} graph needs at least {min} vertices, got {got}")]
    TooFewVertices {
        kind: &'static str,
        min: usize,
        got: usize,
    },

    #[error("unknown graph kind `{0}` (expected star, ring, path or complete)")]
    UnknownGraphKind(String),

    #[error("refusing to enumerate graphs on {vertex_count} vertices: cap is {cap}")]
    EnumerationCap { vertex_count: usize, cap: usize },

    #[error("graph is disconnected: the Perron-Frobenius ground state requires a connected graph")]
    Disconnected,

    #[error(
        "top eigenvalue is degenerate (gap {gap:e}); eigensolver failure on a connected graph"
    )]
    DegenerateGround { gap: f64 },

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("particle number must be at least {min}, got {got}")]
    TooFewParticles { min: usize, got: usize },

    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    NoSuchVertex { vertex: usize, vertex_count: usize },

    #[error("Fock basis of {size} states exceeds the cap of {cap}")]
    BasisTooLarge { size: u128, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed Fock state document: {0}")]
    StateFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
