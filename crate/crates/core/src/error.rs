use thiserror::Error;

use crate::graph::ComponentStructure;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("a circulant graph needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("at least one jump is required")]
    NoJumps,
    #[error("jump {jump} is 0 mod {n}")]
    ZeroJump { n: usize, jump: i64 },
    #[error("jump {jump} folds to {folded} mod {n}, which is already present")]
    DuplicateJump { n: usize, jump: i64, folded: usize },
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("prefix length {prefix_len} not in 1..={k}")]
    BadPrefix { prefix_len: usize, k: usize },
    #[error("malformed graph literal {0:?}, expected n:a1,a2,...")]
    BadLiteral(String),
    #[error("graph {graph} is disconnected ({} components)", .components.d)]
    Disconnected {
        graph: String,
        components: ComponentStructure,
    },
    #[error("graph {graph} is not in the family handled by {constructor}")]
    WrongFamily {
        graph: String,
        constructor: &'static str,
    },
    #[error("malformed rotation at vertex {vertex}: {reason}")]
    MalformedRotation { vertex: usize, reason: String },
    #[error("embedding assembly failed: {0}")]
    Assembly(String),
    #[error("parameter out of range: {0}")]
    BadParameter(String),
}
