use crate::graph6::Graph6Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Graph6(#[from] Graph6Error),

    #[error("component with {vertices} vertices exceeds the exact-counting limit of {limit}")]
    TooLarge { vertices: usize, limit: usize },

    /// The Kotecký–Preiss hypothesis could not be verified, so no truncation
    /// bound is available.
    #[error("DIVERGENT_REGIME: {0}")]
    DivergentRegime(String),

    #[error("parameter mismatch: {0}")]
    Mismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An identity that holds by construction failed. Always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("invalid graph spec `{input}`: {reason}")]
    Spec { input: String, reason: String },

    #[error("catalog cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
