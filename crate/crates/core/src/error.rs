use crate::digraph::VertexId;
use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A presentation generator emitted something inconsistent.
    #[error("presentation invalid: {0}")]
    PresentationInvalid(String),

    /// A document could not be parsed at all.
    #[error("parse error: {0}")]
    Parse(String),

    /// An edge references a vertex that was never declared.
    #[error("dangling edge endpoint: {0}")]
    DanglingEndpoint(String),

    /// A vertex level is outside the declared depth, or the declared span
    /// does not match the edges.
    #[error("level/span violation: {0}")]
    LevelViolation(String),

    /// Self-loops and parallel edges are rejected everywhere.
    #[error("malformed digraph: {0}")]
    MalformedDigraph(String),

    #[error("unknown end name: {0}")]
    UnknownEnd(String),

    #[error("unknown family: {0}")]
    UnknownFamily(String),

    #[error("bad family parameter: {0}")]
    BadParameter(String),

    /// Fewer usable inputs than the requested threshold.
    #[error("insufficient input: {0}")]
    InsufficientInput(String),

    /// A Menger step could not supply the paths the construction needs.
    /// Carries the dual separator as the certificate of infeasibility.
    #[error("infeasible: {reason} (separator of size {})", separator.len())]
    Infeasible {
        reason: String,
        separator: Vec<VertexId>,
    },

    /// A graded-sequence step found more disjoint paths than the claimed
    /// degree, i.e. the caller's degree bound is refuted.
    #[error("contradiction: flow {flow} exceeds claimed degree {claimed}")]
    Contradiction { claimed: u32, flow: u32 },

    /// Partition enumeration refused: too many declared smaller ends.
    #[error("too many declared ends for partition enumeration: {0} > 15")]
    TooManyEnds(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
