use thiserror::Error;

use crate::net_model::ArcId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("arc {arc}: probability {value} outside [0, 1]")]
    ProbabilityOutOfRange { arc: usize, value: String },

    #[error("arc {arc}: endpoints {u}-{v} already joined by arc {previous}")]
    DuplicateArc {
        arc: usize,
        u: usize,
        v: usize,
        previous: usize,
    },

    #[error("arc {arc}: self-loop on node {node}")]
    SelfLoop { arc: usize, node: usize },

    #[error("node {node} outside 1..={node_count}")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("source and sink must differ (both {0})")]
    SourceIsSink(usize),

    #[error("network needs at least one node")]
    NoNodes,

    #[error("unknown arc {0}")]
    UnknownArc(ArcId),

    #[error("arc {0} assigned more than once")]
    RepeatedArc(ArcId),

    #[error("state vector has {actual} coordinates, network has {expected} arcs")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("sink is not reachable from source")]
    SinkUnreachable,

    #[error("no layer-cut candidates")]
    EmptyCutList,

    #[error("arc list is empty")]
    EmptyArcList,

    #[error("{arcs} free arcs exceed the enumeration limit of {limit}")]
    TooManyArcs { arcs: usize, limit: usize },

    #[error("budget of {n_sim} trials cannot cover {strata} strata")]
    BudgetTooSmall { n_sim: u64, strata: usize },

    #[error("invalid stratum weights: {0}")]
    InvalidWeights(String),

    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
