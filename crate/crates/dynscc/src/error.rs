use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("a graph needs at least one vertex")]
    EmptyGraph,
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: VertexId, n: usize },
    #[error("({0},{1}) is not an edge of the graph")]
    UnknownEdge(VertexId, VertexId),
    #[error("pair query needs two distinct vertices, got {0} twice")]
    SamePair(VertexId),
    #[error("refine: pivot {0} lies inside the partitioned set")]
    PivotInPartition(VertexId),
    #[error("cannot place {m} edges on {n} vertices (at most {max})")]
    TooManyEdges { n: usize, m: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
