pub mod decomposition;
pub mod dominators;
pub mod error;
pub mod graph;
pub mod hyperloop;
pub mod loops;
pub mod oracle;
pub mod partition;
pub mod query;
pub mod twovcc;

pub use error::{Error, Result};
pub use graph::{Digraph, Dir, Edge, SccPartition, VertexId, NIL};
