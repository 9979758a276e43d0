//! Workload scripts for the dynscc engine: parsing, replay with optional
//! oracle diffing, seeded generation and the recompute benchmark.

pub mod bench;
pub mod generate;
pub mod runner;
pub mod script;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Engine {
        line: usize,
        #[source]
        source: dynscc::Error,
    },
    #[error(transparent)]
    Graph(#[from] dynscc::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
