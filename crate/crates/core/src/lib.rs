//! Deciding and refuting local-unitary (LU) and local-Clifford (LC)
//! equivalence of stabilizer graph states.
//!
//! The toolkit works entirely on the graph/stabilizer side: marginal
//! dimensions from GF(2) ranks, LC-orbit enumeration by local
//! complementation, metagraph analysis, LC-preserving graph condensation,
//! and a battery of marginal-rank LU-invariants with figures of merit.

pub mod enumerate;
pub mod gf2;
pub mod graph;
pub mod invariants;
pub mod lc;
pub mod meta;
pub mod stab;

pub use graph::{Graph, NodeSet};

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("parse error at byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },
    #[error("node count {0} outside the supported range")]
    TooManyNodes(usize),
    #[error("node {node} out of range for a graph on {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("adjacency is not a simple symmetric graph")]
    InvalidAdjacency,
    #[error("node set must not be empty")]
    EmptySet,
    #[error("node set {0} is too large for this operation (limit {1})")]
    SetTooLarge(usize, usize),
    #[error("orbit cap of {cap} elements exceeded")]
    OrbitCapExceeded { cap: usize },
    #[error("{0}")]
    Unsupported(String),
    #[error("database integrity: {0}")]
    Integrity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
