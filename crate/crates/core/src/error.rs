use thiserror::Error;

use crate::network::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("order is not a permutation of the {n} nodes: {reason}")]
    NotAPermutation { n: usize, reason: String },
    #[error("size guard exceeded: {0}")]
    Guard(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("invalid action at node {node}: {reason}")]
    InvalidAction { node: NodeId, reason: String },
    #[error("internal consistency fault: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
