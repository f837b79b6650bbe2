use thiserror::Error;

use crate::graph::NodeId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("self-loop on node {node}{}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    SelfLoop { node: NodeId, line: Option<usize> },
    #[error("duplicate edge {0} - {1}")]
    DuplicateEdge(NodeId, NodeId),
    #[error("edge {0} - {1} is not symmetric")]
    Asymmetric(NodeId, NodeId),
    #[error("graph is disconnected: only {reachable} of {total} nodes reachable")]
    Disconnected { reachable: usize, total: usize },
    #[error("graph needs at least 2 nodes, found {0}")]
    TooFewNodes(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("state transition applied to terminated node {0}")]
    TransitionAfterTermination(NodeId),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("wake schedule is empty")]
    EmptySchedule,
    #[error("wake schedule names node {0}, which is not in the graph")]
    UnknownNode(NodeId),
    #[error("max_rounds must be at least 1")]
    ZeroRoundLimit,
    #[error("no global termination after {0} rounds")]
    Runaway(u32),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}
