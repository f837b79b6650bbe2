//! Synchronous-network simulation of distributed eccentricity, diameter and
//! radius computation by BFS flooding, with local convergence detection and
//! a verification harness that checks runs against a brute-force oracle.

pub mod error;
pub mod graph;
pub mod protocol;
pub mod simulator;
pub mod summary;
pub mod verify;

pub use error::{GraphError, ProtocolError, SimError};
pub use graph::{
    complete_graph, oracle_metrics, parse_edge_list, path_graph, random_connected_graph, t_graph,
    Graph, NodeId, OracleMetrics,
};
pub use protocol::{ExtU32, MessageSet, NodeState, Status, Tuple, Variant};
pub use simulator::{
    accounting, round_cap, run, visibility_set, ComplexityReport, Detection, RoundTraceEntry,
    Simulation, SimulationResult, WakeSchedule,
};
pub use summary::RunSummary;
pub use verify::{verify_run, VerificationReport};
