//! JSON summary of a single run, shared by the CLI and the tests.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId, OracleMetrics};
use crate::protocol::Variant;
use crate::simulator::{accounting, ComplexityReport, FinalValues, SimulationResult};
use crate::verify::{check_bounds, Claim};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub edges: usize,
    pub diameter: u32,
    pub radius: u32,
    pub centers: BTreeSet<NodeId>,
    pub periphery: BTreeSet<NodeId>,
}

impl GraphSummary {
    pub fn new(g: &Graph, oracle: &OracleMetrics) -> Self {
        GraphSummary {
            nodes: g.node_count(),
            edges: g.edge_count(),
            diameter: oracle.diameter,
            radius: oracle.radius,
            centers: oracle.centers.clone(),
            periphery: oracle.periphery.clone(),
        }
    }
}

/// First detection round per node, one map per predicate.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionRounds {
    pub ecc: BTreeMap<NodeId, Option<u32>>,
    pub diam: BTreeMap<NodeId, Option<u32>>,
    pub rad: BTreeMap<NodeId, Option<u32>>,
    pub termination: BTreeMap<NodeId, Option<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub graph: GraphSummary,
    pub variant: Variant,
    pub schedule: BTreeMap<NodeId, u32>,
    pub rounds_executed: u32,
    pub wake_rounds: BTreeMap<NodeId, u32>,
    pub detection: DetectionRounds,
    pub final_values: BTreeMap<NodeId, FinalValues>,
    pub accounting: ComplexityReport,
    /// bound - observed per claim and node; corollary claims only appear
    /// when every scheduled wake is at round 0.
    pub bound_slack: BTreeMap<Claim, BTreeMap<NodeId, i64>>,
    pub peak_stored_ids: BTreeMap<NodeId, usize>,
}

impl RunSummary {
    pub fn new(g: &Graph, oracle: &OracleMetrics, result: &SimulationResult) -> Self {
        let mut detection = DetectionRounds::default();
        for (&id, d) in &result.detection {
            detection.ecc.insert(id, d.ecc_round);
            detection.diam.insert(id, d.diam_round);
            detection.rad.insert(id, d.rad_round);
            detection.termination.insert(id, d.termination_round);
        }
        let mut bound_slack: BTreeMap<Claim, BTreeMap<NodeId, i64>> = BTreeMap::new();
        for b in check_bounds(result, oracle).nodes {
            bound_slack.entry(b.claim).or_default().insert(b.node, b.slack);
        }
        RunSummary {
            graph: GraphSummary::new(g, oracle),
            variant: result.variant,
            schedule: result.schedule.iter().collect(),
            rounds_executed: result.rounds_executed,
            wake_rounds: result.wake_rounds.clone(),
            detection,
            final_values: result.final_values.clone(),
            accounting: accounting(g, result),
            bound_slack,
            peak_stored_ids: result.peak_stored.clone(),
        }
    }
}
