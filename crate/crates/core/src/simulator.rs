//! Deterministic synchronous-round engine.
//!
//! Round 0 is the initial transition in which the earliest scheduled nodes
//! wake. In every round `t >= 1` each non-terminated node broadcasts its
//! outbox on all links, nodes scheduled for round `t` that are still
//! quiescent get an environment wake, and every node applies its transition
//! to the union of what it received. A node therefore woken in round `w` is
//! active at the end of round `w` and is first heard by its neighbors in
//! round `w + 1`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::graph::{Graph, NodeId, OracleMetrics};
use crate::protocol::{
    message_generation, should_terminate, ExtU32, MessageSet, NodeState, Status, Tuple, Variant,
};

/// Environment wake rounds for the initiators, normalized so the earliest is 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WakeSchedule {
    wakes: BTreeMap<NodeId, u32>,
}

impl WakeSchedule {
    pub fn new<I>(entries: I) -> Result<Self, SimError>
    where
        I: IntoIterator<Item = (NodeId, u32)>,
    {
        let mut wakes: BTreeMap<NodeId, u32> = BTreeMap::new();
        for (id, round) in entries {
            let slot = wakes.entry(id).or_insert(round);
            *slot = (*slot).min(round);
        }
        let min = *wakes.values().min().ok_or(SimError::EmptySchedule)?;
        for round in wakes.values_mut() {
            *round -= min;
        }
        Ok(WakeSchedule { wakes })
    }

    /// A single initiator woken at round 0.
    pub fn single(id: NodeId) -> Self {
        WakeSchedule {
            wakes: BTreeMap::from([(id, 0)]),
        }
    }

    /// Every node of `g` woken at round 0.
    pub fn all(g: &Graph) -> Self {
        WakeSchedule {
            wakes: g.node_ids().iter().map(|&id| (id, 0)).collect(),
        }
    }

    pub fn validate_for(&self, g: &Graph) -> Result<(), SimError> {
        match self.wakes.keys().find(|id| !g.contains(**id)) {
            Some(&id) => Err(SimError::UnknownNode(id)),
            None => Ok(()),
        }
    }

    pub fn get(&self, id: NodeId) -> Option<u32> {
        self.wakes.get(&id).copied()
    }

    pub fn max_wake(&self) -> u32 {
        self.wakes.values().copied().max().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, u32)> + '_ {
        self.wakes.iter().map(|(&id, &r)| (id, r))
    }

    pub fn len(&self) -> usize {
        self.wakes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wakes.is_empty()
    }

    /// True when every scheduled wake is at round 0.
    pub fn all_at_zero(&self) -> bool {
        self.wakes.values().all(|&r| r == 0)
    }
}

/// End-of-round state of one probed node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTraceEntry {
    pub round: u32,
    pub node: NodeId,
    #[serde(rename = "e")]
    pub ecc: u32,
    #[serde(rename = "d")]
    pub diam: u32,
    #[serde(rename = "r")]
    pub radius: ExtU32,
    #[serde(rename = "s")]
    pub status: Status,
    #[serde(rename = "c")]
    pub quiet: u32,
    pub new_bfs: u32,
    pub out_tuples: u32,
}

/// First round at which each local predicate held at a node.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Detection {
    pub ecc_round: Option<u32>,
    pub diam_round: Option<u32>,
    pub rad_round: Option<u32>,
    pub termination_round: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalValues {
    pub e: u32,
    pub d: u32,
    pub r: ExtU32,
}

/// Per-node transmission counters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeTraffic {
    /// Bfs tuples broadcast (one per round per tuple, regardless of degree).
    pub bfs_broadcasts: u64,
    /// Distinct Bfs origins broadcast.
    pub bfs_origins: u64,
    pub diam_broadcasts: u64,
    pub rad_broadcasts: u64,
    /// Tuple transmissions summed over the node's outgoing links.
    pub link_tuples: u64,
    pub bits: u64,
}

/// A Bfs origin arriving at a node in a given round. Own-origin absorption at
/// wake-up is recorded with `receiver == origin`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BfsDelivery {
    pub round: u32,
    pub origin: NodeId,
    pub receiver: NodeId,
}

/// Tuples that reached a node after it terminated. `redundant` is true when
/// processing them could not have changed the node's values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LateDelivery {
    pub round: u32,
    pub receiver: NodeId,
    pub tuples: usize,
    pub redundant: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub variant: Variant,
    pub schedule: WakeSchedule,
    pub node_count: usize,
    pub trace: Vec<RoundTraceEntry>,
    pub detection: BTreeMap<NodeId, Detection>,
    pub final_values: BTreeMap<NodeId, FinalValues>,
    pub traffic: BTreeMap<NodeId, NodeTraffic>,
    /// Last round executed; round 0 is the initial wake transition.
    pub rounds_executed: u32,
    pub wake_rounds: BTreeMap<NodeId, u32>,
    pub deliveries: Vec<BfsDelivery>,
    pub late_deliveries: Vec<LateDelivery>,
    /// Largest number of origin ids held at once by each node.
    pub peak_stored: BTreeMap<NodeId, usize>,
    /// Tuples still offered on links once every node has terminated.
    pub post_termination_tuples: u64,
}

impl SimulationResult {
    /// Last round any node terminated in.
    pub fn last_termination(&self) -> Option<u32> {
        self.detection
            .values()
            .map(|d| d.termination_round)
            .collect::<Option<Vec<_>>>()
            .and_then(|v| v.into_iter().max())
    }

    pub fn trace_for(&self, node: NodeId) -> impl Iterator<Item = &RoundTraceEntry> + '_ {
        self.trace.iter().filter(move |e| e.node == node)
    }
}

/// Bits per id or small integer: ceil(log2 |V|), at least 1.
pub fn field_bits(node_count: usize) -> u64 {
    let n = node_count.max(2) as u64;
    u64::from(64 - (n - 1).leading_zeros())
}

const TAG_BITS: u64 = 2;

fn tuple_bits(t: &Tuple, field: u64) -> u64 {
    match t {
        Tuple::Bfs { .. } => TAG_BITS + 2 * field,
        Tuple::Diam { .. } | Tuple::Rad { .. } => TAG_BITS + field,
        Tuple::EnvWake => 0,
    }
}

/// A run in progress. `step` executes one round; the engine can be observed
/// between rounds.
pub struct Simulation<'g> {
    graph: &'g Graph,
    variant: Variant,
    schedule: WakeSchedule,
    wake_at: Vec<Option<u32>>,
    states: Vec<NodeState>,
    next_round: u32,
    probed: Vec<bool>,
    criteria_since: Vec<Option<u32>>,
    detection: Vec<Detection>,
    wake_rounds: Vec<Option<u32>>,
    traffic: Vec<NodeTraffic>,
    absorbed: Vec<BTreeSet<NodeId>>,
    broadcast_origins: Vec<BTreeSet<NodeId>>,
    peak_stored: Vec<usize>,
    trace: Vec<RoundTraceEntry>,
    deliveries: Vec<BfsDelivery>,
    late: Vec<LateDelivery>,
    field_bits: u64,
}

impl<'g> Simulation<'g> {
    pub fn new(
        graph: &'g Graph,
        schedule: &WakeSchedule,
        variant: Variant,
        probes: &[NodeId],
    ) -> Result<Self, SimError> {
        schedule.validate_for(graph)?;
        if schedule.is_empty() {
            return Err(SimError::EmptySchedule);
        }
        let n = graph.node_count();
        let mut probed = vec![false; n];
        for &p in probes {
            let idx = graph.index_of(p).ok_or(SimError::UnknownNode(p))?;
            probed[idx] = true;
        }
        Ok(Simulation {
            graph,
            variant,
            schedule: schedule.clone(),
            wake_at: graph.node_ids().iter().map(|&id| schedule.get(id)).collect(),
            states: graph
                .node_ids()
                .iter()
                .map(|&id| NodeState::new(id, variant))
                .collect(),
            next_round: 0,
            probed,
            criteria_since: vec![None; n],
            detection: vec![Detection::default(); n],
            wake_rounds: vec![None; n],
            traffic: vec![NodeTraffic::default(); n],
            absorbed: vec![BTreeSet::new(); n],
            broadcast_origins: vec![BTreeSet::new(); n],
            peak_stored: vec![0; n],
            trace: Vec::new(),
            deliveries: Vec::new(),
            late: Vec::new(),
            field_bits: field_bits(n),
        })
    }

    pub fn states(&self) -> &[NodeState] {
        &self.states
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    /// Last completed round, or `None` before the first step.
    pub fn round(&self) -> Option<u32> {
        self.next_round.checked_sub(1)
    }

    pub fn is_done(&self) -> bool {
        self.next_round > 0 && self.states.iter().all(|s| s.status == Status::Terminated)
    }

    /// Messages every node offers on its links in the coming round.
    pub fn outgoing(&self) -> Vec<MessageSet> {
        self.states.iter().map(message_generation).collect()
    }

    /// Executes the next round.
    pub fn step(&mut self) -> Result<(), SimError> {
        let round = self.next_round;
        let outgoing = self.outgoing();
        self.account_sends(&outgoing);

        let before: Vec<Status> = self.states.iter().map(|s| s.status).collect();
        for idx in 0..self.states.len() {
            let mut merged: MessageSet = self
                .graph
                .neighbors_of(idx)
                .iter()
                .flat_map(|&nb| outgoing[nb].iter().copied())
                .collect();
            let state = &mut self.states[idx];
            if state.status == Status::Quiescent && self.wake_at[idx] == Some(round) {
                merged.insert(Tuple::EnvWake);
            }
            for origin in bfs_origins(&merged) {
                self.deliveries.push(BfsDelivery { round, origin, receiver: state.id });
            }
            if state.status == Status::Terminated {
                if !merged.is_empty() {
                    let redundant = merged.iter().all(|t| match *t {
                        Tuple::Bfs { origin, .. } => self.absorbed[idx].contains(&origin),
                        Tuple::Diam { value } => value <= state.diam,
                        Tuple::Rad { value } => ExtU32::Finite(value) >= state.radius,
                        Tuple::EnvWake => true,
                    });
                    self.late.push(LateDelivery {
                        round,
                        receiver: state.id,
                        tuples: merged.len(),
                        redundant,
                    });
                }
                continue;
            }
            state.advance(&merged)?;
        }

        for (idx, (old, new)) in before.iter().zip(self.states.iter_mut()).enumerate() {
            if *old == Status::Terminated {
                continue;
            }
            if *old == Status::Quiescent && new.status == Status::Active {
                self.wake_rounds[idx] = Some(round);
                self.deliveries.push(BfsDelivery { round, origin: new.id, receiver: new.id });
            }
            self.absorbed[idx].extend(bfs_origins(&new.outbox));
            self.peak_stored[idx] = self.peak_stored[idx].max(new.known.stored());

            let det = &mut self.detection[idx];
            if new.ecc_converged() {
                det.ecc_round.get_or_insert(round);
            }
            if new.diam_converged() {
                det.diam_round.get_or_insert(round);
            }
            if new.rad_converged() {
                det.rad_round.get_or_insert(round);
            }
            if new.diam_converged() && new.rad_converged() {
                self.criteria_since[idx].get_or_insert(round);
            }
            if let Some(since) = self.criteria_since[idx] {
                if should_terminate(new, round - since) {
                    new.terminate();
                    det.termination_round = Some(round);
                }
            }
        }

        for (idx, s) in self.states.iter().enumerate() {
            if self.probed[idx] {
                self.trace.push(RoundTraceEntry {
                    round,
                    node: s.id,
                    ecc: s.ecc,
                    diam: s.diam,
                    radius: s.radius,
                    status: s.status,
                    quiet: s.quiet,
                    new_bfs: s.new_origin_count() as u32,
                    out_tuples: message_generation(s).len() as u32,
                });
            }
        }
        self.next_round += 1;
        Ok(())
    }

    fn account_sends(&mut self, outgoing: &[MessageSet]) {
        for (idx, msg) in outgoing.iter().enumerate() {
            if msg.is_empty() {
                continue;
            }
            let degree = self.graph.neighbors_of(idx).len() as u64;
            let t = &mut self.traffic[idx];
            for tuple in msg {
                match *tuple {
                    Tuple::Bfs { origin, .. } => {
                        t.bfs_broadcasts += 1;
                        self.broadcast_origins[idx].insert(origin);
                    }
                    Tuple::Diam { .. } => t.diam_broadcasts += 1,
                    Tuple::Rad { .. } => t.rad_broadcasts += 1,
                    Tuple::EnvWake => continue,
                }
                t.link_tuples += degree;
                t.bits += degree * tuple_bits(tuple, self.field_bits);
            }
        }
    }

    pub fn into_result(mut self) -> SimulationResult {
        let ids = self.graph.node_ids();
        for (idx, t) in self.traffic.iter_mut().enumerate() {
            t.bfs_origins = self.broadcast_origins[idx].len() as u64;
        }
        let post_termination_tuples = self.outgoing().iter().map(|m| m.len() as u64).sum();
        let rounds_executed = self.round().unwrap_or(0);
        SimulationResult {
            variant: self.variant,
            schedule: self.schedule,
            node_count: ids.len(),
            rounds_executed,
            final_values: self
                .states
                .iter()
                .map(|s| (s.id, FinalValues { e: s.ecc, d: s.diam, r: s.radius }))
                .collect(),
            detection: by_id(ids, self.detection),
            traffic: by_id(ids, self.traffic),
            wake_rounds: ids
                .iter()
                .zip(self.wake_rounds)
                .filter_map(|(&id, w)| w.map(|w| (id, w)))
                .collect(),
            peak_stored: by_id(ids, self.peak_stored),
            trace: self.trace,
            deliveries: self.deliveries,
            late_deliveries: self.late,
            post_termination_tuples,
        }
    }
}

fn by_id<T>(ids: &[NodeId], values: Vec<T>) -> BTreeMap<NodeId, T> {
    ids.iter().copied().zip(values).collect()
}

fn bfs_origins(m: &MessageSet) -> BTreeSet<NodeId> {
    m.iter()
        .filter_map(|t| match t {
            Tuple::Bfs { origin, .. } => Some(*origin),
            _ => None,
        })
        .collect()
}

/// Runs the protocol on `g` until every node has terminated.
pub fn run(
    g: &Graph,
    schedule: &WakeSchedule,
    variant: Variant,
    probes: &[NodeId],
    max_rounds: u32,
) -> Result<SimulationResult, SimError> {
    if max_rounds == 0 {
        return Err(SimError::ZeroRoundLimit);
    }
    let mut sim = Simulation::new(g, schedule, variant, probes)?;
    sim.step()?;
    while !sim.is_done() {
        if sim.next_round > max_rounds {
            return Err(SimError::Runaway(max_rounds));
        }
        sim.step()?;
    }
    Ok(sim.into_result())
}

/// Global termination bound: max-wake + 3D + 2R + 3.
pub fn round_cap(schedule: &WakeSchedule, oracle: &OracleMetrics) -> u32 {
    schedule.max_wake() + 3 * oracle.diameter + 2 * oracle.radius + 3
}

/// The nodes whose Bfs flood has reached `i` by the end of round `r`: every
/// `j` within distance `r` that was active after round `r - dist(i, j)`.
pub fn visibility_set(
    oracle: &OracleMetrics,
    wake_rounds: &BTreeMap<NodeId, u32>,
    i: NodeId,
    r: u32,
) -> BTreeSet<NodeId> {
    oracle
        .node_ids()
        .iter()
        .copied()
        .filter(|&j| {
            let d = oracle.dist(i, j);
            d <= r && wake_rounds.get(&j).is_some_and(|&w| w <= r - d)
        })
        .collect()
}

/// Complexity summary of a completed run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub per_node: BTreeMap<NodeId, NodeTraffic>,
    pub bfs_link_tuples: u64,
    pub diam_link_tuples: u64,
    pub rad_link_tuples: u64,
    pub total_link_tuples: u64,
    pub bits_per_field: u64,
    pub estimated_bits: u64,
}

pub fn accounting(g: &Graph, result: &SimulationResult) -> ComplexityReport {
    let (mut bfs, mut diam, mut rad) = (0, 0, 0);
    for (&id, t) in &result.traffic {
        let deg = g.degree(id) as u64;
        bfs += t.bfs_broadcasts * deg;
        diam += t.diam_broadcasts * deg;
        rad += t.rad_broadcasts * deg;
    }
    ComplexityReport {
        per_node: result.traffic.clone(),
        bfs_link_tuples: bfs,
        diam_link_tuples: diam,
        rad_link_tuples: rad,
        total_link_tuples: result.traffic.values().map(|t| t.link_tuples).sum(),
        bits_per_field: field_bits(result.node_count),
        estimated_bits: result.traffic.values().map(|t| t.bits).sum(),
    }
}
