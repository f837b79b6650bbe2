//! Cross-checks of completed runs against the brute-force oracle, the
//! per-node round bounds, the storage variant and the message accounting.
//!
//! Checkers never fail; they return reports whose `passed()` says whether
//! every hard assertion held.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::graph::{oracle_metrics, random_connected_graph, Graph, NodeId, OracleMetrics};
use crate::protocol::{ExtU32, MessageSet, Status, Variant};
use crate::simulator::{self, round_cap, visibility_set, Simulation, SimulationResult, WakeSchedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    Eccentricity,
    Diameter,
    Radius,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SafetyViolation {
    pub node: NodeId,
    pub round: u32,
    pub variable: Variable,
    pub got: ExtU32,
    pub expected: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SafetyReport {
    /// Trace entries at which at least one predicate held.
    pub checked: usize,
    pub violations: Vec<SafetyViolation>,
}

impl SafetyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Whenever a convergence predicate holds in the trace, the corresponding
/// estimate must equal the oracle value. Predicates are re-evaluated from the
/// recorded trace values, so the trace should cover every node.
pub fn check_criteria_safety(result: &SimulationResult, oracle: &OracleMetrics) -> SafetyReport {
    let mut report = SafetyReport::default();
    for entry in &result.trace {
        let mut push = |variable, got: ExtU32, expected: u32| {
            if got != ExtU32::Finite(expected) {
                report.violations.push(SafetyViolation {
                    node: entry.node,
                    round: entry.round,
                    variable,
                    got,
                    expected,
                });
            }
        };
        let c = entry.quiet;
        let mut any = false;
        if c >= 2 {
            any = true;
            push(Variable::Eccentricity, entry.ecc.into(), oracle.ecc(entry.node));
        }
        if c >= 2 && c > entry.diam {
            any = true;
            push(Variable::Diameter, entry.diam.into(), oracle.diameter);
        }
        if let ExtU32::Finite(r) = entry.radius {
            if u64::from(c) >= 2 * u64::from(r) {
                any = true;
                push(Variable::Radius, entry.radius, oracle.radius);
            }
        }
        if any {
            report.checked += 1;
        }
    }
    report
}

/// Final (e, d, r) at every node must equal (ecc(i), D, R).
pub fn check_final_values(result: &SimulationResult, oracle: &OracleMetrics) -> SafetyReport {
    let last = result.rounds_executed;
    let mut report = SafetyReport::default();
    for (&node, v) in &result.final_values {
        report.checked += 1;
        let expected = [
            (Variable::Eccentricity, ExtU32::Finite(v.e), oracle.ecc(node)),
            (Variable::Diameter, ExtU32::Finite(v.d), oracle.diameter),
            (Variable::Radius, v.r, oracle.radius),
        ];
        for (variable, got, want) in expected {
            if got != ExtU32::Finite(want) {
                report.violations.push(SafetyViolation {
                    node,
                    round: last,
                    variable,
                    got,
                    expected: want,
                });
            }
        }
    }
    report
}

/// A round bound being checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    /// ecc detection <= D + ecc(i) + 2
    Eccentricity,
    /// diam detection <= 2D + ecc(i) + 2
    Diameter,
    /// diam detection <= 2D + ecc(i) + 1; reported, not enforced
    DiameterTight,
    /// rad detection <= D + ecc(i) + 2R
    Radius,
    /// ecc detection <= 2D + 2
    CorollaryEccentricity,
    /// diam detection <= 3D + 1
    CorollaryDiameter,
    /// rad detection <= 2D + 2R
    CorollaryRadius,
}

impl Claim {
    pub const ALL: [Claim; 7] = [
        Claim::Eccentricity,
        Claim::Diameter,
        Claim::DiameterTight,
        Claim::Radius,
        Claim::CorollaryEccentricity,
        Claim::CorollaryDiameter,
        Claim::CorollaryRadius,
    ];

    pub fn is_hard(self) -> bool {
        self != Claim::DiameterTight
    }

    pub fn is_corollary(self) -> bool {
        matches!(
            self,
            Claim::CorollaryEccentricity | Claim::CorollaryDiameter | Claim::CorollaryRadius
        )
    }

    pub fn bound(self, diameter: u32, radius: u32, ecc: u32) -> u32 {
        let (d, r, e) = (diameter, radius, ecc);
        match self {
            Claim::Eccentricity => d + e + 2,
            Claim::Diameter => 2 * d + e + 2,
            Claim::DiameterTight => 2 * d + e + 1,
            Claim::Radius => d + e + 2 * r,
            Claim::CorollaryEccentricity => 2 * d + 2,
            Claim::CorollaryDiameter => 3 * d + 1,
            Claim::CorollaryRadius => 2 * d + 2 * r,
        }
    }

    fn observed(self, det: &simulator::Detection) -> Option<u32> {
        match self {
            Claim::Eccentricity | Claim::CorollaryEccentricity => det.ecc_round,
            Claim::Diameter | Claim::DiameterTight | Claim::CorollaryDiameter => det.diam_round,
            Claim::Radius | Claim::CorollaryRadius => det.rad_round,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeBound {
    pub node: NodeId,
    pub claim: Claim,
    pub bound: u32,
    pub observed: Option<u32>,
    /// bound - observed; negative when violated or never detected.
    pub slack: i64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimSummary {
    pub claim: Claim,
    pub hard: bool,
    pub applicable: bool,
    pub pass: bool,
    pub min_slack: Option<i64>,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub nodes: Vec<NodeBound>,
    pub claims: Vec<ClaimSummary>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| !c.hard || c.pass)
    }

    pub fn claim(&self, claim: Claim) -> Option<&ClaimSummary> {
        self.claims.iter().find(|c| c.claim == claim)
    }

    pub fn node(&self, node: NodeId, claim: Claim) -> Option<&NodeBound> {
        self.nodes.iter().find(|b| b.node == node && b.claim == claim)
    }
}

/// Checks every node's detection rounds against the per-node bounds and,
/// when all scheduled wakes are at round 0, the global corollary bounds.
/// Rounds count from the first activation at round 0.
pub fn check_bounds(result: &SimulationResult, oracle: &OracleMetrics) -> BoundReport {
    let corollary_applies = result.schedule.all_at_zero();
    let mut nodes = Vec::new();
    let mut claims = Vec::new();
    for claim in Claim::ALL {
        let applicable = !claim.is_corollary() || corollary_applies;
        let mut min_slack: Option<i64> = None;
        let mut violations = 0;
        if applicable {
            for (&node, det) in &result.detection {
                let bound = claim.bound(oracle.diameter, oracle.radius, oracle.ecc(node));
                let observed = claim.observed(det);
                let slack = match observed {
                    Some(o) => i64::from(bound) - i64::from(o),
                    None => -1,
                };
                let pass = observed.is_some() && slack >= 0;
                if !pass {
                    violations += 1;
                }
                min_slack = Some(min_slack.map_or(slack, |m| m.min(slack)));
                nodes.push(NodeBound { node, claim, bound, observed, slack, pass });
            }
        }
        claims.push(ClaimSummary {
            claim,
            hard: claim.is_hard(),
            applicable,
            pass: violations == 0,
            min_slack,
            violations,
        });
    }
    BoundReport { nodes, claims }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceMismatch {
    pub round: u32,
    pub node: NodeId,
    pub what: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    pub rounds_compared: u32,
    pub mismatch: Option<EquivalenceMismatch>,
    pub peak_stored_full: BTreeMap<NodeId, usize>,
    pub peak_stored_sliding: BTreeMap<NodeId, usize>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.equivalent
    }

    pub fn max_peak_sliding(&self) -> usize {
        self.peak_stored_sliding.values().copied().max().unwrap_or(0)
    }
}

/// Runs the full-set and sliding-window variants in lockstep and compares
/// every node's (e, d, r, c, s) and outgoing message after every round.
pub fn check_variant_equivalence(
    g: &Graph,
    schedule: &WakeSchedule,
    max_rounds: u32,
) -> Result<EquivalenceReport, SimError> {
    let mut full = Simulation::new(g, schedule, Variant::FullSet, &[])?;
    let mut sliding = Simulation::new(g, schedule, Variant::SlidingWindow, &[])?;
    let (rounds, mismatch) = loop {
        full.step()?;
        sliding.step()?;
        let round = full.round().unwrap_or(0);
        if let Some(m) = compare_states(round, &full, &sliding) {
            break (round, Some(m));
        }
        match (full.is_done(), sliding.is_done()) {
            (true, true) => break (round, None),
            (false, false) => {}
            _ => {
                break (
                    round,
                    Some(EquivalenceMismatch {
                        round,
                        node: g.id_at(0),
                        what: "global termination differs".into(),
                    }),
                )
            }
        }
        if round >= max_rounds {
            return Err(SimError::Runaway(max_rounds));
        }
    };
    let full = full.into_result();
    let sliding = sliding.into_result();
    Ok(EquivalenceReport {
        equivalent: mismatch.is_none(),
        rounds_compared: rounds,
        mismatch,
        peak_stored_full: full.peak_stored,
        peak_stored_sliding: sliding.peak_stored,
    })
}

fn compare_states(round: u32, a: &Simulation<'_>, b: &Simulation<'_>) -> Option<EquivalenceMismatch> {
    let out_a: Vec<MessageSet> = a.outgoing();
    let out_b: Vec<MessageSet> = b.outgoing();
    for (idx, (x, y)) in a.states().iter().zip(b.states()).enumerate() {
        let what = if (x.ecc, x.diam, x.radius, x.quiet, x.status)
            != (y.ecc, y.diam, y.radius, y.quiet, y.status)
        {
            Some(format!(
                "state (e,d,r,c,s) full=({},{},{},{},{}) sliding=({},{},{},{},{})",
                x.ecc, x.diam, x.radius, x.quiet, x.status, y.ecc, y.diam, y.radius, y.quiet, y.status
            ))
        } else if x.outbox != y.outbox || out_a[idx] != out_b[idx] {
            Some("outgoing message differs".to_string())
        } else {
            None
        };
        if let Some(what) = what {
            return Some(EquivalenceMismatch { round, node: x.id, what });
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowViolation {
    pub origin: NodeId,
    pub receiver: NodeId,
    pub round: u32,
    /// Activation round of the origin plus its distance to the receiver.
    pub earliest: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowReport {
    pub checked: usize,
    /// Number of deliveries at offset 0, 1 and 2 from the earliest round.
    pub offsets: [usize; 3],
    pub violations: Vec<WindowViolation>,
}

impl WindowReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every Bfs tuple from origin `i` must reach `j` in round `w(i) + dist(i, j)`
/// plus 0, 1 or 2, where `w(i)` is the round `i` became active.
pub fn check_arrival_window(result: &SimulationResult, oracle: &OracleMetrics) -> WindowReport {
    let mut report = WindowReport::default();
    for d in &result.deliveries {
        report.checked += 1;
        let earliest = result
            .wake_rounds
            .get(&d.origin)
            .map(|&w| w + oracle.dist(d.origin, d.receiver));
        let offset = earliest.and_then(|e| d.round.checked_sub(e));
        match offset {
            Some(o @ 0..=2) => report.offsets[o as usize] += 1,
            _ => report.violations.push(WindowViolation {
                origin: d.origin,
                receiver: d.receiver,
                round: d.round,
                earliest: earliest.unwrap_or(u32::MAX),
            }),
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccountingIssue {
    pub node: NodeId,
    pub what: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccountingReport {
    pub issues: Vec<AccountingIssue>,
    pub max_diam_broadcasts: u64,
    pub max_rad_broadcasts: u64,
}

impl AccountingReport {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Each node must broadcast every one of the |V| origins exactly once and at
/// most D Diam tuples, and at most ecc(i) - R + 1 Rad tuples.
pub fn check_accounting(result: &SimulationResult, oracle: &OracleMetrics) -> AccountingReport {
    let n = result.node_count as u64;
    let mut report = AccountingReport::default();
    for (&node, t) in &result.traffic {
        let mut issue = |what: String| report.issues.push(AccountingIssue { node, what });
        if t.bfs_origins != n {
            issue(format!("broadcast {} distinct Bfs origins, expected {n}", t.bfs_origins));
        }
        if t.bfs_broadcasts != n {
            issue(format!("broadcast {} Bfs tuples, expected {n}", t.bfs_broadcasts));
        }
        if t.diam_broadcasts > u64::from(oracle.diameter) {
            issue(format!(
                "broadcast {} Diam tuples, more than D={}",
                t.diam_broadcasts, oracle.diameter
            ));
        }
        let rad_cap = u64::from(oracle.ecc(node) - oracle.radius + 1);
        if t.rad_broadcasts > rad_cap {
            issue(format!(
                "broadcast {} Rad tuples, more than ecc-R+1={rad_cap}",
                t.rad_broadcasts
            ));
        }
        report.max_diam_broadcasts = report.max_diam_broadcasts.max(t.diam_broadcasts);
        report.max_rad_broadcasts = report.max_rad_broadcasts.max(t.rad_broadcasts);
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminationReport {
    pub all_terminated: bool,
    pub last_termination: Option<u32>,
    pub round_cap: u32,
    pub within_cap: bool,
    pub post_termination_tuples: u64,
    pub late_deliveries: usize,
    pub non_redundant_late_deliveries: usize,
    /// Nodes whose termination round is not one past both criteria.
    pub rule_violations: Vec<NodeId>,
    /// (node, neighbor) pairs where the neighbor met both criteria more than
    /// one round after the node did.
    pub propagation_violations: Vec<(NodeId, NodeId)>,
}

impl TerminationReport {
    pub fn passed(&self) -> bool {
        self.all_terminated
            && self.within_cap
            && self.post_termination_tuples == 0
            && self.non_redundant_late_deliveries == 0
            && self.rule_violations.is_empty()
            && self.propagation_violations.is_empty()
    }
}

pub fn check_termination(
    g: &Graph,
    result: &SimulationResult,
    oracle: &OracleMetrics,
) -> TerminationReport {
    let cap = round_cap(&result.schedule, oracle);
    let last = result.last_termination();
    let criteria_round = |det: &simulator::Detection| match (det.diam_round, det.rad_round) {
        (Some(a), Some(b)) => Some(a.max(b)),
        _ => None,
    };
    let rule_violations = result
        .detection
        .iter()
        .filter(|(_, det)| det.termination_round != criteria_round(det).map(|r| r + 1))
        .map(|(&id, _)| id)
        .collect();
    let mut propagation_violations = Vec::new();
    for (&id, det) in &result.detection {
        let Some(t) = criteria_round(det) else { continue };
        for nb in g.neighbors(id) {
            let ok = result
                .detection
                .get(&nb)
                .and_then(criteria_round)
                .is_some_and(|tn| tn <= t + 1);
            if !ok {
                propagation_violations.push((id, nb));
            }
        }
    }
    TerminationReport {
        all_terminated: last.is_some(),
        last_termination: last,
        round_cap: cap,
        within_cap: last.is_some_and(|l| l <= cap),
        post_termination_tuples: result.post_termination_tuples,
        late_deliveries: result.late_deliveries.len(),
        non_redundant_late_deliveries: result.late_deliveries.iter().filter(|l| !l.redundant).count(),
        rule_violations,
        propagation_violations,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceIssue {
    pub node: NodeId,
    pub round: u32,
    pub what: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    pub entries: usize,
    pub issues: Vec<TraceIssue>,
}

impl TraceReport {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Per-node monotonicity and counter rules over consecutive trace entries:
/// e and d never decrease, r never increases, status only moves forward,
/// d >= e, and for an active node c resets exactly when new origins arrive,
/// otherwise grows by one, and never resets once it has reached 2.
pub fn check_trace_invariants(result: &SimulationResult) -> TraceReport {
    let mut by_node: BTreeMap<NodeId, Vec<&simulator::RoundTraceEntry>> = BTreeMap::new();
    for e in &result.trace {
        by_node.entry(e.node).or_default().push(e);
    }
    let mut report = TraceReport { entries: result.trace.len(), issues: Vec::new() };
    for (node, entries) in by_node {
        let mut reached_two = false;
        for w in entries.windows(2) {
            let (prev, cur) = (w[0], w[1]);
            let mut issue = |what: &str| {
                report.issues.push(TraceIssue { node, round: cur.round, what: what.to_string() })
            };
            if cur.ecc < prev.ecc {
                issue("e decreased");
            }
            if cur.diam < prev.diam {
                issue("d decreased");
            }
            if cur.radius > prev.radius {
                issue("r increased");
            }
            if cur.status < prev.status {
                issue("status moved backwards");
            }
            if cur.diam < cur.ecc {
                issue("d < e");
            }
            if prev.status == Status::Active && cur.status != Status::Quiescent {
                let expected = if cur.new_bfs > 0 { 0 } else { prev.quiet + 1 };
                if cur.quiet != expected {
                    issue("c did not follow the reset/increment rule");
                }
                if (reached_two || prev.quiet >= 2) && cur.quiet != prev.quiet + 1 {
                    issue("c reset after reaching 2");
                }
            }
            reached_two |= prev.quiet >= 2;
        }
    }
    report
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisibilityReport {
    pub checked: usize,
    pub mismatches: Vec<(NodeId, u32)>,
}

impl VisibilityReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Steps a full-set run and compares every node's known-origin set after
/// every round with the area of visibility derived from the oracle distances
/// and the recorded activation rounds.
pub fn check_visibility(
    g: &Graph,
    schedule: &WakeSchedule,
    oracle: &OracleMetrics,
    max_rounds: u32,
) -> Result<VisibilityReport, SimError> {
    let mut sim = Simulation::new(g, schedule, Variant::FullSet, &[])?;
    let mut snapshots: Vec<(u32, Vec<BTreeSet<NodeId>>)> = Vec::new();
    loop {
        sim.step()?;
        let round = sim.round().unwrap_or(0);
        snapshots.push((
            round,
            sim.states()
                .iter()
                .map(|s| s.known.as_full().cloned().unwrap_or_default())
                .collect(),
        ));
        if sim.is_done() {
            break;
        }
        if round >= max_rounds {
            return Err(SimError::Runaway(max_rounds));
        }
    }
    let result = sim.into_result();
    let mut report = VisibilityReport::default();
    for (round, sets) in snapshots {
        for (idx, known) in sets.iter().enumerate() {
            let id = g.id_at(idx);
            report.checked += 1;
            if *known != visibility_set(oracle, &result.wake_rounds, id, round) {
                report.mismatches.push((id, round));
            }
        }
    }
    Ok(report)
}

/// Everything checked for one (graph, schedule) pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub nodes: usize,
    pub edges: usize,
    pub diameter: u32,
    pub radius: u32,
    pub rounds_executed: u32,
    pub safety: SafetyReport,
    pub final_values: SafetyReport,
    pub bounds: BoundReport,
    pub equivalence: EquivalenceReport,
    pub arrival_window: WindowReport,
    pub accounting: AccountingReport,
    pub termination: TerminationReport,
    pub trace: TraceReport,
    pub visibility: VisibilityReport,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    /// Names of the checks whose hard assertions failed.
    pub fn failures(&self) -> Vec<&'static str> {
        let checks = [
            ("criteria_safety", self.safety.passed()),
            ("final_values", self.final_values.passed()),
            ("bounds", self.bounds.passed()),
            ("variant_equivalence", self.equivalence.passed()),
            ("arrival_window", self.arrival_window.passed()),
            ("accounting", self.accounting.passed()),
            ("termination", self.termination.passed()),
            ("trace_invariants", self.trace.passed()),
            ("visibility", self.visibility.passed()),
        ];
        checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect()
    }
}

/// Deliberate corruptions used to self-test the checkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Corruption {
    /// Decrement d in the trace entry at some node's diam detection round.
    DiameterAtDetection,
    /// Push one detection round far past its bound.
    LateDetection,
    /// Shift one Bfs delivery three rounds later.
    ShiftedDelivery,
    /// Drop one broadcast origin from the accounting.
    MissingOrigin,
    /// Pretend a tuple was still on the wire after global termination.
    PostTerminationTraffic,
}

impl Corruption {
    pub const ALL: [Corruption; 5] = [
        Corruption::DiameterAtDetection,
        Corruption::LateDetection,
        Corruption::ShiftedDelivery,
        Corruption::MissingOrigin,
        Corruption::PostTerminationTraffic,
    ];
}

/// Applies `kind` to the first node (or delivery) where it makes sense.
pub fn corrupt(result: &mut SimulationResult, kind: Corruption) {
    match kind {
        Corruption::DiameterAtDetection => {
            let target = result
                .detection
                .iter()
                .find_map(|(&id, d)| d.diam_round.map(|r| (id, r)));
            if let Some((id, round)) = target {
                if let Some(e) = result
                    .trace
                    .iter_mut()
                    .find(|e| e.node == id && e.round == round)
                {
                    e.diam = e.diam.saturating_sub(1);
                }
            }
        }
        Corruption::LateDetection => {
            if let Some(d) = result.detection.values_mut().next() {
                d.ecc_round = d.ecc_round.map(|r| r + 10_000);
            }
        }
        Corruption::ShiftedDelivery => {
            if let Some(d) = result.deliveries.first_mut() {
                d.round += 3;
            }
        }
        Corruption::MissingOrigin => {
            if let Some(t) = result.traffic.values_mut().next() {
                t.bfs_origins = t.bfs_origins.saturating_sub(1);
            }
        }
        Corruption::PostTerminationTraffic => result.post_termination_tuples += 1,
    }
}

/// Runs the simulation with every node probed and applies all checks.
pub fn verify_run(
    g: &Graph,
    schedule: &WakeSchedule,
    max_rounds: u32,
) -> Result<(SimulationResult, VerificationReport), SimError> {
    verify_with(g, schedule, max_rounds, None)
}

/// Like [`verify_run`], but corrupts the result before checking it.
pub fn verify_with(
    g: &Graph,
    schedule: &WakeSchedule,
    max_rounds: u32,
    corruption: Option<Corruption>,
) -> Result<(SimulationResult, VerificationReport), SimError> {
    let oracle = oracle_metrics(g);
    let mut result = simulator::run(g, schedule, Variant::FullSet, g.node_ids(), max_rounds)?;
    if let Some(kind) = corruption {
        corrupt(&mut result, kind);
    }
    let report = VerificationReport {
        nodes: g.node_count(),
        edges: g.edge_count(),
        diameter: oracle.diameter,
        radius: oracle.radius,
        rounds_executed: result.rounds_executed,
        safety: check_criteria_safety(&result, &oracle),
        final_values: check_final_values(&result, &oracle),
        bounds: check_bounds(&result, &oracle),
        equivalence: check_variant_equivalence(g, schedule, max_rounds)?,
        arrival_window: check_arrival_window(&result, &oracle),
        accounting: check_accounting(&result, &oracle),
        termination: check_termination(g, &result, &oracle),
        trace: check_trace_invariants(&result),
        visibility: check_visibility(g, schedule, &oracle, max_rounds)?,
    };
    Ok((result, report))
}

/// One randomized verification input.
#[derive(Debug, Clone)]
pub struct SuiteCase {
    pub index: usize,
    pub nodes: usize,
    pub edge_prob: f64,
    pub graph_seed: u64,
    pub graph: Graph,
    pub schedule: WakeSchedule,
}

/// Deterministic randomized inputs: `count` connected graphs with 2..=max_n
/// nodes and edge probabilities spread over [0.02, 0.6], each with one to
/// five initiators woken at staggered rounds.
pub fn random_suite(count: usize, max_n: usize, seed: u64) -> Vec<SuiteCase> {
    let max_n = max_n.max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|index| {
            let nodes = rng.gen_range(2..=max_n);
            let edge_prob = rng.gen_range(0.02..=0.6);
            let graph_seed = rng.gen();
            let graph = random_connected_graph(nodes, edge_prob, graph_seed)
                .expect("suite parameters are valid");
            let initiators = rng.gen_range(1..=nodes.min(5));
            let spread = (nodes / 3).max(1) as u32;
            let entries: Vec<(NodeId, u32)> = (0..initiators)
                .map(|_| {
                    let id = graph.id_at(rng.gen_range(0..nodes));
                    (id, rng.gen_range(0..=spread))
                })
                .collect();
            let schedule = WakeSchedule::new(entries).expect("at least one initiator");
            SuiteCase { index, nodes, edge_prob, graph_seed, graph, schedule }
        })
        .collect()
}
