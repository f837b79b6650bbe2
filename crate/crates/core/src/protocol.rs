//! Per-node state machine: message generation, state transition, local
//! convergence predicates and the termination rule.
//!
//! A node floods a `Bfs` tuple for its own id when it wakes and relays every
//! origin it has not seen before with the hop count incremented. The largest
//! hop count seen is its eccentricity estimate. Diameter estimates only grow
//! and are gossiped with `Diam` tuples; radius estimates only shrink and are
//! gossiped with `Rad` tuples, seeded from the node's own eccentricity once it
//! has gone two rounds without learning a new origin.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ProtocolError;
use crate::graph::NodeId;

/// A tuple carried in a message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tuple {
    Bfs { origin: NodeId, hops: u32 },
    Diam { value: u32 },
    Rad { value: u32 },
    /// Wake-up from the environment. Never sent over a link.
    EnvWake,
}

impl Tuple {
    pub fn bfs(origin: impl Into<NodeId>, hops: u32) -> Self {
        Tuple::Bfs { origin: origin.into(), hops }
    }
}

/// A message: a set of tuples. The empty set means no message.
pub type MessageSet = BTreeSet<Tuple>;

/// Non-negative integer extended with +infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtU32 {
    Finite(u32),
    Infinite,
}

impl ExtU32 {
    pub fn finite(self) -> Option<u32> {
        match self {
            ExtU32::Finite(v) => Some(v),
            ExtU32::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtU32::Finite(_))
    }
}

impl fmt::Display for ExtU32 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtU32::Finite(v) => v.fmt(f),
            ExtU32::Infinite => f.write_str("inf"),
        }
    }
}

impl From<u32> for ExtU32 {
    fn from(v: u32) -> Self {
        ExtU32::Finite(v)
    }
}

impl Serialize for ExtU32 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtU32::Finite(v) => s.serialize_u32(*v),
            ExtU32::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtU32 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(ExtU32::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(ExtU32::Infinite),
            Raw::Str(s) => s
                .parse()
                .map(ExtU32::Finite)
                .map_err(|_| serde::de::Error::custom(format!("expected integer or \"inf\", got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Quiescent,
    Active,
    Terminated,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Quiescent => "quiescent",
            Status::Active => "active",
            Status::Terminated => "terminated",
        })
    }
}

/// Which representation a node uses for the origins it has already seen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Keep every origin ever received.
    #[default]
    FullSet,
    /// Keep only the origins absorbed in the last two transitions.
    SlidingWindow,
}

/// Origins a node has already absorbed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KnownIds {
    All(BTreeSet<NodeId>),
    Window {
        previous: BTreeSet<NodeId>,
        latest: BTreeSet<NodeId>,
    },
}

impl KnownIds {
    pub fn new(variant: Variant) -> Self {
        match variant {
            Variant::FullSet => KnownIds::All(BTreeSet::new()),
            Variant::SlidingWindow => KnownIds::Window {
                previous: BTreeSet::new(),
                latest: BTreeSet::new(),
            },
        }
    }

    pub fn contains(&self, id: NodeId) -> bool {
        match self {
            KnownIds::All(set) => set.contains(&id),
            KnownIds::Window { previous, latest } => previous.contains(&id) || latest.contains(&id),
        }
    }

    fn absorb(&mut self, origins: BTreeSet<NodeId>) {
        match self {
            KnownIds::All(set) => set.extend(origins),
            KnownIds::Window { previous, latest } => {
                *previous = std::mem::replace(latest, origins);
            }
        }
    }

    /// Number of ids currently held in memory.
    pub fn stored(&self) -> usize {
        match self {
            KnownIds::All(set) => set.len(),
            KnownIds::Window { previous, latest } => previous.len() + latest.len(),
        }
    }

    /// The full origin set, if this is the full-set representation.
    pub fn as_full(&self) -> Option<&BTreeSet<NodeId>> {
        match self {
            KnownIds::All(set) => Some(set),
            KnownIds::Window { .. } => None,
        }
    }
}

/// One node's protocol variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeState {
    pub id: NodeId,
    /// Eccentricity estimate (lower bound).
    pub ecc: u32,
    /// Diameter estimate (lower bound).
    pub diam: u32,
    /// Radius estimate (upper bound).
    pub radius: ExtU32,
    pub status: Status,
    pub known: KnownIds,
    /// Consecutive rounds in which no new BFS origin arrived.
    pub quiet: u32,
    /// Tuples to broadcast next round.
    pub outbox: MessageSet,
}

impl NodeState {
    pub fn new(id: NodeId, variant: Variant) -> Self {
        NodeState {
            id,
            ecc: 0,
            diam: 0,
            radius: ExtU32::Infinite,
            status: Status::Quiescent,
            known: KnownIds::new(variant),
            quiet: 0,
            outbox: MessageSet::new(),
        }
    }

    /// The message sent to every neighbor this round.
    pub fn message(&self) -> MessageSet {
        message_generation(self)
    }

    /// Applies one round's transition to the union `m` of received messages.
    pub fn apply(&self, m: &MessageSet) -> Result<NodeState, ProtocolError> {
        let mut next = self.clone();
        next.advance(m)?;
        Ok(next)
    }

    /// In-place form of [`NodeState::apply`].
    pub fn advance(&mut self, m: &MessageSet) -> Result<(), ProtocolError> {
        if self.status == Status::Terminated {
            return Err(ProtocolError::TransitionAfterTermination(self.id));
        }
        if self.status == Status::Quiescent && m.is_empty() {
            return Ok(());
        }

        let mut fresh: MessageSet = m
            .iter()
            .filter_map(|t| match *t {
                Tuple::Bfs { origin, hops } if !self.known.contains(origin) => {
                    Some(Tuple::Bfs { origin, hops: hops + 1 })
                }
                _ => None,
            })
            .collect();
        let max_hops = fresh
            .iter()
            .filter_map(|t| match t {
                Tuple::Bfs { hops, .. } => Some(*hops),
                _ => None,
            })
            .max();
        if self.status == Status::Quiescent {
            fresh.insert(Tuple::Bfs { origin: self.id, hops: 0 });
        }

        let quiet = if fresh.is_empty() { self.quiet + 1 } else { 0 };
        let ecc = max_hops.map_or(self.ecc, |h| self.ecc.max(h));
        let diam = m
            .iter()
            .filter_map(|t| match t {
                Tuple::Diam { value } => Some(*value),
                _ => None,
            })
            .fold(self.diam.max(ecc), u32::max);
        let mut radius = m
            .iter()
            .filter_map(|t| match t {
                Tuple::Rad { value } => Some(ExtU32::Finite(*value)),
                _ => None,
            })
            .fold(self.radius, ExtU32::min);
        if quiet == 2 {
            radius = radius.min(ExtU32::Finite(ecc));
        }

        self.known.absorb(
            fresh
                .iter()
                .filter_map(|t| match t {
                    Tuple::Bfs { origin, .. } => Some(*origin),
                    _ => None,
                })
                .collect(),
        );

        let mut outbox = fresh;
        if diam > self.diam {
            outbox.insert(Tuple::Diam { value: diam });
        }
        if radius < self.radius {
            if let ExtU32::Finite(value) = radius {
                outbox.insert(Tuple::Rad { value });
            }
        }

        self.ecc = ecc;
        self.diam = diam;
        self.radius = radius;
        self.status = Status::Active;
        self.quiet = quiet;
        self.outbox = outbox;
        Ok(())
    }

    /// Number of `Bfs` tuples in the outbox, i.e. origins absorbed in the last
    /// transition.
    pub fn new_origin_count(&self) -> usize {
        self.outbox
            .iter()
            .filter(|t| matches!(t, Tuple::Bfs { .. }))
            .count()
    }

    pub fn terminate(&mut self) {
        self.status = Status::Terminated;
    }

    pub fn ecc_converged(&self) -> bool {
        ecc_converged(self)
    }

    pub fn diam_converged(&self) -> bool {
        diam_converged(self)
    }

    pub fn rad_converged(&self) -> bool {
        rad_converged(self)
    }
}

/// Outgoing message of a node; identical on every incident link.
pub fn message_generation(state: &NodeState) -> MessageSet {
    match state.status {
        Status::Terminated => MessageSet::new(),
        _ => state.outbox.clone(),
    }
}

/// Transition on the collection of messages received this round (neighbor
/// messages plus possibly an environment wake). Senders are not
/// distinguished; the messages are merged into one set first.
pub fn state_transition<'a, I>(state: &NodeState, received: I) -> Result<NodeState, ProtocolError>
where
    I: IntoIterator<Item = &'a MessageSet>,
{
    let merged: MessageSet = received.into_iter().flatten().copied().collect();
    state.apply(&merged)
}

pub fn ecc_converged(state: &NodeState) -> bool {
    state.quiet >= 2
}

pub fn diam_converged(state: &NodeState) -> bool {
    state.quiet >= 2 && state.quiet > state.diam
}

pub fn rad_converged(state: &NodeState) -> bool {
    match state.radius {
        ExtU32::Finite(r) => u64::from(state.quiet) >= 2 * u64::from(r),
        ExtU32::Infinite => false,
    }
}

/// True once both the diameter and radius criteria hold and at least one
/// further round has run since they first held together.
pub fn should_terminate(state: &NodeState, rounds_since_both_criteria: u32) -> bool {
    diam_converged(state) && rad_converged(state) && rounds_since_both_criteria >= 1
}
