//! Path-vector routing engines over a broadcast medium.
//!
//! Three protocols share one routing-table core and one validation
//! pipeline:
//!
//! * [`bgp`] — the stateless baseline: every hop appends a per-hop signed
//!   statement. Vulnerable to route truncation (an attacker keeps the
//!   origin's statement, drops the middle, and re-signs as itself).
//! * [`sbgp`] — the stateful hardening: statements name their recipient, so
//!   each node must emit one update per eligible neighbor.
//! * [`ssbgp`] — the stateless hardening: the whole path is authenticated by
//!   one chain signature, which cannot be truncated without the dropped
//!   signers' private keys.
//!
//! Updates pass checks in a fixed order — format, loop, route quality,
//! timestamps, and signatures last — so malformed input never reaches
//! pairing arithmetic; an instrumentation counter makes that testable.

pub mod basesig;
pub mod bgp;
pub mod sbgp;
pub mod ssbgp;

use crate::ecs::PublicKey;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A node's identity: a short label. Public keys live in a [`KeyRegistry`]
/// keyed by these labels.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_string())
    }
}

/// Simulation time in milliseconds.
#[derive(
    Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Timestamp(pub u64);

impl Timestamp {
    pub fn millis(self) -> u64 {
        self.0
    }

    /// `self − earlier`, or `None` when `earlier` is in the future.
    pub fn delta_from(self, earlier: Timestamp) -> Option<u64> {
        self.0.checked_sub(earlier.0)
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}ms", self.0)
    }
}

/// Best route to one destination.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RouteInfo {
    pub next_hop: NodeId,
    pub metric: u32,
}

/// A (destination, next-hop, metric) row, the external view of a table
/// entry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RoutingTableEntry {
    pub destination: NodeId,
    pub next_hop: NodeId,
    pub metric: u32,
}

/// One best route per destination; replacement only on strict metric
/// improvement, ties keep the incumbent.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RoutingTable {
    entries: BTreeMap<NodeId, RouteInfo>,
}

impl RoutingTable {
    pub fn new() -> Self {
        RoutingTable::default()
    }

    pub fn get(&self, destination: &NodeId) -> Option<&RouteInfo> {
        self.entries.get(destination)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Would a route to `destination` with this metric be installed?
    /// True when the destination is new or the metric strictly improves.
    pub fn would_accept(&self, destination: &NodeId, metric: u32) -> bool {
        match self.entries.get(destination) {
            None => true,
            Some(existing) => metric < existing.metric,
        }
    }

    /// Install the route described by a full node path ending at this node:
    /// destination is the first element, next hop the second-to-last, metric
    /// the hop count. Returns whether the table changed.
    pub fn apply(&mut self, path: &[NodeId]) -> bool {
        if path.len() < 2 {
            return false;
        }
        let destination = path[0].clone();
        let next_hop = path[path.len() - 2].clone();
        let metric = (path.len() - 1) as u32;
        if !self.would_accept(&destination, metric) {
            return false;
        }
        self.entries
            .insert(destination, RouteInfo { next_hop, metric });
        true
    }

    pub fn entries(&self) -> impl Iterator<Item = RoutingTableEntry> + '_ {
        self.entries.iter().map(|(dest, info)| RoutingTableEntry {
            destination: dest.clone(),
            next_hop: info.next_hop.clone(),
            metric: info.metric,
        })
    }
}

/// Why an update was rejected; `position` is the 1-based index of the
/// offending entry, 0 for update-level failures.
#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
#[error("{kind} at position {position}")]
pub struct ValidationError {
    pub kind: ValidationKind,
    pub position: usize,
}

impl ValidationError {
    pub fn new(kind: ValidationKind, position: usize) -> Self {
        ValidationError { kind, position }
    }
}

/// The validation steps, in pipeline order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum ValidationKind {
    /// Structurally broken: empty, inconsistent hop chaining, unknown node.
    BadFormat,
    /// The update already contains this node, or repeats one.
    LoopDetected,
    /// The offered route does not strictly improve on the current one.
    NotBetter,
    /// A timestamp moved backwards or a delta exceeded the threshold.
    StaleTimestamp,
    /// A cryptographic check failed.
    BadSignature,
    /// A recipient-specific update named someone else.
    NotAddressedToMe,
}

impl ValidationKind {
    /// Stable snake_case name, used as the metrics key.
    pub fn as_str(&self) -> &'static str {
        match self {
            ValidationKind::BadFormat => "bad_format",
            ValidationKind::LoopDetected => "loop_detected",
            ValidationKind::NotBetter => "not_better",
            ValidationKind::StaleTimestamp => "stale_timestamp",
            ValidationKind::BadSignature => "bad_signature",
            ValidationKind::NotAddressedToMe => "not_addressed_to_me",
        }
    }
}

impl fmt::Display for ValidationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Static map from node labels to public keys. Every node is assumed to
/// hold a distinct key; the engines do not enforce that claim, the
/// verification equations simply fail when it is violated.
#[derive(Clone, Default, Debug)]
pub struct KeyRegistry {
    by_id: BTreeMap<NodeId, PublicKey>,
}

impl KeyRegistry {
    pub fn new() -> Self {
        KeyRegistry::default()
    }

    pub fn insert(&mut self, id: NodeId, key: PublicKey) {
        self.by_id.insert(id, key);
    }

    pub fn get(&self, id: &NodeId) -> Option<&PublicKey> {
        self.by_id.get(id)
    }

    pub fn contains(&self, id: &NodeId) -> bool {
        self.by_id.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }
}

/// Instrumentation counters shared by all engines.
#[derive(Clone, Copy, Default, Debug, PartialEq, Eq)]
pub struct EngineStats {
    /// Number of signature verifications performed (each one costs pairing
    /// arithmetic). Validation ordering is asserted against this counter:
    /// structurally bad updates must not move it.
    pub signature_checks: u64,
}

/// What to do with a data packet that arrived by broadcast.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ForwardDecision {
    Forward,
    Drop,
}

/// The broadcast forwarding rule: drop when this node is the destination's
/// terminus, when there is no route, or when the packet arrived from the
/// very node this table would forward it to (it is moving away from the
/// destination); forward otherwise.
pub fn forward_decision(
    table: &RoutingTable,
    self_id: &NodeId,
    packet_dest: &NodeId,
    packet_sender: &NodeId,
) -> ForwardDecision {
    if packet_dest == self_id {
        return ForwardDecision::Drop;
    }
    match table.get(packet_dest) {
        None => ForwardDecision::Drop,
        Some(info) if info.next_hop == *packet_sender => ForwardDecision::Drop,
        Some(_) => ForwardDecision::Forward,
    }
}

/// Errors raised while decoding protocol update wire formats.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WireError {
    #[error("input ends before the declared content")]
    Truncated,
    #[error("trailing bytes after the update")]
    Trailing,
    #[error("declared size is beyond protocol limits")]
    Oversized,
    #[error("identifier is not valid UTF-8")]
    BadId,
    #[error("signature point encoding is invalid")]
    BadPoint,
}

pub(crate) struct WireCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> WireCursor<'a> {
    pub(crate) fn new(bytes: &'a [u8]) -> Self {
        WireCursor { bytes, pos: 0 }
    }

    pub(crate) fn take<const N: usize>(&mut self) -> Result<[u8; N], WireError> {
        let slice = self.take_slice(N)?;
        let mut out = [0u8; N];
        out.copy_from_slice(slice);
        Ok(out)
    }

    pub(crate) fn take_slice(&mut self, n: usize) -> Result<&'a [u8], WireError> {
        let end = self.pos.checked_add(n).ok_or(WireError::Truncated)?;
        if end > self.bytes.len() {
            return Err(WireError::Truncated);
        }
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    pub(crate) fn take_id(&mut self) -> Result<NodeId, WireError> {
        let len = u16::from_be_bytes(self.take::<2>()?) as usize;
        let raw = self.take_slice(len)?;
        std::str::from_utf8(raw)
            .map(NodeId::new)
            .map_err(|_| WireError::BadId)
    }

    pub(crate) fn finish(self) -> Result<(), WireError> {
        if self.pos == self.bytes.len() {
            Ok(())
        } else {
            Err(WireError::Trailing)
        }
    }
}

pub(crate) fn push_id(out: &mut Vec<u8>, id: &NodeId) {
    let bytes = id.as_str().as_bytes();
    out.extend_from_slice(&(bytes.len() as u16).to_be_bytes());
    out.extend_from_slice(bytes);
}
