//! Stateless per-hop-signed path-vector baseline.
//!
//! Every hop appends an entry `(from, node, t, sig)` where `sig` signs the
//! statement "`from` handed this route to `node` at time `t`". The origin's
//! entry uses the reserved label [`ORIGIN_ID`] as `from`. Each entry is
//! independently verifiable, which is the weakness: an attacker that heard
//! a multi-hop update can keep the origin's entry, drop everything in
//! between, append its own valid entry, and present the result as a
//! one-hop route.

use super::basesig::{base_sign, base_verify, BaseSignature};
use super::{
    push_id, EngineStats, KeyRegistry, NodeId, RoutingTable, Timestamp, ValidationError,
    ValidationKind, WireCursor, WireError,
};
use crate::bilinear::{Scalar, POINT_LEN};
use crate::ecs::KeyPair;

/// Reserved `from` label for the origin's own entry. Not a routable node;
/// scenario inputs must never use it as a node id.
pub const ORIGIN_ID: &str = "R0";

/// Maximum entries accepted when decoding an update.
pub const MAX_ENTRIES: usize = 1024;

/// One hop's contribution to an update.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BgpEntry {
    pub from: NodeId,
    pub node: NodeId,
    pub ts: Timestamp,
    pub sig: BaseSignature,
}

impl BgpEntry {
    /// Build a correctly signed entry. Forgers in test scenarios reuse this
    /// with their own key and arbitrary `from` labels.
    pub fn signed(from: NodeId, node: NodeId, ts: Timestamp, private: &Scalar) -> Self {
        let sig = base_sign(private, &statement(&from, &node, ts));
        BgpEntry {
            from,
            node,
            ts,
            sig,
        }
    }
}

/// A route announcement: the ordered per-hop entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BgpUpdate {
    pub entries: Vec<BgpEntry>,
}

impl BgpUpdate {
    /// The advertised node path, origin first.
    pub fn path(&self) -> Vec<NodeId> {
        self.entries.iter().map(|e| e.node.clone()).collect()
    }

    /// Destination the update advertises (the origin).
    pub fn destination(&self) -> Option<&NodeId> {
        self.entries.first().map(|e| &e.node)
    }

    /// Bytes of signature material carried: one point per hop.
    pub fn signature_overhead(&self) -> usize {
        self.entries.len() * POINT_LEN
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.entries.len() as u16).to_be_bytes());
        for entry in &self.entries {
            push_id(&mut out, &entry.from);
            push_id(&mut out, &entry.node);
            out.extend_from_slice(&entry.ts.0.to_be_bytes());
            out.extend_from_slice(&entry.sig.to_bytes());
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, WireError> {
        let mut cursor = WireCursor::new(bytes);
        let count = u16::from_be_bytes(cursor.take::<2>()?) as usize;
        if count > MAX_ENTRIES {
            return Err(WireError::Oversized);
        }
        let mut entries = Vec::with_capacity(count);
        for _ in 0..count {
            let from = cursor.take_id()?;
            let node = cursor.take_id()?;
            let ts = Timestamp(u64::from_be_bytes(cursor.take::<8>()?));
            let sig = BaseSignature::from_bytes(&cursor.take::<{ POINT_LEN }>()?)
                .map_err(|_| WireError::BadPoint)?;
            entries.push(BgpEntry {
                from,
                node,
                ts,
                sig,
            });
        }
        cursor.finish()?;
        Ok(BgpUpdate { entries })
    }
}

/// The signed statement for one hop entry.
fn statement(from: &NodeId, node: &NodeId, ts: Timestamp) -> Vec<u8> {
    let mut msg = Vec::with_capacity(32);
    msg.extend_from_slice(b"BGP-STMT-v1");
    push_id(&mut msg, from);
    push_id(&mut msg, node);
    msg.extend_from_slice(&ts.0.to_be_bytes());
    msg
}

/// Start announcing this node as a destination.
pub fn bgp_initiate(self_id: &NodeId, now: Timestamp, keys: &KeyPair) -> BgpUpdate {
    let entry = BgpEntry::signed(NodeId::new(ORIGIN_ID), self_id.clone(), now, keys.private());
    BgpUpdate {
        entries: vec![entry],
    }
}

/// Validate a received update and, on acceptance, install the route and
/// return the extended update to rebroadcast.
///
/// Checks run in a fixed order — structure, loop, route quality,
/// timestamps, then signatures — so that no pairing arithmetic is spent on
/// updates that fail a cheap check. `stats.signature_checks` counts step
/// (e) verifications only.
#[allow(clippy::too_many_arguments)]
pub fn bgp_process(
    self_id: &NodeId,
    keys: &KeyPair,
    update: &BgpUpdate,
    now: Timestamp,
    table: &mut RoutingTable,
    threshold_ms: u64,
    registry: &KeyRegistry,
    stats: &mut EngineStats,
) -> Result<BgpUpdate, ValidationError> {
    let entries = &update.entries;

    // (a) structure: nonempty, origin-rooted, contiguous hop chain, all
    // nodes known to the registry.
    if entries.is_empty() {
        return Err(ValidationError::new(ValidationKind::BadFormat, 0));
    }
    if entries[0].from.as_str() != ORIGIN_ID {
        return Err(ValidationError::new(ValidationKind::BadFormat, 1));
    }
    for j in 1..entries.len() {
        if entries[j].from != entries[j - 1].node {
            return Err(ValidationError::new(ValidationKind::BadFormat, j + 1));
        }
    }
    for (j, entry) in entries.iter().enumerate() {
        if !registry.contains(&entry.node) {
            return Err(ValidationError::new(ValidationKind::BadFormat, j + 1));
        }
    }

    // (b) loops: no repeated node, and this node must not already appear.
    for (j, entry) in entries.iter().enumerate() {
        if entry.node == *self_id {
            return Err(ValidationError::new(ValidationKind::LoopDetected, j + 1));
        }
        if entries[..j].iter().any(|prev| prev.node == entry.node) {
            return Err(ValidationError::new(ValidationKind::LoopDetected, j + 1));
        }
    }

    // (c) route quality: the path including this node has one hop per entry.
    let destination = &entries[0].node;
    let metric = entries.len() as u32;
    if !table.would_accept(destination, metric) {
        return Err(ValidationError::new(ValidationKind::NotBetter, 0));
    }

    // (d) timestamps: non-decreasing along the path, every delta (including
    // the gap to local time) within the threshold.
    for j in 1..entries.len() {
        match entries[j].ts.delta_from(entries[j - 1].ts) {
            Some(delta) if delta <= threshold_ms => {}
            _ => return Err(ValidationError::new(ValidationKind::StaleTimestamp, j + 1)),
        }
    }
    match now.delta_from(entries[entries.len() - 1].ts) {
        Some(delta) if delta <= threshold_ms => {}
        _ => {
            return Err(ValidationError::new(
                ValidationKind::StaleTimestamp,
                entries.len(),
            ))
        }
    }

    // (e) signatures, most expensive last.
    for (j, entry) in entries.iter().enumerate() {
        let key = registry.get(&entry.node).expect("checked in step (a)");
        stats.signature_checks += 1;
        if !base_verify(
            key,
            &statement(&entry.from, &entry.node, entry.ts),
            &entry.sig,
        ) {
            return Err(ValidationError::new(ValidationKind::BadSignature, j + 1));
        }
    }

    // Accept: install the route and extend the update with this node's entry.
    let mut path = update.path();
    path.push(self_id.clone());
    table.apply(&path);

    let mut extended = update.clone();
    extended.entries.push(BgpEntry::signed(
        entries[entries.len() - 1].node.clone(),
        self_id.clone(),
        now,
        keys.private(),
    ));
    Ok(extended)
}
