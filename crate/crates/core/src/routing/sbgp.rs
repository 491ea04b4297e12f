//! Recipient-addressed per-hop-signed path vector.
//!
//! Each entry `(node, recipient, t, sig)` signs "`node` hands this route
//! specifically to `recipient` at time `t`", and an update is only valid at
//! the node its last entry names. That defeats truncation — an attacker
//! cannot reuse the origin's entry because it names the origin's real
//! neighbor, not the attacker — at the cost of statefulness: a node with
//! `k` eligible neighbors must sign and broadcast `k` distinct updates.

use super::basesig::{base_sign, base_verify, BaseSignature};
use super::{
    push_id, EngineStats, KeyRegistry, NodeId, RoutingTable, Timestamp, ValidationError,
    ValidationKind, WireCursor, WireError,
};
use crate::bilinear::{Scalar, POINT_LEN};
use crate::ecs::KeyPair;

/// Maximum entries accepted when decoding an update.
pub const MAX_ENTRIES: usize = 1024;

/// One hop's recipient-addressed contribution.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SbgpEntry {
    pub node: NodeId,
    pub recipient: NodeId,
    pub ts: Timestamp,
    pub sig: BaseSignature,
}

impl SbgpEntry {
    pub fn signed(node: NodeId, recipient: NodeId, ts: Timestamp, private: &Scalar) -> Self {
        let sig = base_sign(private, &statement(&node, &recipient, ts));
        SbgpEntry {
            node,
            recipient,
            ts,
            sig,
        }
    }
}

/// A route announcement addressed to one specific next node.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SbgpUpdate {
    pub entries: Vec<SbgpEntry>,
}

impl SbgpUpdate {
    /// The advertised node path, origin first.
    pub fn path(&self) -> Vec<NodeId> {
        self.entries.iter().map(|e| e.node.clone()).collect()
    }

    pub fn destination(&self) -> Option<&NodeId> {
        self.entries.first().map(|e| &e.node)
    }

    /// The node this update is addressed to.
    pub fn addressee(&self) -> Option<&NodeId> {
        self.entries.last().map(|e| &e.recipient)
    }

    /// Bytes of signature material carried: one point per hop.
    pub fn signature_overhead(&self) -> usize {
        self.entries.len() * POINT_LEN
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.entries.len() as u16).to_be_bytes());
        for entry in &self.entries {
            push_id(&mut out, &entry.node);
            push_id(&mut out, &entry.recipient);
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
            let node = cursor.take_id()?;
            let recipient = cursor.take_id()?;
            let ts = Timestamp(u64::from_be_bytes(cursor.take::<8>()?));
            let sig = BaseSignature::from_bytes(&cursor.take::<{ POINT_LEN }>()?)
                .map_err(|_| WireError::BadPoint)?;
            entries.push(SbgpEntry {
                node,
                recipient,
                ts,
                sig,
            });
        }
        cursor.finish()?;
        Ok(SbgpUpdate { entries })
    }
}

fn statement(node: &NodeId, recipient: &NodeId, ts: Timestamp) -> Vec<u8> {
    let mut msg = Vec::with_capacity(32);
    msg.extend_from_slice(b"SBGP-STMT-v1");
    push_id(&mut msg, node);
    push_id(&mut msg, recipient);
    msg.extend_from_slice(&ts.0.to_be_bytes());
    msg
}

/// Start announcing this node: one addressed update per neighbor.
pub fn sbgp_initiate(
    self_id: &NodeId,
    now: Timestamp,
    keys: &KeyPair,
    neighbors: &[NodeId],
) -> Vec<SbgpUpdate> {
    let mut sorted: Vec<&NodeId> = neighbors.iter().filter(|nb| *nb != self_id).collect();
    sorted.sort();
    sorted.dedup();
    sorted
        .into_iter()
        .map(|nb| SbgpUpdate {
            entries: vec![SbgpEntry::signed(
                self_id.clone(),
                nb.clone(),
                now,
                keys.private(),
            )],
        })
        .collect()
}

/// Validate a received update and, on acceptance, install the route and
/// return the addressed updates to rebroadcast — one per eligible neighbor
/// (not on the path, not this node), in sorted order.
#[allow(clippy::too_many_arguments)]
pub fn sbgp_process(
    self_id: &NodeId,
    keys: &KeyPair,
    update: &SbgpUpdate,
    now: Timestamp,
    table: &mut RoutingTable,
    threshold_ms: u64,
    registry: &KeyRegistry,
    stats: &mut EngineStats,
    neighbors: &[NodeId],
) -> Result<Vec<SbgpUpdate>, ValidationError> {
    let entries = &update.entries;

    // (a) structure: nonempty, each entry signed by the node the previous
    // entry was addressed to, all signers known to the registry.
    if entries.is_empty() {
        return Err(ValidationError::new(ValidationKind::BadFormat, 0));
    }
    for j in 1..entries.len() {
        if entries[j].node != entries[j - 1].recipient {
            return Err(ValidationError::new(ValidationKind::BadFormat, j + 1));
        }
    }
    for (j, entry) in entries.iter().enumerate() {
        if !registry.contains(&entry.node) {
            return Err(ValidationError::new(ValidationKind::BadFormat, j + 1));
        }
    }

    // (a2) addressing: the final entry must name this node.
    if entries[entries.len() - 1].recipient != *self_id {
        return Err(ValidationError::new(
            ValidationKind::NotAddressedToMe,
            entries.len(),
        ));
    }

    // (b) loops.
    for (j, entry) in entries.iter().enumerate() {
        if entry.node == *self_id {
            return Err(ValidationError::new(ValidationKind::LoopDetected, j + 1));
        }
        if entries[..j].iter().any(|prev| prev.node == entry.node) {
            return Err(ValidationError::new(ValidationKind::LoopDetected, j + 1));
        }
    }

    // (c) route quality.
    let destination = &entries[0].node;
    let metric = entries.len() as u32;
    if !table.would_accept(destination, metric) {
        return Err(ValidationError::new(ValidationKind::NotBetter, 0));
    }

    // (d) timestamps.
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

    // (e) signatures.
    for (j, entry) in entries.iter().enumerate() {
        let key = registry.get(&entry.node).expect("checked in step (a)");
        stats.signature_checks += 1;
        if !base_verify(
            key,
            &statement(&entry.node, &entry.recipient, entry.ts),
            &entry.sig,
        ) {
            return Err(ValidationError::new(ValidationKind::BadSignature, j + 1));
        }
    }

    // Accept: install the route, then address one extended copy to each
    // neighbor that is neither on the path nor this node.
    let mut path = update.path();
    path.push(self_id.clone());
    table.apply(&path);

    let mut eligible: Vec<&NodeId> = neighbors
        .iter()
        .filter(|nb| *nb != self_id && !path.contains(nb))
        .collect();
    eligible.sort();
    eligible.dedup();

    Ok(eligible
        .into_iter()
        .map(|nb| {
            let mut extended = update.clone();
            extended.entries.push(SbgpEntry::signed(
                self_id.clone(),
                nb.clone(),
                now,
                keys.private(),
            ));
            extended
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilinear::GroupContext;
    use std::collections::BTreeMap;

    struct Net {
        keys: BTreeMap<NodeId, KeyPair>,
        registry: KeyRegistry,
    }

    fn net(ids: &[&str]) -> Net {
        let ctx = GroupContext::new();
        let mut keys = BTreeMap::new();
        let mut registry = KeyRegistry::new();
        for id in ids {
            let kp = KeyPair::generate(&ctx, format!("sbgp-test/{id}").as_bytes());
            registry.insert(NodeId::from(*id), kp.public().clone());
            keys.insert(NodeId::from(*id), kp);
        }
        Net { keys, registry }
    }

    fn n(s: &str) -> NodeId {
        NodeId::from(s)
    }

    fn ids(list: &[&str]) -> Vec<NodeId> {
        list.iter().map(|s| NodeId::from(*s)).collect()
    }

    /// Walk A's announcement along A—B—C where C also borders D and E:
    /// C must emit exactly two updates, one addressed to each of D and E.
    #[test]
    fn fan_out_covers_each_eligible_neighbor_once() {
        let net = net(&["A", "B", "C", "D", "E"]);
        let mut stats = EngineStats::default();

        let from_a = sbgp_initiate(&n("A"), Timestamp(0), &net.keys[&n("A")], &ids(&["B"]));
        assert_eq!(from_a.len(), 1);
        assert_eq!(from_a[0].addressee(), Some(&n("B")));

        let mut table_b = RoutingTable::new();
        let from_b = sbgp_process(
            &n("B"),
            &net.keys[&n("B")],
            &from_a[0],
            Timestamp(1),
            &mut table_b,
            1000,
            &net.registry,
            &mut stats,
            &ids(&["A", "C"]),
        )
        .unwrap();
        // A is on the path, so B only addresses C.
        assert_eq!(from_b.len(), 1);
        assert_eq!(from_b[0].addressee(), Some(&n("C")));

        let mut table_c = RoutingTable::new();
        let from_c = sbgp_process(
            &n("C"),
            &net.keys[&n("C")],
            &from_b[0],
            Timestamp(2),
            &mut table_c,
            1000,
            &net.registry,
            &mut stats,
            &ids(&["B", "D", "E"]),
        )
        .unwrap();
        assert_eq!(table_c.get(&n("A")).unwrap().next_hop, n("B"));
        assert_eq!(table_c.get(&n("A")).unwrap().metric, 2);
        assert_eq!(from_c.len(), 2);
        assert_eq!(from_c[0].addressee(), Some(&n("D")));
        assert_eq!(from_c[1].addressee(), Some(&n("E")));
        assert_eq!(from_c[0].path(), vec![n("A"), n("B"), n("C")]);
    }

    /// An update addressed to D is worthless anywhere else, even though
    /// every signature in it is genuine.
    #[test]
    fn update_for_another_recipient_is_rejected_without_pairing_work() {
        let net = net(&["A", "B", "C", "D", "E"]);
        let mut stats = EngineStats::default();
        let from_a = sbgp_initiate(&n("A"), Timestamp(0), &net.keys[&n("A")], &ids(&["B"]));
        let mut table_b = RoutingTable::new();
        let from_b = sbgp_process(
            &n("B"),
            &net.keys[&n("B")],
            &from_a[0],
            Timestamp(1),
            &mut table_b,
            1000,
            &net.registry,
            &mut stats,
            &ids(&["A", "C"]),
        )
        .unwrap();
        let mut table_c = RoutingTable::new();
        let from_c = sbgp_process(
            &n("C"),
            &net.keys[&n("C")],
            &from_b[0],
            Timestamp(2),
            &mut table_c,
            1000,
            &net.registry,
            &mut stats,
            &ids(&["B", "D", "E"]),
        )
        .unwrap();
        let to_d = from_c
            .iter()
            .find(|u| u.addressee() == Some(&n("D")))
            .unwrap();

        // E overhears the broadcast addressed to D.
        let before = stats.signature_checks;
        let mut table_e = RoutingTable::new();
        let err = sbgp_process(
            &n("E"),
            &net.keys[&n("E")],
            to_d,
            Timestamp(3),
            &mut table_e,
            1000,
            &net.registry,
            &mut stats,
            &ids(&["C"]),
        )
        .unwrap_err();
        assert_eq!(
            err,
            ValidationError::new(ValidationKind::NotAddressedToMe, 3)
        );
        assert_eq!(stats.signature_checks, before);
        assert!(table_e.is_empty());
    }

    /// The truncation forgery that defeats the stateless baseline fails
    /// here: the attacker must fake "(origin → attacker)" but the origin
    /// only ever signed "(origin → its real neighbor)".
    #[test]
    fn truncated_update_fails_at_the_forged_first_entry() {
        let net = net(&["A", "B", "C", "F", "Y"]);
        let mut stats = EngineStats::default();
        let from_a = sbgp_initiate(&n("A"), Timestamp(0), &net.keys[&n("A")], &ids(&["B"]));

        // F forges a one-hop chain (A→F) reusing A's real signature, then
        // appends its own honest entry addressed to Y.
        let real = &from_a[0].entries[0];
        let forged_first = SbgpEntry {
            node: n("A"),
            recipient: n("F"),
            ts: real.ts,
            sig: real.sig,
        };
        let own = SbgpEntry::signed(n("F"), n("Y"), Timestamp(1), net.keys[&n("F")].private());
        let forged = SbgpUpdate {
            entries: vec![forged_first, own],
        };

        let mut table_y = RoutingTable::new();
        let err = sbgp_process(
            &n("Y"),
            &net.keys[&n("Y")],
            &forged,
            Timestamp(2),
            &mut table_y,
            1000,
            &net.registry,
            &mut stats,
            &ids(&["F"]),
        )
        .unwrap_err();
        assert_eq!(err, ValidationError::new(ValidationKind::BadSignature, 1));
        assert!(table_y.is_empty());
    }

    #[test]
    fn chain_break_loop_and_staleness_are_detected() {
        let net = net(&["A", "B", "C"]);
        let mut stats = EngineStats::default();
        let from_a = sbgp_initiate(&n("A"), Timestamp(0), &net.keys[&n("A")], &ids(&["B"]));
        let mut table_b = RoutingTable::new();
        let from_b = sbgp_process(
            &n("B"),
            &net.keys[&n("B")],
            &from_a[0],
            Timestamp(1),
            &mut table_b,
            1000,
            &net.registry,
            &mut stats,
            &ids(&["A", "C"]),
        )
        .unwrap();

        // Chain break: second entry not signed by the first's recipient.
        let mut broken = from_b[0].clone();
        broken.entries[1].node = n("C");
        let mut table_c = RoutingTable::new();
        let err = sbgp_process(
            &n("C"),
            &net.keys[&n("C")],
            &broken,
            Timestamp(2),
            &mut table_c,
            1000,
            &net.registry,
            &mut stats,
            &ids(&["B"]),
        )
        .unwrap_err();
        assert_eq!(err, ValidationError::new(ValidationKind::BadFormat, 2));

        // Loop: B hears an update whose path already contains B.
        let mut echo = from_b[0].clone();
        echo.entries[1].recipient = n("B");
        let err = sbgp_process(
            &n("B"),
            &net.keys[&n("B")],
            &echo,
            Timestamp(2),
            &mut table_b,
            1000,
            &net.registry,
            &mut stats,
            &ids(&["A", "C"]),
        )
        .unwrap_err();
        assert_eq!(err, ValidationError::new(ValidationKind::LoopDetected, 2));

        // Staleness at the threshold boundary.
        let fresh = sbgp_initiate(&n("A"), Timestamp(100), &net.keys[&n("A")], &ids(&["B"]));
        let mut table = RoutingTable::new();
        assert!(sbgp_process(
            &n("B"),
            &net.keys[&n("B")],
            &fresh[0],
            Timestamp(1100),
            &mut table,
            1000,
            &net.registry,
            &mut stats,
            &ids(&["A"]),
        )
        .is_ok());
        let mut table = RoutingTable::new();
        let err = sbgp_process(
            &n("B"),
            &net.keys[&n("B")],
            &fresh[0],
            Timestamp(1101),
            &mut table,
            1000,
            &net.registry,
            &mut stats,
            &ids(&["A"]),
        )
        .unwrap_err();
        assert_eq!(err, ValidationError::new(ValidationKind::StaleTimestamp, 1));
    }

    #[test]
    fn wire_roundtrip() {
        let net = net(&["A", "B"]);
        let from_a = sbgp_initiate(&n("A"), Timestamp(9), &net.keys[&n("A")], &ids(&["B"]));
        let bytes = from_a[0].encode();
        let expected = 2 + (2 + 1 + 2 + 1 + 8 + POINT_LEN);
        assert_eq!(bytes.len(), expected);
        assert_eq!(SbgpUpdate::decode(&bytes).unwrap(), from_a[0]);
        assert_eq!(
            SbgpUpdate::decode(&bytes[..bytes.len() - 2]),
            Err(WireError::Truncated)
        );
    }
}
