//! Run metrics: per-node counters, routing tables, and per-packet fates.
//!
//! Serialization is byte-stable: every map is a `BTreeMap`, so equal runs
//! produce identical JSON — the determinism tests diff these bytes.

use serde::Serialize;
use std::collections::BTreeMap;

/// One routing-table row in the snapshot.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TableRow {
    pub next_hop: String,
    pub metric: u32,
}

/// Counters for one node.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct NodeMetrics {
    /// Control broadcasts emitted (an addressed fan-out counts each copy).
    pub broadcasts_sent: u64,
    /// Exact serialized bytes of those broadcasts.
    pub control_bytes_sent: u64,
    /// Updates that passed validation and were installed.
    pub updates_accepted: u64,
    /// Rejections by validation kind (snake_case names).
    pub rejections: BTreeMap<String, u64>,
    /// Control updates discarded because the physical sender did not match
    /// the path's last node (sender identification).
    pub repeats_detected: u64,
    /// Signature verifications performed by this node's engine.
    pub signature_checks: u64,
    /// Data packets heard for the first time.
    pub data_received: u64,
    /// Data packets rebroadcast toward their destination.
    pub data_forwarded: u64,
    /// Data packets that terminated here as their destination.
    pub data_delivered: u64,
    /// Data packets heard and dropped by the forwarding rule.
    pub data_dropped: u64,
    /// Data packets captured while being this sender's intended next hop.
    pub intercepted: u64,
    /// Final routing table: destination → (next_hop, metric).
    pub table: BTreeMap<String, TableRow>,
}

/// The fate of one injected data packet.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PacketRecord {
    pub src: String,
    pub dest: String,
    pub sent_at: u64,
    pub delivered: bool,
    pub delivered_at: Option<u64>,
    /// Nodes that captured a copy while being the intended next hop.
    pub intercepted_by: Vec<String>,
    /// "delivered", "intercepted", "dropped", or "no_route".
    pub outcome: String,
}

/// Whole-run totals, summed over nodes.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct Totals {
    pub broadcasts: u64,
    pub control_bytes: u64,
    pub signature_checks: u64,
    pub updates_accepted: u64,
    pub repeats_detected: u64,
    pub data_delivered: u64,
    pub data_intercepted: u64,
}

/// Everything a run reports.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct Metrics {
    pub protocol: String,
    pub seed: u64,
    pub nodes: BTreeMap<String, NodeMetrics>,
    pub packets: Vec<PacketRecord>,
    pub totals: Totals,
}

impl Metrics {
    /// Stable pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("metrics serialize");
        text.push('\n');
        text
    }

    pub fn node(&self, id: &str) -> &NodeMetrics {
        &self.nodes[id]
    }

    /// Recompute totals from the per-node counters.
    pub fn finalize(&mut self) {
        let mut totals = Totals::default();
        for node in self.nodes.values() {
            totals.broadcasts += node.broadcasts_sent;
            totals.control_bytes += node.control_bytes_sent;
            totals.signature_checks += node.signature_checks;
            totals.updates_accepted += node.updates_accepted;
            totals.repeats_detected += node.repeats_detected;
            totals.data_delivered += node.data_delivered;
            totals.data_intercepted += node.intercepted;
        }
        self.totals = totals;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_stable_and_totals_sum() {
        let mut metrics = Metrics {
            protocol: "bgp".into(),
            seed: 0,
            nodes: BTreeMap::new(),
            packets: vec![],
            totals: Totals::default(),
        };
        let a = NodeMetrics {
            broadcasts_sent: 2,
            data_delivered: 1,
            ..NodeMetrics::default()
        };
        metrics.nodes.insert("A".into(), a);
        let b = NodeMetrics {
            broadcasts_sent: 3,
            intercepted: 4,
            ..NodeMetrics::default()
        };
        metrics.nodes.insert("B".into(), b);
        metrics.finalize();

        assert_eq!(metrics.totals.broadcasts, 5);
        assert_eq!(metrics.totals.data_delivered, 1);
        assert_eq!(metrics.totals.data_intercepted, 4);
        assert_eq!(metrics.to_json(), metrics.clone().to_json());
        assert!(metrics.to_json().ends_with('\n'));
    }
}
