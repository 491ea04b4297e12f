//! Deterministic event-driven broadcast simulator.
//!
//! Nodes sit on a plane and hear every broadcast within a shared coverage
//! radius. The scenario's initiator announces itself at time zero; updates
//! propagate with a fixed one-millisecond hop delay; scheduled data
//! packets then traverse the converged tables under the forwarding rule.
//! Adversarial roles (truncator, repeater) plug into the same delivery
//! path as honest nodes.
//!
//! Determinism: events execute in `(time, insertion order)`; every map is
//! ordered; node keys derive from `(seed, node id)`. Two runs of the same
//! scenario and seed produce byte-identical metrics.

pub mod metrics;
pub mod scenario;
pub mod topology;

pub use metrics::{Metrics, NodeMetrics, PacketRecord, TableRow, Totals};
pub use scenario::{DataPacketSpec, NodeSpec, Protocol, Role, Scenario, ScenarioError};
pub use topology::{
    bfs_distances, coverage_graph, is_connected, random_connected_scenario, Adjacency,
};

use crate::bilinear::{GroupContext, Scalar};
use crate::ecs::{ecs_sign_unchecked, ecs_strip, KeyPair};
use crate::routing::bgp::{bgp_initiate, bgp_process, BgpEntry, BgpUpdate};
use crate::routing::sbgp::{sbgp_initiate, sbgp_process, SbgpEntry, SbgpUpdate};
use crate::routing::ssbgp::{ssbgp_initiate, ssbgp_process, SsbgpHop, SsbgpUpdate};
use crate::routing::{
    forward_decision, EngineStats, ForwardDecision, KeyRegistry, NodeId, RoutingTable, Timestamp,
};
use sha2::{Digest, Sha256};
use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

/// Per-hop propagation delay in simulation milliseconds.
pub const HOP_DELAY_MS: u64 = 1;

/// Hard cap on data-packet hops, a backstop against forwarding cycles.
pub const MAX_DATA_HOPS: u32 = 64;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Event {
    /// The initiator announces itself.
    Announce { node: NodeId },
    /// A control broadcast arrives at one receiver.
    DeliverControl {
        to: NodeId,
        from: NodeId,
        bytes: Vec<u8>,
    },
    /// A scheduled data packet enters the network at its source.
    LaunchData { packet: usize },
    /// A data broadcast arrives at one receiver.
    DeliverData {
        to: NodeId,
        from: NodeId,
        packet: usize,
        intended: Option<NodeId>,
        hops: u32,
    },
}

struct NodeState {
    role: Role,
    keys: KeyPair,
    table: RoutingTable,
    stats: EngineStats,
    /// Digests of control updates already processed or sent; each distinct
    /// update is handled at most once (duplicate suppression).
    seen_control: BTreeSet<[u8; 32]>,
    /// Data packets already handled here.
    seen_data: BTreeSet<usize>,
    /// Whether a truncator has already emitted its forgery.
    forged: bool,
}

struct Sim<'a> {
    scenario: &'a Scenario,
    adj: Adjacency,
    registry: KeyRegistry,
    nodes: BTreeMap<NodeId, NodeState>,
    /// Private keys the scenario grants the adversary.
    extracted: BTreeMap<NodeId, Scalar>,
    metrics: Metrics,
    heap: BinaryHeap<Reverse<(u64, u64, Event)>>,
    seq: u64,
}

fn digest32(bytes: &[u8]) -> [u8; 32] {
    let mut out = [0u8; 32];
    out.copy_from_slice(&Sha256::digest(bytes));
    out
}

fn count_rejection(nm: &mut NodeMetrics, kind: &str) {
    *nm.rejections.entry(kind.to_string()).or_insert(0) += 1;
}

/// Run one scenario to completion and collect its metrics.
pub fn run_scenario(scenario: &Scenario, seed: u64) -> Result<Metrics, ScenarioError> {
    scenario.validate()?;
    let ctx = GroupContext::new();
    let adj = coverage_graph(scenario);

    let mut registry = KeyRegistry::new();
    let mut nodes = BTreeMap::new();
    let mut node_metrics = BTreeMap::new();
    for spec in &scenario.nodes {
        let id = NodeId::new(&spec.id);
        let keys = KeyPair::generate(&ctx, format!("node-key/{seed}/{}", spec.id).as_bytes());
        registry.insert(id.clone(), keys.public().clone());
        nodes.insert(
            id,
            NodeState {
                role: spec.role,
                keys,
                table: RoutingTable::new(),
                stats: EngineStats::default(),
                seen_control: BTreeSet::new(),
                seen_data: BTreeSet::new(),
                forged: false,
            },
        );
        node_metrics.insert(spec.id.clone(), NodeMetrics::default());
    }

    let extracted: BTreeMap<NodeId, Scalar> = scenario
        .extracted_keys
        .iter()
        .map(|id| {
            let nid = NodeId::new(id);
            let private = *nodes[&nid].keys.private();
            (nid, private)
        })
        .collect();

    let packets: Vec<PacketRecord> = scenario
        .data_packets
        .iter()
        .map(|p| PacketRecord {
            src: p.src.clone(),
            dest: p.dest.clone(),
            sent_at: p.at,
            delivered: false,
            delivered_at: None,
            intercepted_by: vec![],
            outcome: "pending".to_string(),
        })
        .collect();

    let mut sim = Sim {
        scenario,
        adj,
        registry,
        nodes,
        extracted,
        metrics: Metrics {
            protocol: scenario.protocol.as_str().to_string(),
            seed,
            nodes: node_metrics,
            packets,
            totals: Totals::default(),
        },
        heap: BinaryHeap::new(),
        seq: 0,
    };

    sim.push(
        0,
        Event::Announce {
            node: NodeId::new(&scenario.initiator),
        },
    );
    for (idx, p) in scenario.data_packets.iter().enumerate() {
        sim.push(p.at, Event::LaunchData { packet: idx });
    }

    while let Some(Reverse((time, _, event))) = sim.heap.pop() {
        sim.dispatch(time, event);
    }
    Ok(sim.finish())
}

impl<'a> Sim<'a> {
    fn push(&mut self, time: u64, event: Event) {
        self.seq += 1;
        self.heap.push(Reverse((time, self.seq, event)));
    }

    fn dispatch(&mut self, now: u64, event: Event) {
        match event {
            Event::Announce { node } => self.handle_announce(&node, now),
            Event::DeliverControl { to, from, bytes } => {
                self.handle_control(&to, &from, &bytes, now)
            }
            Event::LaunchData { packet } => self.handle_launch(packet, now),
            Event::DeliverData {
                to,
                from,
                packet,
                intended,
                hops,
            } => self.handle_data(&to, &from, packet, intended, hops, now),
        }
    }

    /// Emit one control broadcast: count it, remember its digest (the
    /// sender must ignore echoes of its own update), and schedule delivery
    /// at every covered neighbor.
    fn broadcast_control(&mut self, from: &NodeId, bytes: Vec<u8>, now: u64) {
        let nm = self
            .metrics
            .nodes
            .get_mut(from.as_str())
            .expect("known node");
        nm.broadcasts_sent += 1;
        nm.control_bytes_sent += bytes.len() as u64;
        self.nodes
            .get_mut(from)
            .expect("known node")
            .seen_control
            .insert(digest32(&bytes));
        let receivers: Vec<NodeId> = self.adj[from].iter().cloned().collect();
        for to in receivers {
            self.push(
                now + HOP_DELAY_MS,
                Event::DeliverControl {
                    to,
                    from: from.clone(),
                    bytes: bytes.clone(),
                },
            );
        }
    }

    fn broadcast_data(
        &mut self,
        from: &NodeId,
        packet: usize,
        intended: Option<NodeId>,
        hops: u32,
        now: u64,
    ) {
        let receivers: Vec<NodeId> = self.adj[from].iter().cloned().collect();
        for to in receivers {
            self.push(
                now + HOP_DELAY_MS,
                Event::DeliverData {
                    to,
                    from: from.clone(),
                    packet,
                    intended: intended.clone(),
                    hops,
                },
            );
        }
    }

    fn handle_announce(&mut self, id: &NodeId, now: u64) {
        let node = &self.nodes[id];
        let mut out: Vec<Vec<u8>> = Vec::new();
        match self.scenario.protocol {
            Protocol::Bgp => out.push(bgp_initiate(id, Timestamp(now), &node.keys).encode()),
            Protocol::Sbgp => {
                let neighbors: Vec<NodeId> = self.adj[id].iter().cloned().collect();
                for update in sbgp_initiate(id, Timestamp(now), &node.keys, &neighbors) {
                    out.push(update.encode());
                }
            }
            Protocol::Ssbgp => out.push(ssbgp_initiate(id, Timestamp(now), &node.keys).encode()),
        }
        for bytes in out {
            self.broadcast_control(id, bytes, now);
        }
    }

    fn handle_control(&mut self, to: &NodeId, from: &NodeId, bytes: &[u8], now: u64) {
        assert!(
            self.adj[from].contains(to),
            "broadcast locality violated: {from} -> {to}"
        );
        let node = self.nodes.get_mut(to).expect("known node");
        if !node.seen_control.insert(digest32(bytes)) {
            return;
        }
        let nm = self.metrics.nodes.get_mut(to.as_str()).expect("known node");
        let registry = &self.registry;
        let extracted = &self.extracted;
        let threshold = self.scenario.threshold_t;
        let sender_id_on = self.scenario.sender_identification;

        // Everything to broadcast after the engine borrows end.
        let mut out: Vec<Vec<u8>> = Vec::new();

        match self.scenario.protocol {
            Protocol::Bgp => {
                let update = match BgpUpdate::decode(bytes) {
                    Ok(u) => u,
                    Err(_) => {
                        count_rejection(nm, "bad_format");
                        return;
                    }
                };
                // Sender identification: the physical broadcaster must be
                // the last node on the claimed path.
                if sender_id_on && update.entries.last().map(|e| &e.node) != Some(from) {
                    nm.repeats_detected += 1;
                    return;
                }
                let result = bgp_process(
                    to,
                    &node.keys,
                    &update,
                    Timestamp(now),
                    &mut node.table,
                    threshold,
                    registry,
                    &mut node.stats,
                );
                match result {
                    Ok(extended) => {
                        nm.updates_accepted += 1;
                        match node.role {
                            Role::Honest => out.push(extended.encode()),
                            Role::Truncator => {
                                if !node.forged && update.entries.len() >= 2 {
                                    node.forged = true;
                                    let origin = update.entries[0].clone();
                                    let own = BgpEntry::signed(
                                        origin.node.clone(),
                                        to.clone(),
                                        Timestamp(now),
                                        node.keys.private(),
                                    );
                                    out.push(
                                        BgpUpdate {
                                            entries: vec![origin, own],
                                        }
                                        .encode(),
                                    );
                                }
                            }
                            Role::Repeater => {}
                        }
                    }
                    Err(err) => count_rejection(nm, err.kind.as_str()),
                }
            }
            Protocol::Sbgp => {
                let update = match SbgpUpdate::decode(bytes) {
                    Ok(u) => u,
                    Err(_) => {
                        count_rejection(nm, "bad_format");
                        return;
                    }
                };
                if sender_id_on && update.entries.last().map(|e| &e.node) != Some(from) {
                    nm.repeats_detected += 1;
                    return;
                }
                let neighbors: Vec<NodeId> = self.adj[to].iter().cloned().collect();
                let result = sbgp_process(
                    to,
                    &node.keys,
                    &update,
                    Timestamp(now),
                    &mut node.table,
                    threshold,
                    registry,
                    &mut node.stats,
                    &neighbors,
                );
                match result {
                    Ok(fanout) => {
                        nm.updates_accepted += 1;
                        match node.role {
                            Role::Honest => {
                                out.extend(fanout.iter().map(|u| u.encode()));
                            }
                            Role::Truncator => {
                                if !node.forged && update.entries.len() >= 2 {
                                    node.forged = true;
                                    let first = &update.entries[0];
                                    for nb in &neighbors {
                                        let forged_first = SbgpEntry {
                                            node: first.node.clone(),
                                            recipient: to.clone(),
                                            ts: first.ts,
                                            sig: first.sig,
                                        };
                                        let own = SbgpEntry::signed(
                                            to.clone(),
                                            nb.clone(),
                                            Timestamp(now),
                                            node.keys.private(),
                                        );
                                        out.push(
                                            SbgpUpdate {
                                                entries: vec![forged_first, own],
                                            }
                                            .encode(),
                                        );
                                    }
                                }
                            }
                            Role::Repeater => {}
                        }
                    }
                    Err(err) => count_rejection(nm, err.kind.as_str()),
                }
            }
            Protocol::Ssbgp => {
                let update = match SsbgpUpdate::decode(bytes) {
                    Ok(u) => u,
                    Err(_) => {
                        count_rejection(nm, "bad_format");
                        return;
                    }
                };
                if sender_id_on && update.hops.last().map(|h| &h.node) != Some(from) {
                    nm.repeats_detected += 1;
                    return;
                }
                let result = ssbgp_process(
                    to,
                    &node.keys,
                    &update,
                    Timestamp(now),
                    &mut node.table,
                    threshold,
                    registry,
                    &mut node.stats,
                );
                match result {
                    Ok(extended) => {
                        nm.updates_accepted += 1;
                        match node.role {
                            Role::Honest => out.push(extended.encode()),
                            Role::Truncator => {
                                if !node.forged && update.hops.len() >= 2 {
                                    node.forged = true;
                                    if let Some(forged) =
                                        forge_ssbgp(to, node, &update, registry, extracted, now)
                                    {
                                        out.push(forged.encode());
                                    }
                                }
                            }
                            Role::Repeater => {}
                        }
                    }
                    Err(err) => count_rejection(nm, err.kind.as_str()),
                }
            }
        }

        // A repeater rebroadcasts every first-seen update verbatim,
        // whatever its own engine concluded about it.
        if node.role == Role::Repeater {
            out.push(bytes.to_vec());
        }

        for b in out {
            self.broadcast_control(to, b, now);
        }
    }

    fn handle_launch(&mut self, idx: usize, now: u64) {
        let spec = self.scenario.data_packets[idx].clone();
        let src = NodeId::new(&spec.src);
        let dest = NodeId::new(&spec.dest);
        let node = self.nodes.get_mut(&src).expect("known node");
        node.seen_data.insert(idx);
        if src == dest {
            let nm = self
                .metrics
                .nodes
                .get_mut(src.as_str())
                .expect("known node");
            nm.data_delivered += 1;
            let rec = &mut self.metrics.packets[idx];
            rec.delivered = true;
            rec.delivered_at = Some(now);
            return;
        }
        match node.table.get(&dest).map(|info| info.next_hop.clone()) {
            None => {
                self.metrics.packets[idx].outcome = "no_route".to_string();
            }
            Some(intended) => {
                self.broadcast_data(&src, idx, Some(intended), 0, now);
            }
        }
    }

    fn handle_data(
        &mut self,
        to: &NodeId,
        from: &NodeId,
        idx: usize,
        intended: Option<NodeId>,
        hops: u32,
        now: u64,
    ) {
        assert!(
            self.adj[from].contains(to),
            "broadcast locality violated: {from} -> {to}"
        );
        let dest = NodeId::new(&self.scenario.data_packets[idx].dest);
        let node = self.nodes.get_mut(to).expect("known node");
        if !node.seen_data.insert(idx) {
            return;
        }
        let nm = self.metrics.nodes.get_mut(to.as_str()).expect("known node");
        nm.data_received += 1;

        if *to == dest {
            nm.data_delivered += 1;
            let rec = &mut self.metrics.packets[idx];
            rec.delivered = true;
            rec.delivered_at = Some(now);
            return;
        }

        let mut forward_via: Option<NodeId> = None;
        match node.role {
            Role::Truncator => {
                // Capture traffic steered at us; ignore the rest.
                if intended.as_ref() == Some(to) {
                    nm.intercepted += 1;
                    self.metrics.packets[idx]
                        .intercepted_by
                        .push(to.to_string());
                } else {
                    nm.data_dropped += 1;
                }
            }
            Role::Honest | Role::Repeater => match forward_decision(&node.table, to, &dest, from) {
                ForwardDecision::Forward if hops < MAX_DATA_HOPS => {
                    nm.data_forwarded += 1;
                    forward_via = Some(
                        node.table
                            .get(&dest)
                            .expect("route exists")
                            .next_hop
                            .clone(),
                    );
                }
                _ => nm.data_dropped += 1,
            },
        }
        if let Some(next) = forward_via {
            self.broadcast_data(to, idx, Some(next), hops + 1, now);
        }
    }

    fn finish(mut self) -> Metrics {
        for (id, state) in &self.nodes {
            let nm = self.metrics.nodes.get_mut(id.as_str()).expect("known node");
            nm.signature_checks = state.stats.signature_checks;
            nm.table = state
                .table
                .entries()
                .map(|e| {
                    (
                        e.destination.to_string(),
                        TableRow {
                            next_hop: e.next_hop.to_string(),
                            metric: e.metric,
                        },
                    )
                })
                .collect();
        }
        for rec in &mut self.metrics.packets {
            if rec.outcome == "pending" {
                rec.outcome = if rec.delivered {
                    "delivered"
                } else if !rec.intercepted_by.is_empty() {
                    "intercepted"
                } else {
                    "dropped"
                }
                .to_string();
            }
        }
        self.metrics.finalize();
        self.metrics
    }
}

/// Build the truncator's forged one-hop-route update: the origin's hop plus
/// the attacker's own. When the scenario has granted the attacker every
/// dropped hop's private key, the received signature is stripped down to
/// the origin's prefix (a valid forgery); otherwise the full-chain
/// signature is reused as-is and cannot verify.
fn forge_ssbgp(
    self_id: &NodeId,
    node: &NodeState,
    received: &SsbgpUpdate,
    registry: &KeyRegistry,
    extracted: &BTreeMap<NodeId, Scalar>,
    now: u64,
) -> Option<SsbgpUpdate> {
    let dropped = &received.hops[1..];
    let full_seq = received.sequence(registry)?;
    let base_sig = if dropped.iter().all(|h| extracted.contains_key(&h.node)) {
        let scalars: Vec<Scalar> = dropped.iter().map(|h| extracted[&h.node]).collect();
        match ecs_strip(&full_seq, &received.sigma, &scalars) {
            Ok(sig) => sig,
            Err(_) => received.sigma,
        }
    } else {
        received.sigma
    };
    let prefix = full_seq.prefix(1);
    let own_hop = SsbgpHop::new(Timestamp(now), self_id.clone());
    let sigma = ecs_sign_unchecked(&node.keys, &own_hop.message(), &prefix, &base_sig).ok()?;
    Some(SsbgpUpdate {
        hops: vec![received.hops[0].clone(), own_hop],
        sigma,
    })
}
