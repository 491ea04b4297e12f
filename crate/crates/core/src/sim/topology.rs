//! Unit-disk geometry: who hears whom.
//!
//! Coverage is symmetric by construction — every node uses the same
//! radius, so `u` hears `v` exactly when `v` hears `u`.

use super::scenario::{NodeSpec, Protocol, Role, Scenario};
use crate::routing::NodeId;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Adjacency: node → set of nodes within coverage (self excluded).
pub type Adjacency = BTreeMap<NodeId, BTreeSet<NodeId>>;

/// Build the symmetric coverage graph: an edge wherever the euclidean
/// distance is at most the radius.
pub fn coverage_graph(scenario: &Scenario) -> Adjacency {
    let mut adj: Adjacency = scenario
        .nodes
        .iter()
        .map(|n| (NodeId::new(&n.id), BTreeSet::new()))
        .collect();
    for (i, a) in scenario.nodes.iter().enumerate() {
        for b in scenario.nodes.iter().skip(i + 1) {
            let (dx, dy) = (a.x - b.x, a.y - b.y);
            if (dx * dx + dy * dy).sqrt() <= scenario.radius {
                adj.get_mut(&NodeId::new(&a.id))
                    .unwrap()
                    .insert(NodeId::new(&b.id));
                adj.get_mut(&NodeId::new(&b.id))
                    .unwrap()
                    .insert(NodeId::new(&a.id));
            }
        }
    }
    adj
}

/// Hop distances from `root` over the adjacency, by breadth-first search.
/// Unreachable nodes are absent from the result.
pub fn bfs_distances(adj: &Adjacency, root: &NodeId) -> BTreeMap<NodeId, u32> {
    let mut dist = BTreeMap::new();
    if !adj.contains_key(root) {
        return dist;
    }
    dist.insert(root.clone(), 0);
    let mut queue = VecDeque::from([root.clone()]);
    while let Some(node) = queue.pop_front() {
        let d = dist[&node];
        for next in &adj[&node] {
            if !dist.contains_key(next) {
                dist.insert(next.clone(), d + 1);
                queue.push_back(next.clone());
            }
        }
    }
    dist
}

pub fn is_connected(adj: &Adjacency) -> bool {
    match adj.keys().next() {
        None => true,
        Some(root) => bfs_distances(adj, root).len() == adj.len(),
    }
}

/// Deterministically generate a connected all-honest scenario: `n` nodes
/// placed uniformly in a square, retrying (and shrinking the square when
/// placement keeps failing) until the coverage graph is connected. The
/// initiator is the first node; no data packets are scheduled.
pub fn random_connected_scenario(n: usize, protocol: Protocol, seed: u64) -> Scenario {
    assert!(n >= 1, "need at least one node");
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x7090_10C0_5CE2_A210);
    let radius = 1.0;
    // Start roomy enough to get interesting multi-hop shapes, shrink on
    // repeated failure; a small enough square is always connected.
    let mut side = (n as f64).sqrt() * 0.9 * radius;
    loop {
        for _ in 0..200 {
            let nodes: Vec<NodeSpec> = (0..n)
                .map(|i| NodeSpec {
                    id: format!("N{i:02}"),
                    x: rng.gen_range(0.0..=side),
                    y: rng.gen_range(0.0..=side),
                    role: Role::Honest,
                })
                .collect();
            let scenario = Scenario {
                radius,
                nodes,
                protocol,
                initiator: "N00".to_string(),
                threshold_t: 1000,
                sender_identification: true,
                data_packets: vec![],
                extracted_keys: vec![],
            };
            if is_connected(&coverage_graph(&scenario)) {
                return scenario;
            }
        }
        side *= 0.7;
    }
}
