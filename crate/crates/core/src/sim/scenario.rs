//! Scenario files: the JSON description of one simulation run.
//!
//! A scenario fixes the geometry (node positions and a shared coverage
//! radius), the protocol, each node's role, the announcement initiator,
//! and the data packets to inject after the control plane has settled.
//! Everything else — keys, event order, metrics — is derived
//! deterministically from the scenario plus a seed.

use crate::routing::bgp::ORIGIN_ID;
use crate::routing::NodeId;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Behavior of one node.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// Follows the protocol: validates, installs, rebroadcasts, forwards.
    Honest,
    /// Validates silently, never rebroadcasts honestly; instead emits one
    /// truncated forgery claiming a short route to the origin, and captures
    /// data packets addressed to it as next hop.
    Truncator,
    /// Rebroadcasts every control update verbatim, concealing itself from
    /// the path; forwards data packets normally.
    Repeater,
}

/// Which routing protocol every node in the scenario runs.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Bgp,
    Sbgp,
    Ssbgp,
}

impl Protocol {
    pub fn as_str(&self) -> &'static str {
        match self {
            Protocol::Bgp => "bgp",
            Protocol::Sbgp => "sbgp",
            Protocol::Ssbgp => "ssbgp",
        }
    }
}

/// One node: label, plane position, role.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub id: String,
    pub x: f64,
    pub y: f64,
    #[serde(default = "default_role")]
    pub role: Role,
}

fn default_role() -> Role {
    Role::Honest
}

/// A data packet injected at a node at a fixed simulation time.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataPacketSpec {
    pub src: String,
    pub dest: String,
    /// Launch time in simulation milliseconds; schedule after the control
    /// plane has settled (a few ms per hop from the initiator).
    pub at: u64,
}

/// A complete simulation description.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Shared coverage radius: nodes within this euclidean distance hear
    /// each other.
    pub radius: f64,
    pub nodes: Vec<NodeSpec>,
    pub protocol: Protocol,
    /// The node that announces itself as a destination at time 0.
    pub initiator: String,
    /// Maximum accepted age (ms) between consecutive update timestamps and
    /// between the last timestamp and local time.
    #[serde(default = "default_threshold")]
    pub threshold_t: u64,
    /// Whether the radio layer lets receivers identify the physical
    /// broadcaster. When on, an update whose last path entry is not the
    /// physical sender is discarded as a detected repeat.
    #[serde(default = "default_sender_identification")]
    pub sender_identification: bool,
    #[serde(default)]
    pub data_packets: Vec<DataPacketSpec>,
    /// Node labels whose private keys the adversary has extracted; grants
    /// truncators the ability to strip those nodes' factors from a chain
    /// signature.
    #[serde(default)]
    pub extracted_keys: Vec<String>,
}

fn default_threshold() -> u64 {
    1000
}

fn default_sender_identification() -> bool {
    true
}

/// Why a scenario is unusable.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("scenario is not valid JSON: {0}")]
    Parse(String),
    #[error("scenario has no nodes")]
    Empty,
    #[error("duplicate node id {0:?}")]
    DuplicateNode(String),
    #[error("node id {0:?} is reserved for the route origin marker")]
    ReservedId(String),
    #[error("node {0:?} has a non-finite coordinate")]
    NonFiniteCoordinate(String),
    #[error("radius must be finite and non-negative")]
    BadRadius,
    #[error("initiator {0:?} is not a node")]
    UnknownInitiator(String),
    #[error("data packet endpoint {0:?} is not a node")]
    UnknownPacketEndpoint(String),
    #[error("extracted key {0:?} is not a node")]
    UnknownExtractedKey(String),
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario, ScenarioError> {
        let scenario: Scenario =
            serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("scenario serializes");
        text.push('\n');
        text
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.nodes.is_empty() {
            return Err(ScenarioError::Empty);
        }
        if !(self.radius.is_finite() && self.radius >= 0.0) {
            return Err(ScenarioError::BadRadius);
        }
        let mut ids = BTreeSet::new();
        for node in &self.nodes {
            if node.id == ORIGIN_ID {
                return Err(ScenarioError::ReservedId(node.id.clone()));
            }
            if !ids.insert(node.id.as_str()) {
                return Err(ScenarioError::DuplicateNode(node.id.clone()));
            }
            if !(node.x.is_finite() && node.y.is_finite()) {
                return Err(ScenarioError::NonFiniteCoordinate(node.id.clone()));
            }
        }
        if !ids.contains(self.initiator.as_str()) {
            return Err(ScenarioError::UnknownInitiator(self.initiator.clone()));
        }
        for packet in &self.data_packets {
            for endpoint in [&packet.src, &packet.dest] {
                if !ids.contains(endpoint.as_str()) {
                    return Err(ScenarioError::UnknownPacketEndpoint(endpoint.clone()));
                }
            }
        }
        for id in &self.extracted_keys {
            if !ids.contains(id.as_str()) {
                return Err(ScenarioError::UnknownExtractedKey(id.clone()));
            }
        }
        Ok(())
    }

    pub fn node_ids(&self) -> Vec<NodeId> {
        self.nodes.iter().map(|n| NodeId::new(&n.id)).collect()
    }

    pub fn role_of(&self, id: &NodeId) -> Option<Role> {
        self.nodes
            .iter()
            .find(|n| n.id == id.as_str())
            .map(|n| n.role)
    }
}
