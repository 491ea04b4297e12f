//! Stateless chain-signed path vector.
//!
//! The whole path carries one chain-signature element: each hop folds its
//! contribution into the previous signature, and the receiver verifies the
//! entire path with a single check. Truncating the path — keeping the
//! origin's hop, dropping the middle — requires dividing the dropped hops'
//! factors out of the signature, which needs their private keys. Unlike the
//! recipient-addressed design, one broadcast serves every neighbor.
//!
//! A hop on the wire is `(t, node, ext)`; the signed link message is the
//! timestamp concatenated with the extension bytes, and the link key is the
//! hop node's registered public key.

use super::{
    push_id, EngineStats, KeyRegistry, NodeId, RoutingTable, Timestamp, ValidationError,
    ValidationKind, WireCursor, WireError,
};
use crate::bilinear::POINT_LEN;
use crate::ecs::{
    ecs_sign, ecs_sign_unchecked, ecs_verify, ChainLink, ChainSequence, EcsSignature,
    Error as EcsError, KeyPair, Verdict,
};

/// Maximum hops accepted when decoding an update.
pub const MAX_HOPS: usize = 1024;

/// Maximum extension payload per hop accepted when decoding.
pub const MAX_EXT_LEN: usize = 4096;

/// One hop of the announced path.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SsbgpHop {
    pub ts: Timestamp,
    pub node: NodeId,
    /// Extension bytes folded into the signed link message; empty in the
    /// base protocol.
    pub ext: Vec<u8>,
}

impl SsbgpHop {
    pub fn new(ts: Timestamp, node: NodeId) -> Self {
        SsbgpHop {
            ts,
            node,
            ext: Vec::new(),
        }
    }

    /// The link message this hop signs: timestamp then extension bytes.
    pub fn message(&self) -> Vec<u8> {
        let mut msg = Vec::with_capacity(8 + self.ext.len());
        msg.extend_from_slice(&self.ts.0.to_be_bytes());
        msg.extend_from_slice(&self.ext);
        msg
    }
}

/// A route announcement: the path hops plus one chain signature.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SsbgpUpdate {
    pub hops: Vec<SsbgpHop>,
    pub sigma: EcsSignature,
}

impl SsbgpUpdate {
    /// The advertised node path, origin first.
    pub fn path(&self) -> Vec<NodeId> {
        self.hops.iter().map(|h| h.node.clone()).collect()
    }

    pub fn destination(&self) -> Option<&NodeId> {
        self.hops.first().map(|h| &h.node)
    }

    /// Bytes of signature material carried: one point, however long the
    /// path.
    pub fn signature_overhead(&self) -> usize {
        POINT_LEN
    }

    /// The chain sequence this update authenticates, with keys resolved
    /// through the registry. `None` when some hop node is unknown.
    pub fn sequence(&self, registry: &KeyRegistry) -> Option<ChainSequence> {
        let mut links = Vec::with_capacity(self.hops.len());
        for hop in &self.hops {
            let key = registry.get(&hop.node)?;
            links.push(ChainLink::new(hop.message(), key.clone()));
        }
        Some(ChainSequence::from_links(links))
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.hops.len() as u16).to_be_bytes());
        for hop in &self.hops {
            out.extend_from_slice(&hop.ts.0.to_be_bytes());
            push_id(&mut out, &hop.node);
            out.extend_from_slice(&(hop.ext.len() as u16).to_be_bytes());
            out.extend_from_slice(&hop.ext);
        }
        out.extend_from_slice(&self.sigma.to_point_bytes());
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, WireError> {
        let mut cursor = WireCursor::new(bytes);
        let count = u16::from_be_bytes(cursor.take::<2>()?) as usize;
        if count > MAX_HOPS {
            return Err(WireError::Oversized);
        }
        let mut hops = Vec::with_capacity(count);
        for _ in 0..count {
            let ts = Timestamp(u64::from_be_bytes(cursor.take::<8>()?));
            let node = cursor.take_id()?;
            let ext_len = u16::from_be_bytes(cursor.take::<2>()?) as usize;
            if ext_len > MAX_EXT_LEN {
                return Err(WireError::Oversized);
            }
            let ext = cursor.take_slice(ext_len)?.to_vec();
            hops.push(SsbgpHop { ts, node, ext });
        }
        let sigma = EcsSignature::from_point_bytes(&cursor.take::<{ POINT_LEN }>()?)
            .map_err(|_| WireError::BadPoint)?;
        cursor.finish()?;
        Ok(SsbgpUpdate { hops, sigma })
    }
}

/// Start announcing this node: a one-hop path signed from the empty chain.
pub fn ssbgp_initiate(self_id: &NodeId, now: Timestamp, keys: &KeyPair) -> SsbgpUpdate {
    let hop = SsbgpHop::new(now, self_id.clone());
    let sigma = ecs_sign(
        keys,
        &hop.message(),
        &ChainSequence::empty(),
        &EcsSignature::unit(),
    )
    .expect("empty chain cannot contain the signer's key");
    SsbgpUpdate {
        hops: vec![hop],
        sigma,
    }
}

/// Validate a received update and, on acceptance, install the route and
/// return the extended update to rebroadcast.
///
/// One signature verification covers the whole path. Extending an accepted
/// update skips re-verification (it was just checked) but still refuses to
/// sign a chain that already contains this node's key — that is a routing
/// loop surfacing at the signature layer, reported as such.
#[allow(clippy::too_many_arguments)]
pub fn ssbgp_process(
    self_id: &NodeId,
    keys: &KeyPair,
    update: &SsbgpUpdate,
    now: Timestamp,
    table: &mut RoutingTable,
    threshold_ms: u64,
    registry: &KeyRegistry,
    stats: &mut EngineStats,
) -> Result<SsbgpUpdate, ValidationError> {
    let hops = &update.hops;

    // (a) structure: nonempty, every hop node known to the registry.
    if hops.is_empty() {
        return Err(ValidationError::new(ValidationKind::BadFormat, 0));
    }
    for (j, hop) in hops.iter().enumerate() {
        if !registry.contains(&hop.node) {
            return Err(ValidationError::new(ValidationKind::BadFormat, j + 1));
        }
    }

    // (b) loops.
    for (j, hop) in hops.iter().enumerate() {
        if hop.node == *self_id {
            return Err(ValidationError::new(ValidationKind::LoopDetected, j + 1));
        }
        if hops[..j].iter().any(|prev| prev.node == hop.node) {
            return Err(ValidationError::new(ValidationKind::LoopDetected, j + 1));
        }
    }

    // (c) route quality.
    let destination = &hops[0].node;
    let metric = hops.len() as u32;
    if !table.would_accept(destination, metric) {
        return Err(ValidationError::new(ValidationKind::NotBetter, 0));
    }

    // (d) timestamps.
    for j in 1..hops.len() {
        match hops[j].ts.delta_from(hops[j - 1].ts) {
            Some(delta) if delta <= threshold_ms => {}
            _ => return Err(ValidationError::new(ValidationKind::StaleTimestamp, j + 1)),
        }
    }
    match now.delta_from(hops[hops.len() - 1].ts) {
        Some(delta) if delta <= threshold_ms => {}
        _ => {
            return Err(ValidationError::new(
                ValidationKind::StaleTimestamp,
                hops.len(),
            ))
        }
    }

    // (e) one chain verification for the whole path.
    let sequence = update
        .sequence(registry)
        .expect("nodes resolved in step (a)");
    stats.signature_checks += 1;
    if ecs_verify(&sequence, &update.sigma) != Verdict::Valid {
        return Err(ValidationError::new(ValidationKind::BadSignature, 0));
    }

    // Accept: extend the chain with this node's hop. A duplicate-key
    // refusal here means some path node shares this node's key — the same
    // route came back to its signer, i.e. a loop.
    let own_hop = SsbgpHop::new(now, self_id.clone());
    let sigma = match ecs_sign_unchecked(keys, &own_hop.message(), &sequence, &update.sigma) {
        Ok(sigma) => sigma,
        Err(EcsError::DuplicateKey) => {
            let position = hops
                .iter()
                .position(|hop| {
                    registry
                        .get(&hop.node)
                        .is_some_and(|key| key == keys.public())
                })
                .map(|j| j + 1)
                .unwrap_or(0);
            return Err(ValidationError::new(ValidationKind::LoopDetected, position));
        }
        Err(_) => return Err(ValidationError::new(ValidationKind::BadSignature, 0)),
    };

    let mut path = update.path();
    path.push(self_id.clone());
    table.apply(&path);

    let mut extended = update.clone();
    extended.hops.push(own_hop);
    extended.sigma = sigma;
    Ok(extended)
}
