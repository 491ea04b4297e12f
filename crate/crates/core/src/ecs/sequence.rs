//! Ordered sequences of (message, public key) pairs and the operators the
//! signature scheme is defined over: prefix, overlap, longest-common-prefix
//! set, set union/intersection, and flat append.
//!
//! Also home to the canonical prefix encoding that is hashed during signing
//! and verification; the encoding is injective and order-sensitive.

use crate::bilinear::{hash_to_g1, G1Element, POINT_LEN};
use crate::ecs::{Error, PublicKey};
use std::collections::BTreeSet;

/// Version tag under which sequence prefixes are hashed.
pub const PREFIX_TAG: &[u8] = b"ECS-PREFIX-v1";

/// One element of a chain: a signer's message together with its public key.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ChainLink {
    message: Vec<u8>,
    pubkey: PublicKey,
}

impl ChainLink {
    pub fn new(message: impl Into<Vec<u8>>, pubkey: PublicKey) -> Self {
        ChainLink {
            message: message.into(),
            pubkey,
        }
    }

    pub fn message(&self) -> &[u8] {
        &self.message
    }

    pub fn pubkey(&self) -> &PublicKey {
        &self.pubkey
    }
}

/// An ordered sequence of chain links; may be empty. Order is significant,
/// and duplicate keys are permitted at this level — rejecting them is the
/// verifier's job.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ChainSequence {
    links: Vec<ChainLink>,
}

impl ChainSequence {
    /// The empty sequence.
    pub fn empty() -> Self {
        ChainSequence::default()
    }

    pub fn from_links(links: Vec<ChainLink>) -> Self {
        ChainSequence { links }
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn links(&self) -> &[ChainLink] {
        &self.links
    }

    pub fn link(&self, index: usize) -> Option<&ChainLink> {
        self.links.get(index)
    }

    /// The first `count` links as a new sequence.
    pub fn prefix(&self, count: usize) -> ChainSequence {
        ChainSequence {
            links: self.links[..count.min(self.links.len())].to_vec(),
        }
    }

    /// Flat append: the result is always a plain sequence one link longer,
    /// never a nested structure.
    pub fn append(&self, link: ChainLink) -> ChainSequence {
        let mut links = self.links.clone();
        links.push(link);
        ChainSequence { links }
    }

    /// Does `candidate` equal the first `candidate.len()` links of `self`?
    /// The empty sequence is a prefix of everything, and every sequence is a
    /// prefix of itself.
    pub fn has_prefix(&self, candidate: &ChainSequence) -> bool {
        candidate.len() <= self.len() && self.links[..candidate.len()] == candidate.links[..]
    }

    /// Two sequences overlap when they share a nonempty common prefix —
    /// equivalently, when both are nonempty and their first links are equal.
    pub fn overlaps(&self, other: &ChainSequence) -> bool {
        match (self.links.first(), other.links.first()) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }

    /// The element set of the longest common prefix; empty exactly when the
    /// sequences do not overlap.
    pub fn common_prefix_links(&self, other: &ChainSequence) -> BTreeSet<ChainLink> {
        self.links
            .iter()
            .zip(other.links.iter())
            .take_while(|(a, b)| a == b)
            .map(|(a, _)| a.clone())
            .collect()
    }

    /// All links of this sequence as a set.
    pub fn link_set(&self) -> BTreeSet<ChainLink> {
        self.links.iter().cloned().collect()
    }

    /// Set union of the two sequences' links.
    pub fn union_links(&self, other: &ChainSequence) -> BTreeSet<ChainLink> {
        let mut set = self.link_set();
        set.extend(other.links.iter().cloned());
        set
    }

    /// Set intersection of the two sequences' links.
    pub fn intersect_links(&self, other: &ChainSequence) -> BTreeSet<ChainLink> {
        let theirs = other.link_set();
        self.links
            .iter()
            .filter(|l| theirs.contains(*l))
            .cloned()
            .collect()
    }

    /// Whether any link carries the given public key.
    pub fn contains_key(&self, key: &PublicKey) -> bool {
        self.links.iter().any(|l| l.pubkey() == key)
    }

    /// Canonical encoding of the whole sequence: tag, 4-byte big-endian link
    /// count, then per link a 4-byte big-endian message length, the message,
    /// and the key's canonical point encoding. Length prefixes make the
    /// encoding injective; the count makes it prefix-unambiguous.
    pub fn prefix_encoding(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(
            PREFIX_TAG.len()
                + 4
                + self
                    .links
                    .iter()
                    .map(|l| 4 + l.message.len() + POINT_LEN)
                    .sum::<usize>(),
        );
        out.extend_from_slice(PREFIX_TAG);
        out.extend_from_slice(&(self.links.len() as u32).to_be_bytes());
        for link in &self.links {
            out.extend_from_slice(&(link.message.len() as u32).to_be_bytes());
            out.extend_from_slice(&link.message);
            out.extend_from_slice(link.pubkey.as_bytes());
        }
        out
    }
}

/// Hash a nonempty sequence prefix onto G1; this is the H(⟨…⟩) of the
/// signing and verification equations.
pub fn prefix_digest(prefix: &ChainSequence) -> Result<G1Element, Error> {
    if prefix.is_empty() {
        return Err(Error::EmptyPrefix);
    }
    Ok(hash_to_g1(&prefix.prefix_encoding()))
}

/// Digests of every nonempty prefix of `seq`, index j-1 holding the digest
/// of the first j links. Computed in one pass over the encoding.
pub(crate) fn all_prefix_digests(seq: &ChainSequence) -> Vec<G1Element> {
    let mut body: Vec<u8> = Vec::new();
    let mut out = Vec::with_capacity(seq.len());
    for j in 1..=seq.len() {
        let link = &seq.links()[j - 1];
        body.extend_from_slice(&(link.message().len() as u32).to_be_bytes());
        body.extend_from_slice(link.message());
        body.extend_from_slice(link.pubkey().as_bytes());
        let mut enc = Vec::with_capacity(PREFIX_TAG.len() + 4 + body.len());
        enc.extend_from_slice(PREFIX_TAG);
        enc.extend_from_slice(&(j as u32).to_be_bytes());
        enc.extend_from_slice(&body);
        out.push(hash_to_g1(&enc));
    }
    out
}
