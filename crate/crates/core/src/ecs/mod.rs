//! Chain signatures: an ordered sequence of signers each signs its own
//! message, and the whole chain is authenticated by one constant-size group
//! element.
//!
//! Signing is incremental — σᵢ = σᵢ₋₁ · H(prefixᵢ)^xᵢ with σ₀ the unit —
//! and verification checks the single pairing-product equation
//! ê(σ, g) = Π ê(H(prefixⱼ), Yⱼ) after insisting all signer keys are
//! distinct. A signature on a chain cannot be converted into a signature on
//! a strict prefix without the omitted signers' private keys; that property
//! is what the routing layer builds on.

mod sequence;
pub mod wire;

pub use sequence::{prefix_digest, ChainLink, ChainSequence, PREFIX_TAG};

use sequence::all_prefix_digests;

use crate::bilinear::{
    generator_prepared, pairing_product_is_identity, G1Element, GroupContext, PairedPoint, Scalar,
    POINT_LEN,
};
use rand::RngCore;
use std::collections::BTreeSet;
use std::fmt;

/// Errors raised by the signing and stripping operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A digest was requested for the empty sequence.
    #[error("cannot digest an empty sequence prefix")]
    EmptyPrefix,
    /// The signer's key already appears in the prior sequence.
    #[error("signer key already present in the sequence")]
    DuplicateKey,
    /// The prior (sequence, signature) pair failed verification.
    #[error("prior chain signature is invalid")]
    InvalidPriorSignature,
    /// The input signature to strip is not valid for the sequence.
    #[error("input signature is invalid for the sequence")]
    InvalidSignature,
    /// A supplied suffix key does not match the link at this position
    /// (1-based index into the sequence).
    #[error("suffix key does not match link at position {position}")]
    SuffixMismatch { position: usize },
}

/// A public key carried in both source groups, with its canonical 48-byte
/// identity cached. Equality, ordering and hashing all follow the canonical
/// bytes.
#[derive(Clone)]
pub struct PublicKey {
    point: PairedPoint,
    bytes: [u8; POINT_LEN],
}

impl PublicKey {
    pub fn new(point: PairedPoint) -> Self {
        let bytes = point.g1().to_bytes();
        PublicKey { point, bytes }
    }

    pub fn point(&self) -> &PairedPoint {
        &self.point
    }

    /// Canonical encoding: the compressed G1 half.
    pub fn as_bytes(&self) -> &[u8; POINT_LEN] {
        &self.bytes
    }
}

impl PartialEq for PublicKey {
    fn eq(&self, other: &Self) -> bool {
        self.bytes == other.bytes
    }
}

impl Eq for PublicKey {}

impl PartialOrd for PublicKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PublicKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.bytes.cmp(&other.bytes)
    }
}

impl std::hash::Hash for PublicKey {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.bytes.hash(state);
    }
}

impl fmt::Debug for PublicKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PublicKey({})", hex::encode(&self.bytes[..8]))
    }
}

/// A private scalar with its public key.
#[derive(Clone, Debug)]
pub struct KeyPair {
    private: Scalar,
    public: PublicKey,
}

impl KeyPair {
    /// Deterministically derive a key pair from a seed.
    pub fn generate(ctx: &GroupContext, seed: &[u8]) -> Self {
        let private = Scalar::from_seed(seed);
        let public = PublicKey::new(ctx.generator().exp(&private));
        KeyPair { private, public }
    }

    /// Rebuild a pair from its parts, checking that the public key really is
    /// g raised to the private scalar.
    pub fn from_parts(ctx: &GroupContext, private: Scalar, public: PublicKey) -> Option<Self> {
        if PublicKey::new(ctx.generator().exp(&private)) != public {
            return None;
        }
        Some(KeyPair { private, public })
    }

    pub fn private(&self) -> &Scalar {
        &self.private
    }

    pub fn public(&self) -> &PublicKey {
        &self.public
    }
}

/// A chain signature: one group element. The signature of the empty chain is
/// the distinguished unit value.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct EcsSignature(G1Element);

impl EcsSignature {
    /// The unit signature σ₀, valid for exactly the empty sequence.
    pub fn unit() -> Self {
        EcsSignature(G1Element::identity())
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_identity()
    }

    pub fn from_element(e: G1Element) -> Self {
        EcsSignature(e)
    }

    pub fn element(&self) -> &G1Element {
        &self.0
    }

    /// Bare 48-byte point encoding (the unit encodes as the identity point).
    /// Used where an enclosing format already knows a signature is present.
    pub fn to_point_bytes(&self) -> [u8; POINT_LEN] {
        self.0.to_bytes()
    }

    /// Decode a bare 48-byte point encoding.
    pub fn from_point_bytes(bytes: &[u8]) -> Result<Self, crate::bilinear::Error> {
        G1Element::from_bytes(bytes).map(EcsSignature)
    }
}

impl fmt::Debug for EcsSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            write!(f, "EcsSignature(unit)")
        } else {
            write!(f, "EcsSignature({})", hex::encode(&self.0.to_bytes()[..8]))
        }
    }
}

/// Outcome of a verification.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Valid,
    Invalid,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => write!(f, "VALID"),
            Verdict::Invalid => write!(f, "INVALID"),
        }
    }
}

fn has_duplicate_keys(seq: &ChainSequence) -> bool {
    let mut seen = BTreeSet::new();
    seq.links()
        .iter()
        .any(|l| !seen.insert(*l.pubkey().as_bytes()))
}

fn extend_signature(
    kp: &KeyPair,
    message: &[u8],
    prior_seq: &ChainSequence,
    prior_sig: &EcsSignature,
) -> EcsSignature {
    let appended = prior_seq.append(ChainLink::new(message.to_vec(), kp.public().clone()));
    let digest = prefix_digest(&appended).expect("appended sequence is nonempty");
    EcsSignature(prior_sig.0.combine(&digest.exp(kp.private())))
}

/// Extend a chain signature by one link.
///
/// Checks, in order: the signer's key must not already appear in the prior
/// sequence, and the prior (sequence, signature) pair must verify. On
/// success returns σᵢ = σᵢ₋₁ · H(prior ⊕ (message, public))^x over the
/// appended sequence. Start a chain by signing over the empty sequence with
/// the unit signature.
pub fn ecs_sign(
    kp: &KeyPair,
    message: &[u8],
    prior_seq: &ChainSequence,
    prior_sig: &EcsSignature,
) -> Result<EcsSignature, Error> {
    if prior_seq.contains_key(kp.public()) {
        return Err(Error::DuplicateKey);
    }
    if ecs_verify(prior_seq, prior_sig) == Verdict::Invalid {
        return Err(Error::InvalidPriorSignature);
    }
    Ok(extend_signature(kp, message, prior_seq, prior_sig))
}

/// [`ecs_sign`] without re-verifying the prior chain.
///
/// For callers that have just verified the prior pair themselves and extend
/// it in the same breath — the routing hot path. The duplicate-key check is
/// still performed. Guarded by tests asserting byte-identical output with
/// the checked path.
pub fn ecs_sign_unchecked(
    kp: &KeyPair,
    message: &[u8],
    prior_seq: &ChainSequence,
    prior_sig: &EcsSignature,
) -> Result<EcsSignature, Error> {
    if prior_seq.contains_key(kp.public()) {
        return Err(Error::DuplicateKey);
    }
    Ok(extend_signature(kp, message, prior_seq, prior_sig))
}

/// Verify a chain signature against a sequence.
///
/// The empty sequence is valid exactly with the unit signature. A nonempty
/// sequence is valid when no signer key repeats and the pairing-product
/// equation ê(σ, g) = Π ê(H(prefixⱼ), Yⱼ) holds; the check is evaluated as
/// one combined Miller loop.
pub fn ecs_verify(seq: &ChainSequence, sig: &EcsSignature) -> Verdict {
    if seq.is_empty() {
        return if sig.is_unit() {
            Verdict::Valid
        } else {
            Verdict::Invalid
        };
    }
    if has_duplicate_keys(seq) {
        return Verdict::Invalid;
    }
    let digests = all_prefix_digests(seq);
    let neg_sig = sig.0.inverse().to_affine();
    let digest_affine: Vec<_> = digests.iter().map(|d| d.to_affine()).collect();
    let prepared: Vec<_> = seq
        .links()
        .iter()
        .map(|l| l.pubkey().point().g2_prepared())
        .collect();
    let mut terms = Vec::with_capacity(seq.len() + 1);
    terms.push((&neg_sig, generator_prepared()));
    for (d, p) in digest_affine.iter().zip(prepared.iter()) {
        terms.push((d, p));
    }
    if pairing_product_is_identity(&terms) {
        Verdict::Valid
    } else {
        Verdict::Invalid
    }
}

/// Remove the last `suffix_privkeys.len()` links' contributions from a valid
/// chain signature, given those links' private keys in sequence order.
///
/// Realizes the algebra behind key extraction: with every suffix key in
/// hand, σ' = σ · Π H(prefixⱼ)^(-xⱼ) is a valid signature on the remaining
/// prefix. Errors if the input signature is invalid or a key does not match
/// its link.
pub fn ecs_strip(
    seq: &ChainSequence,
    sig: &EcsSignature,
    suffix_privkeys: &[Scalar],
) -> Result<EcsSignature, Error> {
    let k = suffix_privkeys.len();
    if k > seq.len() {
        return Err(Error::SuffixMismatch { position: 0 });
    }
    if ecs_verify(seq, sig) == Verdict::Invalid {
        return Err(Error::InvalidSignature);
    }
    let ctx = GroupContext::new();
    let start = seq.len() - k;
    for (offset, x) in suffix_privkeys.iter().enumerate() {
        let position = start + offset + 1;
        let expected = PublicKey::new(ctx.generator().exp(x));
        if seq.link(position - 1).map(ChainLink::pubkey) != Some(&expected) {
            return Err(Error::SuffixMismatch { position });
        }
    }
    let digests = all_prefix_digests(seq);
    let mut stripped = sig.0;
    for (offset, x) in suffix_privkeys.iter().enumerate() {
        let j = start + offset; // 0-based prefix index for link j+1
        stripped = stripped.combine(&digests[j].exp(x).inverse());
    }
    Ok(EcsSignature(stripped))
}

/// Verify many chains at once with one combined pairing product.
///
/// Each chain is weighted by a fresh random 128-bit exponent (small-exponent
/// batching) so that invalid chains cannot cancel each other; the result is
/// VALID exactly when every chain would verify individually, up to the
/// 2⁻¹²⁸ batching error. An empty list is vacuously valid.
pub fn ecs_aggregate_verify(chains: &[(ChainSequence, EcsSignature)]) -> Verdict {
    ecs_aggregate_verify_with_rng(chains, &mut rand::thread_rng())
}

/// [`ecs_aggregate_verify`] with a caller-supplied randomizer source, for
/// reproducible tests.
pub fn ecs_aggregate_verify_with_rng(
    chains: &[(ChainSequence, EcsSignature)],
    rng: &mut impl RngCore,
) -> Verdict {
    let mut combined_sig = G1Element::identity();
    let mut weighted_digests: Vec<G1Element> = Vec::new();
    let mut prepared_keys = Vec::new();
    for (seq, sig) in chains {
        if seq.is_empty() {
            if !sig.is_unit() {
                return Verdict::Invalid;
            }
            continue;
        }
        if has_duplicate_keys(seq) {
            return Verdict::Invalid;
        }
        let r = loop {
            let mut buf = [0u8; 16];
            rng.fill_bytes(&mut buf);
            let v = u128::from_be_bytes(buf);
            if v != 0 {
                break Scalar::from_u128(v);
            }
        };
        combined_sig = combined_sig.combine(&sig.0.exp(&r));
        for (digest, link) in all_prefix_digests(seq).iter().zip(seq.links()) {
            weighted_digests.push(digest.exp(&r));
            prepared_keys.push(link.pubkey().point().g2_prepared());
        }
    }
    if weighted_digests.is_empty() {
        // Nothing but empty chains (all with unit signatures), or no chains.
        return if combined_sig.is_identity() {
            Verdict::Valid
        } else {
            Verdict::Invalid
        };
    }
    let neg_combined = combined_sig.inverse().to_affine();
    let digest_affine: Vec<_> = weighted_digests.iter().map(|d| d.to_affine()).collect();
    let mut terms = Vec::with_capacity(digest_affine.len() + 1);
    terms.push((&neg_combined, generator_prepared()));
    for (d, p) in digest_affine.iter().zip(prepared_keys.iter()) {
        terms.push((d, p));
    }
    if pairing_product_is_identity(&terms) {
        Verdict::Valid
    } else {
        Verdict::Invalid
    }
}
