//! Wire format for a chain and its signature, used by test vectors and the
//! CLI.
//!
//! Layout: 4-byte big-endian link count ‖ per link (4-byte big-endian
//! message length ‖ message ‖ 48-byte public key) ‖ 1-byte signature marker
//! ‖ signature bytes. Marker `0x00` is the unit signature and carries no
//! bytes; marker `0x01` is followed by a 48-byte point that must not be the
//! identity — the unit has exactly one encoding.
//!
//! Link entries carry only the canonical G1 identity of each public key, so
//! decoding resolves keys through a caller-supplied lookup (a key registry
//! or vector key table).

use crate::bilinear::{PairedPoint, POINT_LEN};
use crate::ecs::{ChainLink, ChainSequence, EcsSignature, PublicKey};

/// Marker byte for the unit signature.
pub const SIG_MARKER_UNIT: u8 = 0x00;
/// Marker byte for a present (non-unit) signature.
pub const SIG_MARKER_POINT: u8 = 0x01;

/// Hard ceiling on the declared link count, to bound allocation on garbage
/// input.
const MAX_LINKS: u32 = 10_000;
/// Hard ceiling on a single declared message length.
const MAX_MESSAGE_LEN: u32 = 1 << 20;

/// Errors raised while decoding the chain wire format.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WireError {
    #[error("input ends before the declared content")]
    Truncated,
    #[error("trailing bytes after the signature")]
    Trailing,
    #[error("declared size is beyond protocol limits")]
    Oversized,
    #[error("unknown signature marker {0:#04x}")]
    BadMarker(u8),
    #[error("signature point encoding is invalid")]
    BadPoint,
    #[error("the unit signature must use the unit marker")]
    NonCanonicalUnit,
    #[error("no known key for link {position}")]
    UnknownKey { position: usize },
}

/// Serialize a sequence and its signature.
pub fn encode_chain(seq: &ChainSequence, sig: &EcsSignature) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&(seq.len() as u32).to_be_bytes());
    for link in seq.links() {
        out.extend_from_slice(&(link.message().len() as u32).to_be_bytes());
        out.extend_from_slice(link.message());
        out.extend_from_slice(link.pubkey().as_bytes());
    }
    if sig.is_unit() {
        out.push(SIG_MARKER_UNIT);
    } else {
        out.push(SIG_MARKER_POINT);
        out.extend_from_slice(&sig.to_point_bytes());
    }
    out
}

/// Decode a chain, resolving each link's public key bytes through `resolve`.
pub fn decode_chain(
    bytes: &[u8],
    mut resolve: impl FnMut(&[u8; POINT_LEN]) -> Option<PairedPoint>,
) -> Result<(ChainSequence, EcsSignature), WireError> {
    let mut cur = Cursor { bytes, pos: 0 };
    let count = u32::from_be_bytes(cur.take::<4>()?);
    if count > MAX_LINKS {
        return Err(WireError::Oversized);
    }
    let mut links = Vec::with_capacity(count as usize);
    for position in 1..=count as usize {
        let msg_len = u32::from_be_bytes(cur.take::<4>()?);
        if msg_len > MAX_MESSAGE_LEN {
            return Err(WireError::Oversized);
        }
        let message = cur.take_slice(msg_len as usize)?.to_vec();
        let key_bytes: [u8; POINT_LEN] = cur.take::<POINT_LEN>()?;
        let point = resolve(&key_bytes).ok_or(WireError::UnknownKey { position })?;
        let key = PublicKey::new(point);
        if key.as_bytes() != &key_bytes {
            // The resolver returned a key that does not match the identity
            // on the wire.
            return Err(WireError::UnknownKey { position });
        }
        links.push(ChainLink::new(message, key));
    }
    let marker = cur.take::<1>()?[0];
    let sig = match marker {
        SIG_MARKER_UNIT => EcsSignature::unit(),
        SIG_MARKER_POINT => {
            let point_bytes = cur.take::<POINT_LEN>()?;
            let sig =
                EcsSignature::from_point_bytes(&point_bytes).map_err(|_| WireError::BadPoint)?;
            if sig.is_unit() {
                return Err(WireError::NonCanonicalUnit);
            }
            sig
        }
        other => return Err(WireError::BadMarker(other)),
    };
    if cur.pos != bytes.len() {
        return Err(WireError::Trailing);
    }
    Ok((ChainSequence::from_links(links), sig))
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N], WireError> {
        let slice = self.take_slice(N)?;
        let mut out = [0u8; N];
        out.copy_from_slice(slice);
        Ok(out)
    }

    fn take_slice(&mut self, n: usize) -> Result<&'a [u8], WireError> {
        let end = self.pos.checked_add(n).ok_or(WireError::Truncated)?;
        if end > self.bytes.len() {
            return Err(WireError::Truncated);
        }
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilinear::{G1Element, GroupContext};
    use crate::ecs::{ecs_sign, ecs_verify, KeyPair, Verdict};
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn build(n: usize, tag: &str) -> (Vec<KeyPair>, ChainSequence, EcsSignature) {
        let ctx = GroupContext::new();
        let kps: Vec<KeyPair> = (0..n)
            .map(|i| KeyPair::generate(&ctx, format!("{tag}/{i}").as_bytes()))
            .collect();
        let mut seq = ChainSequence::empty();
        let mut sig = EcsSignature::unit();
        for (i, kp) in kps.iter().enumerate() {
            let msg = format!("{tag}-{i}");
            sig = ecs_sign(kp, msg.as_bytes(), &seq, &sig).unwrap();
            seq = seq.append(ChainLink::new(msg.into_bytes(), kp.public().clone()));
        }
        (kps, seq, sig)
    }

    fn resolver(kps: &[KeyPair]) -> BTreeMap<[u8; POINT_LEN], PairedPoint> {
        kps.iter()
            .map(|k| (*k.public().as_bytes(), *k.public().point()))
            .collect()
    }

    #[test]
    fn roundtrip_preserves_chain_and_verdict() {
        let (kps, seq, sig) = build(3, "wire-rt");
        let table = resolver(&kps);
        let bytes = encode_chain(&seq, &sig);
        let (seq2, sig2) = decode_chain(&bytes, |k| table.get(k).copied()).unwrap();
        assert_eq!(seq2, seq);
        assert_eq!(sig2, sig);
        assert_eq!(ecs_verify(&seq2, &sig2), Verdict::Valid);
    }

    #[test]
    fn empty_chain_roundtrips_to_one_marker_byte() {
        let bytes = encode_chain(&ChainSequence::empty(), &EcsSignature::unit());
        assert_eq!(bytes, vec![0, 0, 0, 0, SIG_MARKER_UNIT]);
        let (seq, sig) = decode_chain(&bytes, |_| None).unwrap();
        assert!(seq.is_empty());
        assert!(sig.is_unit());
    }

    #[test]
    fn decode_rejects_malformed_input() {
        let (kps, seq, sig) = build(2, "wire-bad");
        let table = resolver(&kps);
        let good = encode_chain(&seq, &sig);

        assert_eq!(
            decode_chain(&good[..good.len() - 1], |k| table.get(k).copied()),
            Err(WireError::Truncated)
        );

        let mut trailing = good.clone();
        trailing.push(0);
        assert_eq!(
            decode_chain(&trailing, |k| table.get(k).copied()),
            Err(WireError::Trailing)
        );

        let mut bad_marker = good.clone();
        let marker_at = good.len() - 1 - POINT_LEN;
        bad_marker[marker_at] = 0x77;
        assert_eq!(
            decode_chain(&bad_marker, |k| table.get(k).copied()),
            Err(WireError::BadMarker(0x77))
        );

        assert_eq!(
            decode_chain(&good, |_| None),
            Err(WireError::UnknownKey { position: 1 })
        );

        let mut huge = good.clone();
        huge[..4].copy_from_slice(&u32::MAX.to_be_bytes());
        assert_eq!(
            decode_chain(&huge, |k| table.get(k).copied()),
            Err(WireError::Oversized)
        );
    }

    #[test]
    fn identity_point_under_point_marker_is_rejected() {
        // The unit signature has exactly one wire form: the unit marker.
        let mut bytes = encode_chain(&ChainSequence::empty(), &EcsSignature::unit());
        bytes.pop();
        bytes.push(SIG_MARKER_POINT);
        bytes.extend_from_slice(&G1Element::identity().to_bytes());
        assert_eq!(
            decode_chain(&bytes, |_| None),
            Err(WireError::NonCanonicalUnit)
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn roundtrip_arbitrary_messages(msgs in proptest::collection::vec(
            proptest::collection::vec(any::<u8>(), 0..40), 0..5)) {
            let ctx = GroupContext::new();
            let kps: Vec<KeyPair> = (0..msgs.len())
                .map(|i| KeyPair::generate(&ctx, format!("wire-prop/{i}").as_bytes()))
                .collect();
            let mut seq = ChainSequence::empty();
            let mut sig = EcsSignature::unit();
            for (kp, msg) in kps.iter().zip(&msgs) {
                sig = ecs_sign(kp, msg, &seq, &sig).unwrap();
                seq = seq.append(ChainLink::new(msg.clone(), kp.public().clone()));
            }
            let table = resolver(&kps);
            let bytes = encode_chain(&seq, &sig);
            let (seq2, sig2) = decode_chain(&bytes, |k| table.get(k).copied()).unwrap();
            prop_assert_eq!(seq2, seq);
            prop_assert_eq!(sig2, sig);
        }
    }
}
