//! Per-hop baseline signatures: σ = H(m)^x on G1, verified with one
//! pairing-product check ê(σ, g) = ê(H(m), Y). This is the unit of
//! authentication for the stateless baseline and the recipient-addressed
//! protocol; the chain-signature protocol replaces a vector of these with
//! one aggregate element.

use crate::bilinear::{hash_to_g1, G1Element, Scalar, POINT_LEN};
use crate::ecs::PublicKey;

/// A 48-byte signature over a single statement.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BaseSignature(G1Element);

impl BaseSignature {
    pub fn from_element(element: G1Element) -> Self {
        BaseSignature(element)
    }

    pub fn element(&self) -> &G1Element {
        &self.0
    }

    pub fn to_bytes(&self) -> [u8; POINT_LEN] {
        self.0.to_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, crate::bilinear::Error> {
        G1Element::from_bytes(bytes).map(BaseSignature)
    }
}

/// Sign one statement: H(m) raised to the private key.
pub fn base_sign(private: &Scalar, message: &[u8]) -> BaseSignature {
    BaseSignature(hash_to_g1(message).exp(private))
}

/// Check ê(σ, g) = ê(H(m), Y), folded into one Miller loop as
/// ê(σ⁻¹, g) · ê(H(m), Y) = 1.
pub fn base_verify(key: &PublicKey, message: &[u8], signature: &BaseSignature) -> bool {
    let digest = hash_to_g1(message);
    let neg_sig = signature.0.inverse().to_affine();
    let digest_affine = digest.to_affine();
    let key_prepared = key.point().g2_prepared();
    crate::bilinear::pairing_product_is_identity(&[
        (&neg_sig, crate::bilinear::generator_prepared()),
        (&digest_affine, &key_prepared),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilinear::GroupContext;
    use crate::ecs::KeyPair;

    fn keypair(seed: &[u8]) -> KeyPair {
        KeyPair::generate(&GroupContext::new(), seed)
    }

    #[test]
    fn sign_verify_roundtrip() {
        let kp = keypair(b"basesig/1");
        let sig = base_sign(kp.private(), b"statement");
        assert!(base_verify(kp.public(), b"statement", &sig));
    }

    #[test]
    fn verify_rejects_wrong_message_key_and_signature() {
        let kp = keypair(b"basesig/2");
        let other = keypair(b"basesig/3");
        let sig = base_sign(kp.private(), b"statement");

        assert!(!base_verify(kp.public(), b"statemenu", &sig));
        assert!(!base_verify(other.public(), b"statement", &sig));
        let forged = base_sign(other.private(), b"statement");
        assert!(!base_verify(kp.public(), b"statement", &forged));
    }

    #[test]
    fn signature_serialization_roundtrip() {
        let kp = keypair(b"basesig/4");
        let sig = base_sign(kp.private(), b"wire");
        let bytes = sig.to_bytes();
        assert_eq!(bytes.len(), POINT_LEN);
        let back = BaseSignature::from_bytes(&bytes).unwrap();
        assert_eq!(back, sig);
        assert!(base_verify(kp.public(), b"wire", &back));
    }
}
