//! Pairing-friendly group abstraction over BLS12-381.
//!
//! The signature scheme is specified against a symmetric pairing
//! ê: G1 × G1 → Gt, while practical curves are asymmetric (Type-3). The
//! bridge: every point that can appear as a *second* pairing argument — the
//! generator and public keys — is carried as a [`PairedPoint`], the same
//! discrete log expressed in both source groups. [`pairing`] then reads its
//! first argument from G1 and its second from the G2 half of the pair, which
//! preserves the symmetric verification equations verbatim.
//!
//! Canonical encodings crossing module boundaries: scalars are 32-byte
//! big-endian integers, G1 points are 48-byte compressed (see [`POINT_LEN`]).

use bls12_381::hash_to_curve::{ExpandMsgXmd, HashToCurve};
use bls12_381::{
    multi_miller_loop, G1Affine, G1Projective, G2Affine, G2Prepared, G2Projective, Gt, Scalar as Fr,
};
use ff::Field;
use group::{Curve, Group};
use sha2::{Digest, Sha512};
use std::fmt;
use std::sync::OnceLock;

/// Domain separation tag for hashing messages onto G1.
pub const HASH_DST: &[u8] = b"ECS-SSBGP-v1";

/// Domain separation tag for deriving scalars from seeds.
const SCALAR_DST: &[u8] = b"ECS-SCALAR-v1";

/// Length in bytes of a canonically serialized G1 element.
pub const POINT_LEN: usize = 48;

/// Length in bytes of a canonically serialized scalar.
pub const SCALAR_LEN: usize = 32;

/// Length in bytes of a serialized [`PairedPoint`] (G1 half plus G2 half).
pub const PAIRED_POINT_LEN: usize = 144;

/// Errors raised by deserialization and pair validation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Input has the wrong length for the type being decoded.
    #[error("wrong encoding length: expected {expected}, got {got}")]
    WrongLength { expected: usize, got: usize },
    /// Bytes do not decode to a point on the curve in the right subgroup.
    #[error("invalid point encoding")]
    InvalidPoint,
    /// Bytes do not decode to a canonical scalar below the group order.
    #[error("invalid scalar encoding")]
    InvalidScalar,
    /// The two halves of a paired point are not the same discrete log.
    #[error("paired point halves disagree")]
    InconsistentPair,
}

/// Common group parameters: order, generator and security level.
///
/// All operations on the group types are pure; the context exists to hand out
/// the generator and the public parameters in one place.
#[derive(Debug, Clone, Copy, Default)]
pub struct GroupContext {
    _private: (),
}

/// Big-endian bytes of the prime group order
/// (the BLS12-381 scalar field modulus).
pub const GROUP_ORDER_BE: [u8; SCALAR_LEN] = [
    0x73, 0xed, 0xa7, 0x53, 0x29, 0x9d, 0x7d, 0x48, 0x33, 0x39, 0xd8, 0x08, 0x09, 0xa1, 0xd8, 0x05,
    0x53, 0xbd, 0xa4, 0x02, 0xff, 0xfe, 0x5b, 0xfe, 0xff, 0xff, 0xff, 0xff, 0x00, 0x00, 0x00, 0x01,
];

impl GroupContext {
    pub fn new() -> Self {
        GroupContext { _private: () }
    }

    /// Claimed security level in bits.
    pub fn security_level(&self) -> u32 {
        128
    }

    /// The group generator, carried in both source groups.
    pub fn generator(&self) -> PairedPoint {
        PairedPoint::generator()
    }

    /// Big-endian encoding of the prime group order q.
    pub fn order_bytes(&self) -> [u8; SCALAR_LEN] {
        GROUP_ORDER_BE
    }

    /// Derive a scalar from a seed; see [`Scalar::from_seed`].
    pub fn scalar_from_seed(&self, seed: &[u8]) -> Scalar {
        Scalar::from_seed(seed)
    }
}

/// An integer modulo the group order; exponents and private keys live here.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Scalar(pub(crate) Fr);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Fr::ZERO)
    }

    pub fn one() -> Self {
        Scalar(Fr::ONE)
    }

    pub fn is_zero(&self) -> bool {
        bool::from(self.0.is_zero())
    }

    pub fn from_u64(v: u64) -> Self {
        Scalar(Fr::from(v))
    }

    /// A 128-bit scalar; used for small-exponent batching.
    pub fn from_u128(v: u128) -> Self {
        Scalar(Fr::from_raw([v as u64, (v >> 64) as u64, 0, 0]))
    }

    /// Deterministically derive a nonzero scalar from a seed.
    ///
    /// Expands the seed with SHA-512 under a fixed domain tag and reduces the
    /// 64-byte digest modulo the group order, which keeps the output bias
    /// negligible. The same seed always yields the same scalar; distinct
    /// seeds yield independent-looking ones.
    pub fn from_seed(seed: &[u8]) -> Self {
        let mut counter = 0u8;
        loop {
            let digest = Sha512::new()
                .chain(SCALAR_DST)
                .chain((seed.len() as u64).to_be_bytes())
                .chain(seed)
                .chain([counter])
                .finalize();
            let mut wide = [0u8; 64];
            wide.copy_from_slice(&digest);
            let fr = Fr::from_bytes_wide(&wide);
            if !bool::from(fr.is_zero()) {
                return Scalar(fr);
            }
            counter = counter.wrapping_add(1);
        }
    }

    /// Canonical 32-byte big-endian encoding.
    pub fn to_bytes(&self) -> [u8; SCALAR_LEN] {
        let mut le = self.0.to_bytes();
        le.reverse();
        le
    }

    /// Decode a canonical big-endian scalar; rejects values ≥ q and
    /// wrong-length input.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, Error> {
        if bytes.len() != SCALAR_LEN {
            return Err(Error::WrongLength {
                expected: SCALAR_LEN,
                got: bytes.len(),
            });
        }
        let mut le = [0u8; SCALAR_LEN];
        le.copy_from_slice(bytes);
        le.reverse();
        Option::<Fr>::from(Fr::from_bytes(&le))
            .map(Scalar)
            .ok_or(Error::InvalidScalar)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", hex::encode(self.to_bytes()))
    }
}

impl std::ops::Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 + rhs.0)
    }
}

impl std::ops::Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 - rhs.0)
    }
}

impl std::ops::Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 * rhs.0)
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

/// An element of the first source group; signatures and hash outputs live
/// here. The group operation is written multiplicatively: [`combine`] is the
/// product and [`exp`] the exponentiation of the scheme's equations.
///
/// [`combine`]: G1Element::combine
/// [`exp`]: G1Element::exp
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct G1Element(pub(crate) G1Projective);

impl G1Element {
    pub fn identity() -> Self {
        G1Element(G1Projective::identity())
    }

    pub fn is_identity(&self) -> bool {
        bool::from(self.0.is_identity())
    }

    /// The G1 half of the group generator.
    pub fn generator() -> Self {
        G1Element(G1Projective::generator())
    }

    /// Group exponentiation (scalar multiplication in additive notation).
    pub fn exp(&self, e: &Scalar) -> Self {
        G1Element(self.0 * e.0)
    }

    /// Group product.
    pub fn combine(&self, other: &Self) -> Self {
        G1Element(self.0 + other.0)
    }

    /// Group inverse, so that `x.combine(&x.inverse())` is the identity.
    pub fn inverse(&self) -> Self {
        G1Element(-self.0)
    }

    /// Subgroup membership check (prime-order subgroup of the curve).
    pub fn in_subgroup(&self) -> bool {
        bool::from(self.0.to_affine().is_torsion_free())
    }

    /// Canonical 48-byte compressed encoding.
    pub fn to_bytes(&self) -> [u8; POINT_LEN] {
        self.0.to_affine().to_compressed()
    }

    /// Decode a compressed point; rejects off-curve, out-of-subgroup and
    /// wrong-length input.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, Error> {
        if bytes.len() != POINT_LEN {
            return Err(Error::WrongLength {
                expected: POINT_LEN,
                got: bytes.len(),
            });
        }
        let mut buf = [0u8; POINT_LEN];
        buf.copy_from_slice(bytes);
        Option::<G1Affine>::from(G1Affine::from_compressed(&buf))
            .map(|p| G1Element(G1Projective::from(p)))
            .ok_or(Error::InvalidPoint)
    }

    pub(crate) fn to_affine(self) -> G1Affine {
        self.0.to_affine()
    }
}

impl fmt::Debug for G1Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G1Element({})", hex::encode(&self.to_bytes()[..8]))
    }
}

/// A point carried in both source groups: the same discrete log over the G1
/// and G2 generators. Generators and public keys — everything that can stand
/// as the second argument of [`pairing`] — use this representation.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct PairedPoint {
    g1: G1Projective,
    g2: G2Projective,
}

impl PairedPoint {
    /// The group generator in both source groups.
    pub fn generator() -> Self {
        PairedPoint {
            g1: G1Projective::generator(),
            g2: G2Projective::generator(),
        }
    }

    /// Exponentiation applied to both halves.
    pub fn exp(&self, e: &Scalar) -> Self {
        PairedPoint {
            g1: self.g1 * e.0,
            g2: self.g2 * e.0,
        }
    }

    /// The G1 half; this is the element whose encoding identifies the point.
    pub fn g1(&self) -> G1Element {
        G1Element(self.g1)
    }

    /// Canonical encoding: compressed G1 half followed by compressed G2 half.
    pub fn to_bytes(&self) -> [u8; PAIRED_POINT_LEN] {
        let mut out = [0u8; PAIRED_POINT_LEN];
        out[..POINT_LEN].copy_from_slice(&self.g1.to_affine().to_compressed());
        out[POINT_LEN..].copy_from_slice(&self.g2.to_affine().to_compressed());
        out
    }

    /// Decode and validate both halves, including the consistency check that
    /// they share one discrete log: ê(P1, h) = ê(g, P2) for generators g, h.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, Error> {
        if bytes.len() != PAIRED_POINT_LEN {
            return Err(Error::WrongLength {
                expected: PAIRED_POINT_LEN,
                got: bytes.len(),
            });
        }
        let mut b1 = [0u8; POINT_LEN];
        b1.copy_from_slice(&bytes[..POINT_LEN]);
        let mut b2 = [0u8; 96];
        b2.copy_from_slice(&bytes[POINT_LEN..]);
        let p1 =
            Option::<G1Affine>::from(G1Affine::from_compressed(&b1)).ok_or(Error::InvalidPoint)?;
        let p2 =
            Option::<G2Affine>::from(G2Affine::from_compressed(&b2)).ok_or(Error::InvalidPoint)?;
        // ê(P1, h) · ê(g, P2)^-1 must be the identity.
        let check = multi_miller_loop(&[
            (&p1, &G2Prepared::from(G2Affine::generator())),
            (&(-G1Affine::generator()), &G2Prepared::from(p2)),
        ])
        .final_exponentiation();
        if check != Gt::identity() {
            return Err(Error::InconsistentPair);
        }
        Ok(PairedPoint {
            g1: G1Projective::from(p1),
            g2: G2Projective::from(p2),
        })
    }

    pub(crate) fn g2_prepared(&self) -> G2Prepared {
        G2Prepared::from(self.g2.to_affine())
    }
}

impl fmt::Debug for PairedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PairedPoint({})",
            hex::encode(&self.g1().to_bytes()[..8])
        )
    }
}

/// An element of the pairing target group.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct GtElement(Gt);

impl GtElement {
    pub fn identity() -> Self {
        GtElement(Gt::identity())
    }

    pub fn is_identity(&self) -> bool {
        bool::from(self.0.is_identity())
    }

    /// Group product in the target group.
    pub fn combine(&self, other: &Self) -> Self {
        GtElement(self.0 + other.0)
    }

    /// Exponentiation in the target group.
    pub fn exp(&self, e: &Scalar) -> Self {
        GtElement(self.0 * e.0)
    }
}

impl fmt::Debug for GtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            write!(f, "GtElement(identity)")
        } else {
            write!(f, "GtElement(..)")
        }
    }
}

/// The bilinear map ê. The second argument is one of the points maintained in
/// both source groups; its G2 half feeds the underlying asymmetric pairing.
pub fn pairing(a: &G1Element, b: &PairedPoint) -> GtElement {
    GtElement(bls12_381::pairing(&a.to_affine(), &b.g2.to_affine()))
}

/// Deterministically hash an arbitrary byte string onto G1
/// (standardized hash-to-curve, fixed domain tag).
pub fn hash_to_g1(msg: &[u8]) -> G1Element {
    let p = <G1Projective as HashToCurve<ExpandMsgXmd<sha2::Sha256>>>::hash_to_curve(msg, HASH_DST);
    G1Element(p)
}

/// The generator's prepared G2 half, cached: every verification equation
/// pairs something with the generator.
pub(crate) fn generator_prepared() -> &'static G2Prepared {
    static PREP: OnceLock<G2Prepared> = OnceLock::new();
    PREP.get_or_init(|| G2Prepared::from(G2Affine::generator()))
}

/// Evaluate a pairing product Π ê(aᵢ, bᵢ) with one Miller loop and one final
/// exponentiation, and report whether it is the identity. All verification
/// equations in this crate reduce to such a check.
pub(crate) fn pairing_product_is_identity(terms: &[(&G1Affine, &G2Prepared)]) -> bool {
    multi_miller_loop(terms).final_exponentiation() == Gt::identity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(seed: &str) -> Scalar {
        Scalar::from_seed(seed.as_bytes())
    }

    #[test]
    fn scalar_derivation_is_deterministic_and_nonzero() {
        let a = s("a");
        let b = s("a");
        assert_eq!(a, b);
        assert!(!a.is_zero());
        assert_ne!(a, s("b"));
    }

    #[test]
    fn scalar_seeds_never_hit_zero_statistically() {
        for i in 0u32..10_000 {
            assert!(!Scalar::from_seed(&i.to_be_bytes()).is_zero());
        }
    }

    #[test]
    fn scalar_roundtrips_and_rejects_modulus() {
        let x = s("roundtrip");
        assert_eq!(Scalar::from_bytes(&x.to_bytes()).unwrap(), x);
        // The group order itself is not a canonical scalar.
        assert_eq!(
            Scalar::from_bytes(&GROUP_ORDER_BE),
            Err(Error::InvalidScalar)
        );
        assert!(matches!(
            Scalar::from_bytes(&[0u8; 31]),
            Err(Error::WrongLength { .. })
        ));
    }

    #[test]
    fn exponent_identities() {
        let g = G1Element::generator();
        assert_eq!(g.exp(&Scalar::one()), g);
        assert_eq!(g.exp(&Scalar::zero()), G1Element::identity());
        let a = s("exp-a");
        let b = s("exp-b");
        assert_eq!(g.exp(&a).exp(&b), g.exp(&(a * b)));
    }

    #[test]
    fn combine_is_an_abelian_group_operation() {
        let g = G1Element::generator();
        let x = g.exp(&s("x"));
        assert_eq!(x.combine(&G1Element::identity()), x);
        let a = g.exp(&s("ga"));
        let b = g.exp(&s("gb"));
        assert_eq!(a.combine(&b), b.combine(&a));
        assert_eq!(
            g.exp(&s("ga")).combine(&g.exp(&s("gb"))),
            g.exp(&(s("ga") + s("gb")))
        );
        assert_eq!(x.combine(&x.inverse()), G1Element::identity());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn combine_group_laws(sa in any::<u64>(), sb in any::<u64>(), sc in any::<u64>()) {
            let g = G1Element::generator();
            let a = g.exp(&Scalar::from_seed(&sa.to_be_bytes()));
            let b = g.exp(&Scalar::from_seed(&sb.to_be_bytes()));
            let c = g.exp(&Scalar::from_seed(&sc.to_be_bytes()));
            // associativity, commutativity, identity, inverse
            prop_assert_eq!(a.combine(&b).combine(&c), a.combine(&b.combine(&c)));
            prop_assert_eq!(a.combine(&b), b.combine(&a));
            prop_assert_eq!(a.combine(&G1Element::identity()), a);
            prop_assert_eq!(a.combine(&a.inverse()), G1Element::identity());
        }
    }

    #[test]
    fn pairing_is_bilinear() {
        let ctx = GroupContext::new();
        let g1 = G1Element::generator();
        let gp = ctx.generator();
        let base = pairing(&g1, &gp);
        for i in 0u32..100 {
            let a = Scalar::from_seed(&[b"bilin-a".as_ref(), &i.to_be_bytes()].concat());
            let b = Scalar::from_seed(&[b"bilin-b".as_ref(), &i.to_be_bytes()].concat());
            assert_eq!(pairing(&g1.exp(&a), &gp.exp(&b)), base.exp(&(a * b)));
        }
    }

    #[test]
    fn pairing_symmetry_and_degeneracy() {
        let ctx = GroupContext::new();
        let g1 = G1Element::generator();
        let gp = ctx.generator();
        let x = s("sym");
        assert_eq!(pairing(&g1.exp(&x), &gp), pairing(&g1, &gp.exp(&x)));
        assert_eq!(pairing(&G1Element::identity(), &gp), GtElement::identity());
        // non-degeneracy: ê(g, g) generates, in particular is not the identity
        assert!(!pairing(&g1, &gp).is_identity());
    }

    #[test]
    fn hash_to_g1_is_deterministic_and_collision_free_smoke() {
        assert_eq!(hash_to_g1(b"abc"), hash_to_g1(b"abc"));
        assert_ne!(hash_to_g1(b""), hash_to_g1(b"a"));
        assert!(hash_to_g1(b"subgroup").in_subgroup());
    }

    #[test]
    fn hash_to_g1_outputs_stay_in_subgroup() {
        for i in 0u32..1000 {
            assert!(hash_to_g1(&i.to_be_bytes()).in_subgroup());
        }
    }

    #[test]
    fn point_serialization_roundtrips_at_fixed_length() {
        let g = G1Element::generator();
        let x = g.exp(&s("ser"));
        let bytes = x.to_bytes();
        assert_eq!(bytes.len(), POINT_LEN);
        let back = G1Element::from_bytes(&bytes).unwrap();
        assert_eq!(back, x);
        assert_eq!(back.to_bytes(), bytes);
        for i in 0u32..100 {
            assert_eq!(hash_to_g1(&i.to_be_bytes()).to_bytes().len(), POINT_LEN);
        }
    }

    #[test]
    fn point_deserialization_rejects_garbage() {
        assert_eq!(
            G1Element::from_bytes(&[0xFF; POINT_LEN]),
            Err(Error::InvalidPoint)
        );
        assert!(matches!(
            G1Element::from_bytes(&[0u8; 47]),
            Err(Error::WrongLength { .. })
        ));
    }

    #[test]
    fn serialization_is_injective() {
        use std::collections::BTreeSet;
        let mut seen = BTreeSet::new();
        for i in 0u32..1000 {
            let p = hash_to_g1(&[b"inj".as_ref(), &i.to_be_bytes()].concat());
            assert!(seen.insert(p.to_bytes().to_vec()), "collision at {i}");
        }
    }

    #[test]
    fn paired_point_roundtrips_and_checks_consistency() {
        let ctx = GroupContext::new();
        let y = ctx.generator().exp(&s("pair"));
        let bytes = y.to_bytes();
        assert_eq!(PairedPoint::from_bytes(&bytes).unwrap(), y);

        // Mismatched halves must be rejected: G1 half of one key, G2 half of
        // another.
        let z = ctx.generator().exp(&s("pair-other"));
        let mut forged = [0u8; PAIRED_POINT_LEN];
        forged[..POINT_LEN].copy_from_slice(&y.to_bytes()[..POINT_LEN]);
        forged[POINT_LEN..].copy_from_slice(&z.to_bytes()[POINT_LEN..]);
        assert_eq!(
            PairedPoint::from_bytes(&forged),
            Err(Error::InconsistentPair)
        );
    }

    #[test]
    fn group_context_reports_parameters() {
        let ctx = GroupContext::new();
        assert_eq!(ctx.security_level(), 128);
        assert_eq!(ctx.order_bytes(), GROUP_ORDER_BE);
        assert_eq!(ctx.generator().g1(), G1Element::generator());
    }
}
