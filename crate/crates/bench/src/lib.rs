//! Shared fixtures for the benchmark targets.

use chainsig_core::bilinear::GroupContext;
use chainsig_core::ecs::{ecs_sign_unchecked, ChainLink, ChainSequence, EcsSignature, KeyPair};

/// An honestly signed chain with the signature retained at every length:
/// `sigs_at[n]` authenticates `sequence.prefix(n)`.
pub struct ChainFixture {
    pub keypairs: Vec<KeyPair>,
    pub sequence: ChainSequence,
    pub sigs_at: Vec<EcsSignature>,
}

pub fn build_chain(n: usize, tag: &str) -> ChainFixture {
    let ctx = GroupContext::new();
    let mut keypairs = Vec::new();
    let mut sequence = ChainSequence::empty();
    let mut sigs_at = vec![EcsSignature::unit()];
    for i in 0..n {
        let kp = KeyPair::generate(&ctx, format!("{tag}/key/{i}").as_bytes());
        let msg = format!("{tag}/msg/{i}").into_bytes();
        let sig = ecs_sign_unchecked(&kp, &msg, &sequence, sigs_at.last().unwrap())
            .expect("honest extension signs");
        sequence = sequence.append(ChainLink::new(msg, kp.public().clone()));
        sigs_at.push(sig);
        keypairs.push(kp);
    }
    ChainFixture {
        keypairs,
        sequence,
        sigs_at,
    }
}
