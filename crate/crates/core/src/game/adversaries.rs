//! Built-in adversary strategies: negative controls that exercise the known
//! attack shapes against the harness. None of them wins; each loses for a
//! documented, different reason.

use super::{Adversary, AdversaryCtx, ForgeryClaim, Omega};
use crate::bilinear::GroupContext;
use crate::bilinear::{hash_to_g1, Scalar};
use crate::ecs::{
    ecs_sign_unchecked, ecs_strip, ChainLink, ChainSequence, EcsSignature, KeyPair, PublicKey,
};
use rand_chacha::rand_core::RngCore;

fn link(i: usize, key: PublicKey) -> ChainLink {
    ChainLink::new(format!("m{i}").into_bytes(), key)
}

/// Asks the sign oracle for a sequence and returns exactly that answer.
/// The signature verifies, but the sequence is in the sign-query log.
pub struct Replay;

impl Adversary for Replay {
    fn name(&self) -> &'static str {
        "replay"
    }

    fn describe(&self) -> &'static str {
        "returns a sign-oracle answer verbatim; loses on the never-signed condition"
    }

    fn run(&self, ctx: &mut AdversaryCtx<'_>) -> Option<ForgeryClaim> {
        let keys = ctx.public_keys();
        let take = keys.len().min(2);
        let seq = ChainSequence::from_links(
            keys.into_iter()
                .take(take)
                .enumerate()
                .map(|(i, k)| link(i, k))
                .collect(),
        );
        let sigma = ctx.sign(&seq).ok()?;
        Some(ForgeryClaim {
            sequence: seq,
            signature: sigma,
        })
    }
}

/// Asks for a signature on a chain, then claims a strict prefix with the
/// same signature. Lost already at verification: a chain signature does not
/// transfer to prefixes.
pub struct NaiveTruncate;

impl Adversary for NaiveTruncate {
    fn name(&self) -> &'static str {
        "naive-truncate"
    }

    fn describe(&self) -> &'static str {
        "reuses a full-chain signature on a strict prefix; loses at verification"
    }

    fn run(&self, ctx: &mut AdversaryCtx<'_>) -> Option<ForgeryClaim> {
        let keys = ctx.public_keys();
        let take = keys.len().min(3);
        let seq = ChainSequence::from_links(
            keys.into_iter()
                .take(take)
                .enumerate()
                .map(|(i, k)| link(i, k))
                .collect(),
        );
        let sigma = ctx.sign(&seq).ok()?;
        Some(ForgeryClaim {
            sequence: seq.prefix(seq.len().saturating_sub(1)),
            signature: sigma,
        })
    }
}

/// Divides the extracted suffix keys' contributions out of a signed chain
/// and claims the remaining prefix. The claim verifies, but the judgment
/// classifies it signable: the residue beyond the common prefix consists of
/// extracted keys only, so this is exactly what the extracted keys entitle
/// the adversary to compute.
pub struct StripExtracted;

impl Adversary for StripExtracted {
    fn name(&self) -> &'static str {
        "strip-extracted"
    }

    fn describe(&self) -> &'static str {
        "strips extracted suffix keys off a signed chain; verifies but is judged signable"
    }

    fn run(&self, ctx: &mut AdversaryCtx<'_>) -> Option<ForgeryClaim> {
        let keys = ctx.public_keys();
        let n = keys.len();
        let mut suffix_scalars: Vec<Option<Scalar>> = vec![None; n];
        for (i, x) in ctx.setup_extracted() {
            suffix_scalars[*i] = Some(*x);
        }
        // The largest fully-extracted tail [start, n): those links can be
        // stripped. Under ω=2 extend it by querying the extract oracle,
        // always leaving one leading link so the claim is a nonempty prefix.
        let mut start = n;
        while start > 0 && suffix_scalars[start - 1].is_some() {
            start -= 1;
        }
        if ctx.omega() == Omega::Two {
            while start > 1 {
                match ctx.extract(start - 1) {
                    Ok(Some(x)) => {
                        suffix_scalars[start - 1] = Some(x);
                        start -= 1;
                    }
                    _ => break,
                }
            }
        }
        let start = start.max(usize::from(n > 0));

        let full = ChainSequence::from_links(
            keys.iter()
                .cloned()
                .enumerate()
                .map(|(i, k)| link(i, k))
                .collect(),
        );
        let sigma = ctx.sign(&full).ok()?;
        let suffix: Vec<Scalar> = (start..n).map(|i| suffix_scalars[i].unwrap()).collect();
        let stripped = ecs_strip(&full, &sigma, &suffix).ok()?;
        Some(ForgeryClaim {
            sequence: full.prefix(start),
            signature: stripped,
        })
    }
}

/// Makes no queries and presents a pseudorandom group element as the
/// signature on a fresh one-link sequence. Verification fails, negligibly
/// short of always.
pub struct RandomForge;

impl Adversary for RandomForge {
    fn name(&self) -> &'static str {
        "random-forge"
    }

    fn describe(&self) -> &'static str {
        "guesses a signature without any queries; loses at verification"
    }

    fn run(&self, ctx: &mut AdversaryCtx<'_>) -> Option<ForgeryClaim> {
        let keys = ctx.public_keys();
        let first = keys.into_iter().next()?;
        let mut guess = [0u8; 32];
        ctx.rng.fill_bytes(&mut guess);
        Some(ForgeryClaim {
            sequence: ChainSequence::from_links(vec![link(0, first)]),
            signature: EcsSignature::from_element(hash_to_g1(&guess)),
        })
    }
}

/// The strategies shipped with the harness, in a stable order.
pub fn builtin_adversaries() -> Vec<Box<dyn Adversary>> {
    vec![
        Box::new(Replay),
        Box::new(NaiveTruncate),
        Box::new(StripExtracted),
        Box::new(RandomForge),
    ]
}

/// Look up a built-in strategy by its CLI name.
pub fn find_adversary(name: &str) -> Option<Box<dyn Adversary>> {
    builtin_adversaries().into_iter().find(|a| a.name() == name)
}

/// A signing helper some tests share: extend a chain one link at a time with
/// real keys, outside any game.
#[doc(hidden)]
pub fn chain_of(keys: &[KeyPair], tag: &str) -> (ChainSequence, EcsSignature) {
    let _ = GroupContext::new();
    let mut seq = ChainSequence::empty();
    let mut sig = EcsSignature::unit();
    for (i, kp) in keys.iter().enumerate() {
        let msg = format!("{tag}-{i}");
        sig = ecs_sign_unchecked(kp, msg.as_bytes(), &seq, &sig).unwrap();
        seq = seq.append(ChainLink::new(msg.into_bytes(), kp.public().clone()));
    }
    (seq, sig)
}
