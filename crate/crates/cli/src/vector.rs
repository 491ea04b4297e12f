//! `chainsig vector` — deterministic chain test vectors.
//!
//! Generation emits a JSON file of honestly signed chains with full key
//! material (private scalars plus both public halves) and the serialized
//! chain bytes. Checking re-derives the keys, decodes the wire image,
//! verifies every signature, and confirms the encoding is canonical — a
//! tampered file fails with exit code 2.

use crate::{write_output, CliError};
use chainsig_core::bilinear::{GroupContext, PairedPoint, Scalar, POINT_LEN};
use chainsig_core::ecs::wire::{decode_chain, encode_chain};
use chainsig_core::ecs::{
    ecs_sign, ecs_verify, ChainLink, ChainSequence, EcsSignature, KeyPair, PublicKey, Verdict,
};
use clap::Args;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

const SUITE: &str = "ecs-chain-vectors-v1";

/// Vector chain lengths cycle through this list.
const LENGTHS: [usize; 5] = [1, 2, 3, 5, 8];

#[derive(Args)]
pub struct VectorArgs {
    /// How many chains to emit.
    #[arg(long, default_value_t = 3, conflicts_with = "check")]
    count: usize,

    /// Seed for key and message derivation.
    #[arg(long, default_value_t = 0, conflicts_with = "check")]
    seed: u64,

    /// Output path; defaults to standard output.
    #[arg(long, conflicts_with = "check")]
    out: Option<PathBuf>,

    /// Check a previously emitted vector file instead of generating.
    #[arg(long, value_name = "FILE")]
    check: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct VectorFile {
    suite: String,
    seed: u64,
    count: usize,
    vectors: Vec<VectorEntry>,
}

#[derive(Serialize, Deserialize)]
struct VectorEntry {
    id: usize,
    links: Vec<VectorLink>,
    /// Serialized chain: link count, links, signature marker, signature.
    wire_hex: String,
}

#[derive(Serialize, Deserialize)]
struct VectorLink {
    message_hex: String,
    private_hex: String,
    /// Compressed public key, both halves (48 + 96 bytes).
    pubkey_hex: String,
}

pub fn cmd_vector(args: VectorArgs) -> Result<(), CliError> {
    match args.check {
        Some(path) => check(&path),
        None => generate(args),
    }
}

fn generate(args: VectorArgs) -> Result<(), CliError> {
    if args.count == 0 {
        return Err(CliError::User("--count must be at least 1".into()));
    }
    let ctx = GroupContext::new();
    let mut vectors = Vec::new();
    for id in 0..args.count {
        let length = LENGTHS[id % LENGTHS.len()];
        let mut links = Vec::new();
        let mut seq = ChainSequence::empty();
        let mut sig = EcsSignature::unit();
        for j in 0..length {
            let kp = KeyPair::generate(
                &ctx,
                format!("vector/{}/{id}/key/{j}", args.seed).as_bytes(),
            );
            let msg = format!("vector/{}/{id}/msg/{j}", args.seed).into_bytes();
            sig = ecs_sign(&kp, &msg, &seq, &sig)
                .map_err(|e| CliError::Internal(format!("vector {id}: sign: {e}")))?;
            links.push(VectorLink {
                message_hex: hex::encode(&msg),
                private_hex: hex::encode(kp.private().to_bytes()),
                pubkey_hex: hex::encode(kp.public().point().to_bytes()),
            });
            seq = seq.append(ChainLink::new(msg, kp.public().clone()));
        }
        vectors.push(VectorEntry {
            id,
            links,
            wire_hex: hex::encode(encode_chain(&seq, &sig)),
        });
    }
    let file = VectorFile {
        suite: SUITE.into(),
        seed: args.seed,
        count: args.count,
        vectors,
    };
    let mut text = serde_json::to_string_pretty(&file)
        .map_err(|e| CliError::Internal(format!("serialize vectors: {e}")))?;
    text.push('\n');
    write_output(args.out.as_deref(), &text)
}

fn check(path: &PathBuf) -> Result<(), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::User(format!("read {}: {e}", path.display())))?;
    let file: VectorFile = serde_json::from_str(&text)
        .map_err(|e| CliError::User(format!("{}: {e}", path.display())))?;
    if file.suite != SUITE {
        return Err(CliError::User(format!(
            "unknown vector suite {:?} (expected {SUITE:?})",
            file.suite
        )));
    }
    if file.vectors.len() != file.count {
        return Err(CliError::User(format!(
            "file claims {} vectors but holds {}",
            file.count,
            file.vectors.len()
        )));
    }

    let ctx = GroupContext::new();
    for entry in &file.vectors {
        let fail = |msg: String| CliError::User(format!("vector {}: {msg}", entry.id));
        let mut keys: BTreeMap<[u8; POINT_LEN], PairedPoint> = BTreeMap::new();
        for (j, link) in entry.links.iter().enumerate() {
            let paired_bytes = decode_hex(&link.pubkey_hex)
                .map_err(|e| fail(format!("link {}: pubkey_hex: {e}", j + 1)))?;
            let paired = PairedPoint::from_bytes(&paired_bytes)
                .map_err(|e| fail(format!("link {}: pubkey: {e}", j + 1)))?;
            let private_bytes = decode_hex(&link.private_hex)
                .map_err(|e| fail(format!("link {}: private_hex: {e}", j + 1)))?;
            let private = Scalar::from_bytes(&private_bytes)
                .map_err(|e| fail(format!("link {}: private: {e}", j + 1)))?;
            if ctx.generator().exp(&private).to_bytes() != paired.to_bytes() {
                return Err(fail(format!(
                    "link {}: private key does not match the public key",
                    j + 1
                )));
            }
            keys.insert(PublicKey::new(paired).as_bytes().to_owned(), paired);
        }

        let wire = decode_hex(&entry.wire_hex).map_err(|e| fail(format!("wire_hex: {e}")))?;
        let (seq, sig) = decode_chain(&wire, |key_bytes| keys.get(key_bytes).copied())
            .map_err(|e| fail(format!("decode: {e}")))?;
        if seq.len() != entry.links.len() {
            return Err(fail(format!(
                "wire image holds {} links but the file lists {}",
                seq.len(),
                entry.links.len()
            )));
        }
        for (j, (link, listed)) in seq.links().iter().zip(&entry.links).enumerate() {
            let listed_msg = decode_hex(&listed.message_hex)
                .map_err(|e| fail(format!("link {}: message_hex: {e}", j + 1)))?;
            if link.message() != listed_msg.as_slice() {
                return Err(fail(format!("link {}: message mismatch", j + 1)));
            }
        }
        if ecs_verify(&seq, &sig) != Verdict::Valid {
            return Err(fail("signature INVALID".into()));
        }
        if encode_chain(&seq, &sig) != wire {
            return Err(fail("wire image is not canonical".into()));
        }
        println!("vector {}: ok ({} links)", entry.id, seq.len());
    }
    println!("all {} vectors verified", file.count);
    Ok(())
}

fn decode_hex(text: &str) -> Result<Vec<u8>, String> {
    hex::decode(text).map_err(|e| e.to_string())
}
