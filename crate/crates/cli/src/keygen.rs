//! `chainsig keygen` — derive a keypair from a seed.
//!
//! With `--id`, derives exactly the key a scenario node with that label
//! holds under the same `--seed`, which makes scenario runs inspectable.

use crate::{write_output, CliError};
use chainsig_core::bilinear::{GroupContext, POINT_LEN};
use chainsig_core::ecs::KeyPair;
use clap::Args;
use serde::Serialize;
use std::path::PathBuf;

#[derive(Args)]
pub struct KeygenArgs {
    /// Seed for key derivation.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Derive the key a scenario node with this id would hold.
    #[arg(long)]
    id: Option<String>,

    /// Output path; defaults to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct KeygenReport {
    seed_material: String,
    private_hex: String,
    public_g1_hex: String,
    public_g2_hex: String,
}

pub fn cmd_keygen(args: KeygenArgs) -> Result<(), CliError> {
    let seed_material = match &args.id {
        Some(id) => format!("node-key/{}/{id}", args.seed),
        None => format!("keygen/{}", args.seed),
    };
    let kp = KeyPair::generate(&GroupContext::new(), seed_material.as_bytes());
    let paired = kp.public().point().to_bytes();
    let report = KeygenReport {
        seed_material,
        private_hex: hex::encode(kp.private().to_bytes()),
        public_g1_hex: hex::encode(&paired[..POINT_LEN]),
        public_g2_hex: hex::encode(&paired[POINT_LEN..]),
    };
    let mut text = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Internal(format!("serialize report: {e}")))?;
    text.push('\n');
    write_output(args.out.as_deref(), &text)
}
