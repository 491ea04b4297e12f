//! `chainsig bench` — time signing and verification across chain lengths.
//!
//! Signing one link costs the same no matter how long the prior chain is;
//! verification grows linearly in the chain length. Reported numbers are
//! medians of 10 iterations after 2 warmups.

use crate::{write_output, CliError};
use chainsig_core::bilinear::GroupContext;
use chainsig_core::ecs::{
    ecs_sign_unchecked, ecs_verify, ChainLink, ChainSequence, EcsSignature, KeyPair, Verdict,
};
use clap::{Args, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;
use std::time::Instant;

/// Chain lengths timed by default.
const STANDARD_SIZES: [usize; 4] = [1, 10, 50, 100];

#[derive(Args)]
pub struct BenchArgs {
    /// Largest chain length to time.
    #[arg(long = "max-n", default_value_t = 100)]
    max_n: usize,

    /// Seed for key derivation.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: BenchFormat,

    /// Output path; defaults to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchFormat {
    Json,
    Csv,
}

#[derive(Serialize)]
struct BenchRow {
    op: &'static str,
    n: usize,
    median_ns: u128,
}

#[derive(Serialize)]
struct BenchReport {
    seed: u64,
    warmups: u32,
    iterations: u32,
    results: Vec<BenchRow>,
}

pub fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    if args.max_n == 0 {
        return Err(CliError::User("--max-n must be at least 1".into()));
    }
    let mut sizes: Vec<usize> = STANDARD_SIZES
        .iter()
        .copied()
        .filter(|&n| n <= args.max_n)
        .collect();
    if !sizes.contains(&args.max_n) {
        sizes.push(args.max_n);
    }

    let ctx = GroupContext::new();
    let top = *sizes.last().unwrap();
    let mut keypairs = Vec::new();
    let mut sequence = ChainSequence::empty();
    let mut sigs_at = vec![EcsSignature::unit()];
    for i in 0..top {
        let kp = KeyPair::generate(&ctx, format!("bench/{}/key/{i}", args.seed).as_bytes());
        let msg = format!("bench/{}/msg/{i}", args.seed).into_bytes();
        let sig = ecs_sign_unchecked(&kp, &msg, &sequence, sigs_at.last().unwrap())
            .expect("honest extension signs");
        sequence = sequence.append(ChainLink::new(msg, kp.public().clone()));
        sigs_at.push(sig);
        keypairs.push(kp);
    }
    let probe_signer = KeyPair::generate(&ctx, format!("bench/{}/probe", args.seed).as_bytes());

    let mut results = Vec::new();
    for &n in &sizes {
        // Signing the n-th link: the prior chain has n-1 links.
        let prior_seq = sequence.prefix(n - 1);
        let prior_sig = sigs_at[n - 1];
        let signer = if n == top {
            &probe_signer
        } else {
            &keypairs[top - 1]
        };
        let median = median_ns(&mut || {
            ecs_sign_unchecked(signer, b"bench/probe", &prior_seq, &prior_sig)
                .expect("probe extension signs");
        });
        results.push(BenchRow {
            op: "sign",
            n,
            median_ns: median,
        });
    }
    for &n in &sizes {
        let seq = sequence.prefix(n);
        let sig = sigs_at[n];
        let median = median_ns(&mut || {
            assert_eq!(ecs_verify(&seq, &sig), Verdict::Valid);
        });
        results.push(BenchRow {
            op: "verify",
            n,
            median_ns: median,
        });
    }

    let text = match args.format {
        BenchFormat::Csv => {
            let mut out = String::from("op,n,median_ns\n");
            for row in &results {
                out.push_str(&format!("{},{},{}\n", row.op, row.n, row.median_ns));
            }
            out
        }
        BenchFormat::Json => {
            let report = BenchReport {
                seed: args.seed,
                warmups: 2,
                iterations: 10,
                results,
            };
            let mut out = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Internal(format!("serialize report: {e}")))?;
            out.push('\n');
            out
        }
    };
    write_output(args.out.as_deref(), &text)
}

/// Median of 10 timed iterations after 2 warmups, in nanoseconds.
fn median_ns(op: &mut dyn FnMut()) -> u128 {
    for _ in 0..2 {
        op();
    }
    let mut samples: Vec<u128> = (0..10)
        .map(|_| {
            let start = Instant::now();
            op();
            start.elapsed().as_nanos()
        })
        .collect();
    samples.sort_unstable();
    samples[samples.len() / 2]
}
