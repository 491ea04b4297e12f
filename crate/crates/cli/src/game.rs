//! `chainsig game` — play the unforgeability game against a built-in
//! adversary and print the transcript.

use crate::CliError;
use chainsig_core::game::adversaries::{builtin_adversaries, find_adversary};
use chainsig_core::game::{run_game, GameConfig, Omega};
use clap::Args;

#[derive(Args)]
pub struct GameArgs {
    /// Number of keys in the game.
    #[arg(long, default_value_t = 4)]
    n: usize,

    /// Extraction bits, one per key (e.g. 0011 extracts keys 3 and 4).
    /// Defaults to no key extracted.
    #[arg(long)]
    extr: Option<String>,

    /// Extract-oracle mode: 1 refuses extraction, 2 reveals the key.
    #[arg(long, default_value_t = 1)]
    omega: u8,

    /// Built-in adversary to play.
    #[arg(long)]
    adversary: String,

    /// Seed for key generation and adversary randomness.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

pub fn cmd_game(args: GameArgs) -> Result<(), CliError> {
    if args.n == 0 {
        return Err(CliError::User("--n must be at least 1".into()));
    }
    let extr = match &args.extr {
        None => vec![false; args.n],
        Some(bits) => {
            if bits.len() != args.n {
                return Err(CliError::User(format!(
                    "--extr needs one bit per key (n = {}, got {} bits)",
                    args.n,
                    bits.len()
                )));
            }
            bits.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(CliError::User(format!(
                        "--extr bits must be 0 or 1 (got {other:?})"
                    ))),
                })
                .collect::<Result<Vec<bool>, CliError>>()?
        }
    };
    let omega = match args.omega {
        1 => Omega::One,
        2 => Omega::Two,
        other => {
            return Err(CliError::User(format!(
                "--omega must be 1 or 2 (got {other})"
            )))
        }
    };
    let adversary = find_adversary(&args.adversary).ok_or_else(|| {
        let known: Vec<&str> = builtin_adversaries().iter().map(|a| a.name()).collect();
        CliError::User(format!(
            "unknown adversary {:?}; built-ins: {}",
            args.adversary,
            known.join(", ")
        ))
    })?;

    let cfg = GameConfig::new(args.n, extr, omega, args.seed);
    let run = run_game(&cfg, adversary.as_ref());
    for line in &run.transcript {
        println!("{line}");
    }
    println!("RESULT: {}", run.outcome);
    Ok(())
}
