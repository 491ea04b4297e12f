//! `chainsig` — command-line front end for the chain-signature routing
//! simulator: run scenarios, time the cryptography, emit and check test
//! vectors, play the unforgeability game, and derive keys.
//!
//! Exit codes are a stable contract: 0 success, 1 internal error, 2
//! user/input error (including argument parse failures).

mod bench;
mod game;
mod keygen;
mod run;
mod vector;

use clap::{Parser, Subcommand};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "chainsig",
    version,
    about = "Chain-signature secure routing: simulator, benchmarks, and tooling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file, every scenario in a directory, or a generated
    /// random topology, and report metrics.
    Run(run::RunArgs),
    /// Time signing and verification across chain lengths.
    Bench(bench::BenchArgs),
    /// Emit deterministic chain test vectors, or check a vector file.
    Vector(vector::VectorArgs),
    /// Play the unforgeability game against a built-in adversary.
    Game(game::GameArgs),
    /// Derive a keypair from a seed.
    Keygen(keygen::KeygenArgs),
}

/// A failure with a fixed exit code: user/input errors exit 2, internal
/// errors exit 1.
pub(crate) enum CliError {
    User(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::User(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::User(msg) | CliError::Internal(msg) => write!(f, "{msg}"),
        }
    }
}

/// Write `text` to `out`, or to standard output when no path is given.
pub(crate) fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Internal(format!("write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Internal(format!("write stdout: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run::cmd_run(args),
        Command::Bench(args) => bench::cmd_bench(args),
        Command::Vector(args) => vector::cmd_vector(args),
        Command::Game(args) => game::cmd_game(args),
        Command::Keygen(args) => keygen::cmd_keygen(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}
