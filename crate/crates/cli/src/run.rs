//! `chainsig run` — execute scenarios and report metrics.

use crate::{write_output, CliError};
use chainsig_core::sim::{random_connected_scenario, run_scenario, Metrics, Protocol, Scenario};
use clap::{Args, ValueEnum};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

/// Upper bound on generated topology size; keeps a typo like
/// `--random 100000` from grinding through hours of pairings.
const MAX_RANDOM_NODES: usize = 256;

#[derive(Args)]
pub struct RunArgs {
    /// Scenario file, or a directory of scenario `.json` files.
    #[arg(value_name = "SCENARIO", required_unless_present = "random")]
    scenario: Option<PathBuf>,

    /// Generate a seeded random connected topology with this many nodes
    /// instead of reading a scenario file.
    #[arg(long, value_name = "NODES", conflicts_with = "scenario")]
    random: Option<usize>,

    /// Protocol for `--random` topologies.
    #[arg(long, value_enum, default_value = "ssbgp", requires = "random")]
    protocol: ProtocolArg,

    /// Seed for key derivation and topology generation.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output path; for a directory input this names an output directory.
    /// Defaults to standard output.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format. CSV flattens the per-node counters; JSON carries the
    /// full metrics including routing tables and packet fates.
    #[arg(long, value_enum, default_value = "json")]
    format: RunFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolArg {
    Bgp,
    Sbgp,
    Ssbgp,
}

impl From<ProtocolArg> for Protocol {
    fn from(arg: ProtocolArg) -> Protocol {
        match arg {
            ProtocolArg::Bgp => Protocol::Bgp,
            ProtocolArg::Sbgp => Protocol::Sbgp,
            ProtocolArg::Ssbgp => Protocol::Ssbgp,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RunFormat {
    Json,
    Csv,
}

pub fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    if let Some(n) = args.random {
        if n == 0 {
            return Err(CliError::User("--random needs at least one node".into()));
        }
        if n > MAX_RANDOM_NODES {
            return Err(CliError::User(format!(
                "--random is capped at {MAX_RANDOM_NODES} nodes (got {n})"
            )));
        }
        let scenario = random_connected_scenario(n, args.protocol.into(), args.seed);
        let metrics = execute(&scenario, args.seed)?;
        return write_output(args.out.as_deref(), &render(&metrics, args.format));
    }

    let path = args
        .scenario
        .as_deref()
        .expect("clap enforces the argument");
    if path.is_dir() {
        run_directory(path, &args)
    } else {
        let metrics = execute(&load(path)?, args.seed)?;
        write_output(args.out.as_deref(), &render(&metrics, args.format))
    }
}

/// Run every `.json` scenario in `dir` (sorted by file name). With `--out`
/// the results land as `<out>/<stem>.metrics.<ext>`; otherwise they are
/// printed as one JSON object keyed by file name (CSV output needs `--out`).
fn run_directory(dir: &Path, args: &RunArgs) -> Result<(), CliError> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .map_err(|e| CliError::User(format!("read {}: {e}", dir.display())))?
        .filter_map(|entry| {
            let name = entry.ok()?.file_name().to_string_lossy().into_owned();
            name.ends_with(".json").then_some(name)
        })
        .collect();
    names.sort();
    if names.is_empty() {
        return Err(CliError::User(format!(
            "no .json scenarios in {}",
            dir.display()
        )));
    }

    match &args.out {
        Some(out_dir) => {
            fs::create_dir_all(out_dir)
                .map_err(|e| CliError::Internal(format!("create {}: {e}", out_dir.display())))?;
            for name in &names {
                let metrics = execute(&load(&dir.join(name))?, args.seed)?;
                let stem = name.trim_end_matches(".json");
                let ext = match args.format {
                    RunFormat::Json => "json",
                    RunFormat::Csv => "csv",
                };
                let target = out_dir.join(format!("{stem}.metrics.{ext}"));
                write_output(Some(&target), &render(&metrics, args.format))?;
                eprintln!("wrote {}", target.display());
            }
            Ok(())
        }
        None => {
            if args.format == RunFormat::Csv {
                return Err(CliError::User(
                    "CSV output for a scenario directory needs --out".into(),
                ));
            }
            let mut combined = BTreeMap::new();
            for name in &names {
                let metrics = execute(&load(&dir.join(name))?, args.seed)?;
                let value = serde_json::to_value(&metrics)
                    .map_err(|e| CliError::Internal(format!("serialize metrics: {e}")))?;
                combined.insert(name.clone(), value);
            }
            let mut text = serde_json::to_string_pretty(&combined)
                .map_err(|e| CliError::Internal(format!("serialize metrics: {e}")))?;
            text.push('\n');
            write_output(None, &text)
        }
    }
}

fn load(path: &Path) -> Result<Scenario, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::User(format!("read {}: {e}", path.display())))?;
    Scenario::from_json(&text).map_err(|e| CliError::User(format!("{}: {e}", path.display())))
}

fn execute(scenario: &Scenario, seed: u64) -> Result<Metrics, CliError> {
    run_scenario(scenario, seed).map_err(|e| CliError::User(format!("scenario: {e}")))
}

fn render(metrics: &Metrics, format: RunFormat) -> String {
    match format {
        RunFormat::Json => metrics.to_json(),
        RunFormat::Csv => to_csv(metrics),
    }
}

/// One row of counters per node; routing tables and packet fates stay in
/// the JSON form. Rejections are folded into one `kind=count` list.
fn to_csv(metrics: &Metrics) -> String {
    let mut out = String::from(
        "node,broadcasts_sent,control_bytes_sent,updates_accepted,repeats_detected,\
         signature_checks,data_received,data_forwarded,data_delivered,data_dropped,\
         intercepted,routes,rejections\n",
    );
    for (id, node) in &metrics.nodes {
        let rejections: Vec<String> = node
            .rejections
            .iter()
            .map(|(kind, count)| format!("{kind}={count}"))
            .collect();
        out.push_str(&format!(
            "{id},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            node.broadcasts_sent,
            node.control_bytes_sent,
            node.updates_accepted,
            node.repeats_detected,
            node.signature_checks,
            node.data_received,
            node.data_forwarded,
            node.data_delivered,
            node.data_dropped,
            node.intercepted,
            node.table.len(),
            rejections.join(";"),
        ));
    }
    out
}
