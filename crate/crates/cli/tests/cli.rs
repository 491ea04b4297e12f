//! End-to-end tests against the built binary: exit codes, output shapes,
//! and determinism of each subcommand.

use std::path::PathBuf;
use std::process::{Command, Output};

fn chainsig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chainsig"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scenario_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn scenario(name: &str) -> String {
    scenario_dir().join(name).to_string_lossy().into_owned()
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn run_reports_the_rejected_truncation() {
    let output = chainsig(&["run", &scenario("fig1_ssbgp_truncation.json")]);
    let metrics = stdout_json(&output);
    assert_eq!(metrics["nodes"]["D"]["table"]["A"]["next_hop"], "C");
    assert_eq!(metrics["nodes"]["D"]["rejections"]["bad_signature"], 1);
}

#[test]
fn run_is_deterministic_for_a_fixed_seed() {
    let args = ["run", &scenario("fig1_bgp_truncation.json"), "--seed", "0"];
    let first = chainsig(&args);
    let second = chainsig(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());
}

#[test]
fn run_missing_scenario_is_a_user_error() {
    let output = chainsig(&["run", "no-such-scenario.json"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("error:"));
}

#[test]
fn run_rejects_an_invalid_scenario_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"radius\": 1.0}").expect("write scenario");
    let output = chainsig(&["run", &path.to_string_lossy()]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn run_fans_out_over_a_directory() {
    let output = chainsig(&["run", &scenario_dir().to_string_lossy()]);
    let combined = stdout_json(&output);
    let map = combined.as_object().expect("object keyed by file name");
    assert!(map.len() >= 9, "bundled scenarios missing: {}", map.len());
    assert!(map.contains_key("fig1_bgp.json"));
    assert!(map["fig1_ssbgp_truncation.json"]["nodes"]["D"]["rejections"]["bad_signature"] == 1);
}

#[test]
fn run_writes_directory_results_to_files() {
    let out = tempfile::tempdir().expect("tempdir");
    let output = chainsig(&[
        "run",
        &scenario_dir().to_string_lossy(),
        "--out",
        &out.path().to_string_lossy(),
    ]);
    assert!(output.status.success());
    let written: Vec<_> = std::fs::read_dir(out.path())
        .expect("read out dir")
        .map(|e| e.expect("entry").file_name().to_string_lossy().into_owned())
        .collect();
    assert!(written.contains(&"fig1_bgp.metrics.json".to_string()));
    assert!(written.len() >= 9);
}

#[test]
fn run_generates_random_topologies() {
    let args = ["run", "--random", "6", "--protocol", "bgp", "--seed", "3"];
    let first = chainsig(&args);
    let metrics = stdout_json(&first);
    assert_eq!(metrics["nodes"].as_object().expect("nodes").len(), 6);
    let second = chainsig(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn run_random_rejects_zero_nodes() {
    let output = chainsig(&["run", "--random", "0"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn run_csv_has_one_row_per_node() {
    let output = chainsig(&["run", &scenario("fig1_bgp.json"), "--format", "csv"]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).expect("utf-8");
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("node,broadcasts_sent,"));
    assert_eq!(lines.len(), 1 + 8, "header plus one row per node");
}

#[test]
fn bench_emits_one_csv_row_per_size_and_op() {
    let output = chainsig(&["bench", "--max-n", "1", "--format", "csv"]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).expect("utf-8");
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "op,n,median_ns");
    assert!(lines[1].starts_with("sign,1,"));
    assert!(lines[2].starts_with("verify,1,"));
    assert_eq!(lines.len(), 3);
}

#[test]
fn bench_json_carries_the_measurement_parameters() {
    let output = chainsig(&["bench", "--max-n", "1", "--format", "json"]);
    let report = stdout_json(&output);
    assert_eq!(report["warmups"], 2);
    assert_eq!(report["iterations"], 10);
    assert_eq!(report["results"][0]["op"], "sign");
}

#[test]
fn vectors_roundtrip_and_tampering_fails_the_check() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("vectors.json");
    let path_str = path.to_string_lossy().into_owned();

    let emitted = chainsig(&["vector", "--count", "2", "--seed", "1", "--out", &path_str]);
    assert!(emitted.status.success());
    let checked = chainsig(&["vector", "--check", &path_str]);
    assert!(checked.status.success());
    assert!(String::from_utf8_lossy(&checked.stdout).contains("all 2 vectors verified"));

    // Emitting with the same seed is byte-stable.
    let again = chainsig(&["vector", "--count", "2", "--seed", "1"]);
    assert_eq!(
        std::fs::read(&path).expect("read vectors"),
        again.stdout,
        "vector emission must be deterministic"
    );

    // Flip one message byte inside the serialized chain.
    let mut file: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&path).expect("read vectors")).expect("json");
    let wire = file["vectors"][0]["wire_hex"].as_str().expect("wire_hex");
    let mut raw = hex::decode(wire).expect("hex");
    raw[8] ^= 1;
    file["vectors"][0]["wire_hex"] = serde_json::Value::String(hex::encode(raw));
    std::fs::write(&path, serde_json::to_vec(&file).expect("serialize")).expect("write");

    let tampered = chainsig(&["vector", "--check", &path_str]);
    assert_eq!(tampered.status.code(), Some(2));
}

#[test]
fn game_transcript_ends_with_the_outcome() {
    let output = chainsig(&["game", "--adversary", "replay", "--seed", "7"]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).expect("utf-8");
    assert!(text.contains("claim:"));
    assert!(text.trim_end().ends_with("RESULT: LOSE"));
}

#[test]
fn game_unknown_adversary_is_a_user_error() {
    let output = chainsig(&["game", "--adversary", "nope"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("replay"));
}

#[test]
fn game_extr_must_cover_every_key() {
    let output = chainsig(&[
        "game",
        "--adversary",
        "replay",
        "--n",
        "6",
        "--extr",
        "0011",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn keygen_matches_scenario_node_keys_and_is_stable() {
    let args = ["keygen", "--seed", "5", "--id", "A"];
    let first = chainsig(&args);
    let report = stdout_json(&first);
    assert_eq!(report["seed_material"], "node-key/5/A");
    assert_eq!(report["private_hex"].as_str().expect("hex").len(), 64);
    assert_eq!(report["public_g1_hex"].as_str().expect("hex").len(), 96);
    assert_eq!(report["public_g2_hex"].as_str().expect("hex").len(), 192);
    let second = chainsig(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn unknown_flags_exit_with_the_usage_code() {
    let output = chainsig(&["run", "--no-such-flag"]);
    assert_eq!(output.status.code(), Some(2));
}
