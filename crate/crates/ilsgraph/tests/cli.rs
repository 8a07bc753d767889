//! End-to-end checks of the command-line interface: JSON outputs, exit
//! codes, and counterexample replay.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ilsgraph"))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout_json(output: &Output) -> Value {
    assert!(
        !output.stdout.is_empty(),
        "no stdout; stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).unwrap()
}

const TWO_CYCLE: &str = r#"{"rows":2,"cols":2,"entries":[[1,1],[-1,-1]]}"#;
const IDENTITY: &str = r#"{"rows":2,"cols":2,"entries":[[1,0],[0,1]]}"#;
const CANONICAL: &str = r#"{"rows":4,"cols":3,"entries":[[1,1,0],[1,-1,0],[-1,0,1],[-1,0,-1]]}"#;

#[test]
fn analyze_reports_structure() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write_file(dir.path(), "m.json", TWO_CYCLE);
    let output = binary()
        .args(["analyze", "--matrix"])
        .arg(&matrix)
        .output()
        .unwrap();
    assert!(output.status.success());
    let json = stdout_json(&output);
    assert_eq!(json["eliminationOrdering"], Value::Null);
    assert_eq!(
        json["forbiddenPattern"]["rowOrder"],
        serde_json::json!([1, 2])
    );
    assert_eq!(
        json["forbiddenPattern"]["colOrder"],
        serde_json::json!([1, 2])
    );
    assert_eq!(json["reduction"]["delta"], serde_json::json!([1, 2]));
}

#[test]
fn check_reports_disconnection_with_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write_file(dir.path(), "m.json", TWO_CYCLE);
    let rhs = write_file(dir.path(), "b.json", r#"{"entries":[1,-1]}"#);
    let output = binary()
        .args(["check", "--d", "1", "--matrix"])
        .arg(&matrix)
        .arg("--b")
        .arg(&rhs)
        .output()
        .unwrap();
    assert!(output.status.success());
    let json = stdout_json(&output);
    assert_eq!(json["verdict"], "disconnected");
    assert_eq!(json["feasibleCount"], 2);
    assert_eq!(json["componentCount"], 2);
    assert_eq!(json["certificate"], serde_json::json!([[0, 1], [1, 0]]));
    assert_eq!(json["componentLabels"], serde_json::json!([0, 1]));
}

#[test]
fn witness_auto_prefers_the_analytic_route() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write_file(dir.path(), "m.json", TWO_CYCLE);
    let output = binary()
        .args(["witness", "--d", "1", "--matrix"])
        .arg(&matrix)
        .output()
        .unwrap();
    assert!(output.status.success());
    let json = stdout_json(&output);
    assert_eq!(json["method"], "analytic");
    assert_eq!(json["b"]["entries"], serde_json::json!([1, -1]));
    assert_eq!(json["pointP"], serde_json::json!([1, 0]));
    assert_eq!(json["pointQ"], serde_json::json!([0, 1]));

    let searched = binary()
        .args(["witness", "--d", "1", "--method", "search", "--matrix"])
        .arg(&matrix)
        .output()
        .unwrap();
    let json = stdout_json(&searched);
    assert_eq!(json["method"], "search");
}

#[test]
fn witness_is_null_for_universally_connected_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write_file(dir.path(), "m.json", IDENTITY);
    let output = binary()
        .args(["witness", "--d", "1", "--matrix"])
        .arg(&matrix)
        .output()
        .unwrap();
    assert!(output.status.success());
    assert_eq!(stdout_json(&output), Value::Null);
}

#[test]
fn decide_reports_the_path_taken() {
    let dir = tempfile::tempdir().unwrap();
    let identity = write_file(dir.path(), "id.json", IDENTITY);
    let output = binary()
        .args(["decide", "--d", "1", "--matrix"])
        .arg(&identity)
        .output()
        .unwrap();
    assert!(output.status.success());
    let json = stdout_json(&output);
    assert_eq!(json["verdict"], "universallyConnected");
    assert_eq!(json["decidedBy"], "gridExhausted");
    assert_eq!(json["searchedGridSize"], 4);

    let cycle = write_file(dir.path(), "cycle.json", TWO_CYCLE);
    let output = binary()
        .args(["decide", "--d", "1", "--matrix"])
        .arg(&cycle)
        .output()
        .unwrap();
    let json = stdout_json(&output);
    assert_eq!(json["verdict"], "notUniversallyConnected");
    assert_eq!(json["decidedBy"], "analyticWitness");
    assert_eq!(json["witness"]["b"]["entries"], serde_json::json!([1, -1]));
}

#[test]
fn canonical_and_path_commands() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write_file(dir.path(), "m.json", CANONICAL);
    let output = binary()
        .args(["canonical", "--matrix"])
        .arg(&matrix)
        .output()
        .unwrap();
    assert!(output.status.success());
    let json = stdout_json(&output);
    assert_eq!(json["rowPerm"], serde_json::json!([1, 2, 3, 4]));
    assert_eq!(json["colPerm"], serde_json::json!([1, 2, 3]));

    let rhs = write_file(dir.path(), "b.json", r#"{"entries":[-10,-10,-10,-10]}"#);
    let output = binary()
        .args([
            "path", "--d", "1", "--from", "1,0,0", "--to", "0,1,1", "--matrix",
        ])
        .arg(&matrix)
        .arg("--b")
        .arg(&rhs)
        .output()
        .unwrap();
    assert!(output.status.success());
    let json = stdout_json(&output);
    assert_eq!(
        json["points"],
        serde_json::json!([[1, 0, 0], [1, 1, 0], [0, 1, 0], [0, 1, 1]])
    );
}

#[test]
fn verify_passes_on_a_covered_shape() {
    let output = binary()
        .args(["verify", "greedy-oracle", "--shape", "2x2", "--exhaustive"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let json = stdout_json(&output);
    assert_eq!(json["checked"], 81);
    assert_eq!(json["failCount"], 0);
    assert_eq!(json["property"], "greedy-oracle");
}

#[test]
fn verify_finds_and_replays_counterexamples_beyond_covered_shapes() {
    // The ordering/pattern equivalence genuinely fails at 4x3; the campaign
    // must exit 1 and its counterexample must replay through `analyze`.
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("report.json");
    let output = binary()
        .args([
            "verify",
            "lemma-shape-equiv",
            "--shape",
            "4x3",
            "--exhaustive",
            "--out",
        ])
        .arg(&report_path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert!(report["failCount"].as_u64().unwrap() > 0);
    let matrix = &report["firstCounterexample"]["matrix"];
    assert!(matrix.is_object());

    let matrix_path = write_file(dir.path(), "cex.json", &matrix.to_string());
    let replay = binary()
        .args(["analyze", "--matrix"])
        .arg(&matrix_path)
        .output()
        .unwrap();
    assert!(replay.status.success());
    let json = stdout_json(&replay);
    assert_eq!(
        json["eliminationOrdering"],
        Value::Null,
        "still no ordering"
    );
    assert_eq!(json["forbiddenPattern"], Value::Null, "still no pattern");
}

#[test]
fn exit_codes_distinguish_error_classes() {
    let dir = tempfile::tempdir().unwrap();

    let garbled = write_file(dir.path(), "bad.json", "{not json");
    let output = binary()
        .args(["analyze", "--matrix"])
        .arg(&garbled)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));

    let matrix = write_file(dir.path(), "m.json", TWO_CYCLE);
    let rhs = write_file(dir.path(), "b.json", r#"{"entries":[0,0]}"#);
    let output = binary()
        .args(["check", "--d", "1000000000", "--matrix"])
        .arg(&matrix)
        .arg("--b")
        .arg(&rhs)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));

    let output = binary()
        .args(["verify", "no-such-property"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));

    let wrong_shape = write_file(dir.path(), "m2.json", TWO_CYCLE);
    let output = binary()
        .args(["canonical", "--matrix"])
        .arg(&wrong_shape)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn rational_entries_flow_through_the_interface() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write_file(
        dir.path(),
        "m.json",
        r#"{"rows":2,"cols":2,"entries":[["1/2","2"],["-0.25","-3/2"]]}"#,
    );
    let output = binary()
        .args(["analyze", "--matrix"])
        .arg(&matrix)
        .output()
        .unwrap();
    assert!(output.status.success());
    let json = stdout_json(&output);
    assert_eq!(json["signPattern"], serde_json::json!([[1, 1], [-1, -1]]));
    assert_eq!(json["forbiddenPattern"]["lambda"], 2);
}
