use std::process::{Command, Output};

use serde_json::Value;

fn fraisse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fraisse")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = fraisse(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

const FOLDED_ARC: &str = r#"{
  "domain": {"vertices": ["a", "b", "c"], "edges": [["a", "c"], ["c", "b"]]},
  "codomain": {"vertices": ["0", "1"], "edges": [["0", "1"]]},
  "map": {"a": "0", "b": "0", "c": "1"}
}"#;

const FOLDED_ARC_UP: &str = r#"{
  "domain": {"vertices": ["p", "q", "r"], "edges": [["p", "r"], ["r", "q"]]},
  "codomain": {"vertices": ["0", "1"], "edges": [["0", "1"]]},
  "map": {"p": "1", "q": "1", "r": "0"}
}"#;

#[test]
fn stage_two_count() {
    let out = fraisse(&["fraisse-stage", "--m", "2", "--count-only"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "85");
}

#[test]
fn classify_folded_arc() {
    let v = json(&["classify", "--input", FOLDED_ARC]);
    assert_eq!(v["confluent"], true);
    assert_eq!(v["monotone"], false);
    // The fiber {a, b} has no edge, so the map is light.
    assert_eq!(v["light"], true);
}

#[test]
fn standard_amalgam_of_folded_arcs_is_a_square() {
    let input = format!(r#"{{"f": {FOLDED_ARC}, "g": {FOLDED_ARC_UP}}}"#);
    let v = json(&["amalgamate", "--input", &input]);
    assert_eq!(v["f0"]["domain"]["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(v["f0"]["domain"]["edges"].as_array().unwrap().len(), 4);
    assert_eq!(v["certificate"]["commutes"], true);
    assert_eq!(v["certificate"]["domain_is_tree"], false);
}

#[test]
fn mn_tree_leaves_and_dot() {
    let v = json(&["mn-tree", "--seq", "2/3,2/3,1/3,1/3,0"]);
    assert_eq!(v["leaves"], 32);
    let out = fraisse(&["mn-tree", "--seq", "2/3,2/3,1/3,1/3,0", "--export", "dot"]);
    assert!(out.status.success());
    let dot = stdout(&out);
    assert!(dot.starts_with("graph layout {"));
    assert_eq!(dot.matches("pos=").count(), 43);
}

#[test]
fn graph_export_round_trip() {
    let stage = json(&["gen-tree", "--stage", "1"]);
    let again = json(&["export", "--input", &stage.to_string()]);
    assert_eq!(stage, again);
    let out = fraisse(&["export", "--input", &stage.to_string(), "--format", "dot"]);
    assert!(stdout(&out).contains("doublecircle"));
}

#[test]
fn factorize_reports_factors() {
    let split = r#"{
      "domain": {"vertices": ["r", "m", "x", "y"], "edges": [["r", "m"], ["m", "x"], ["r", "y"]], "root": "r"},
      "codomain": {"vertices": ["r", "x", "y"], "edges": [["r", "x"], ["r", "y"]], "root": "r"},
      "map": {"r": "r", "m": "r", "x": "x", "y": "y"}
    }"#;
    let v = json(&["factorize", "--input", split]);
    let factors = v["factors"].as_array().unwrap();
    assert_eq!(factors.len(), 1);
    assert_eq!(factors[0]["kind"], "splitting_edge");
}

#[test]
fn grid_square_commutes() {
    let v = json(&["grid", "--n", "1", "--k", "2"]);
    assert_eq!(v["vertices"], 7);
    assert_eq!(v["square_commutes"], true);
}

#[test]
fn suite_output_is_deterministic() {
    let a = fraisse(&["verify-suite", "--only", "6,9", "--seed", "7", "--format", "table"]);
    let b = fraisse(&["verify-suite", "--only", "6,9", "--seed", "7", "--format", "table"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(fraisse(&["fraisse-stage", "--bogus"]).status.code(), Some(2));
    assert_eq!(fraisse(&["classify", "--input", "{not json"]).status.code(), Some(2));
    let not_a_map = r#"{
      "domain": {"vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"]]},
      "codomain": {"vertices": ["0", "1"], "edges": [["0", "1"]]},
      "map": {"a": "0", "b": "0", "c": "0"}
    }"#;
    let out = fraisse(&["classify", "--input", not_a_map]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("edge"));
    assert_eq!(fraisse(&["fraisse-stage", "--m", "3", "--cap", "1000"]).status.code(), Some(1));
}
