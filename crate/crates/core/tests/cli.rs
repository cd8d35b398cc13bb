use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn graphmfd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphmfd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const EXAMPLE_C: &str = r#"{
  "vertices": [{"id": "u", "charge": 1}, {"id": "v", "charge": "1"}],
  "edges": [{"id": "e", "ends": ["u", "v"], "b": 1}]
}"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn analyze_prints_an_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "c.json", EXAMPLE_C);
    let out = graphmfd(&["analyze", "--input", &input]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(v["input_digest"].as_str().unwrap().starts_with("sha256:"));
    let r = &v["report"];
    assert_eq!(r["verdict_npc"], false);
    assert_eq!(r["verdict_vf"], true);
    assert_eq!(r["certificate"]["strictness"], "weak");
}

#[test]
fn analyze_writes_the_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "c.json", EXAMPLE_C);
    let target = dir.path().join("out.json");
    let out = graphmfd(&["analyze", "--input", &input, "--output", target.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(v["report"]["verdict_vf"], true);
}

#[test]
fn bad_rational_is_reported_with_exit_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "bad.json",
        r#"{"vertices": [{"id": "u", "charge": "1/0"}], "edges": []}"#,
    );
    let out = graphmfd(&["analyze", "--input", &input]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["code"], "BAD_RATIONAL");
}

#[test]
fn validation_errors_have_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "split.json",
        r#"{"vertices": [{"id": "u", "charge": 0}, {"id": "v", "charge": 0}], "edges": []}"#,
    );
    let out = graphmfd(&["analyze", "--input", &input]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["code"], "DISCONNECTED_GRAPH");

    let input = write(dir.path(), "broken.json", "{ not json");
    let out = graphmfd(&["analyze", "--input", &input]);
    assert_eq!(stdout_json(&out)["error"]["code"], "BAD_JSON");
}

#[test]
fn generate_is_deterministic() {
    let args = ["generate", "--vertices", "4", "--edges", "6", "--seed", "17"];
    let a = graphmfd(&args);
    let b = graphmfd(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(v["edges"].as_array().unwrap().len(), 6);

    let bad = graphmfd(&["generate", "--vertices", "4", "--edges", "2", "--seed", "1"]);
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(stdout_json(&bad)["error"]["code"], "INFEASIBLE_SHAPE");
}

#[test]
fn ingest_then_analyze_matches() {
    let dir = tempfile::tempdir().unwrap();
    let glued = write(
        dir.path(),
        "glued.json",
        r#"{
  "vertices": [{"id": "u"}, {"id": "v"}],
  "edges": [{"id": "e", "ends": ["u", "v"], "gluing": [[1, 1], [1, 0]]}]
}"#,
    );
    let reduced = dir.path().join("reduced.json");
    let out = graphmfd(&["ingest", "--input", &glued, "--output", reduced.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let a = stdout_json(&graphmfd(&["analyze", "--input", &glued]));
    let b = stdout_json(&graphmfd(&["analyze", "--input", reduced.to_str().unwrap()]));
    assert_eq!(a["report"], b["report"]);
}

#[test]
fn batch_mode_writes_one_report_per_manifest() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.json", EXAMPLE_C);
    write(
        dir.path(),
        "b.json",
        r#"{"vertices": [{"id": "x", "charge": 0}], "edges": [{"id": "l", "ends": ["x", "x"], "b": 1}]}"#,
    );
    let out = graphmfd(&["analyze", "--input", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    for stem in ["a", "b"] {
        let text = fs::read_to_string(dir.path().join(format!("{stem}.report.json"))).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["report"]["verdict_vf"], true);
    }
    // reports are not picked up as inputs on a second run
    let again = graphmfd(&["analyze", "--input", dir.path().to_str().unwrap()]);
    assert_eq!(String::from_utf8_lossy(&again.stdout).lines().count(), 2);
}

#[test]
fn selftest_on_worked_examples() {
    let out = graphmfd(&["selftest", "--breadth", "0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}
