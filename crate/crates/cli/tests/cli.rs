use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-schubert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn temp_json(v: &Value) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{v}").unwrap();
    f
}

fn d9_ring() -> Value {
    serde_json::json!({
        "m": 9,
        "generators": [8, 5, 4, 2, 1, 3, 6, 7, 9],
        "alphas": [
            [0, 0, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, 0, 0, 0, 0],
            [0, 0, 1, 1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0, 0, 0, 0],
            [1, 0, 0, 0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 1, 0]
        ]
    })
}

#[test]
fn digraph_json_edges() {
    let o = run(&["digraph", "A5", "3,1,4,5,2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(
        v["edges"],
        serde_json::json!([[2, 1, 1], [2, 3, 1], [4, 3, 1], [5, 4, 1]])
    );
}

#[test]
fn digraph_dot_labels() {
    let o = run(&["digraph", "B2", "2,1", "--dot"]);
    assert!(stdout(&o).contains("1 -> 2 [label=2]"));
}

#[test]
fn fano_c3_both_criteria() {
    let o = run(&["fano", "C3", "1,2,3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["fano"], false);
    assert_eq!(v["weak_fano"], true);
    assert_eq!(
        v["indegree"],
        v["degrees"]
            .as_object()
            .map(|d| { serde_json::json!({"fano": d["fano"], "weak_fano": d["weak_fano"]}) })
            .unwrap()
    );
}

#[test]
fn enumerate_e6_table_row() {
    let o = run(&["enumerate", "E6", "--check-table3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("totals (20,17,4)"), "{out}");
    assert!(out.contains("check=pass"));
    let v = json(&run(&["enumerate", "E6", "--check-table3", "--json"]));
    assert_eq!(v["check"]["pass"], true);
    assert_eq!(v["totals"]["classes"], 20);
}

#[test]
fn info_lists_automorphisms() {
    let v = json(&run(&["info", "D4", "--json"]));
    assert_eq!(v["automorphisms"].as_array().unwrap().len(), 6);
    assert_eq!(v["simply_laced"], true);
}

#[test]
fn cohomology_eigen_table() {
    let v = json(&run(&["cohomology", "A5", "3,1,4,5,2", "--json"]));
    assert_eq!(v["betti"], serde_json::json!([1, 5, 10, 10, 5, 1]));
    assert_eq!(v["relations"][4], "x2^2 = x2*(x3 + x1)");
    let total: u64 = v["eigen"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["multiplicity"].as_u64().unwrap())
        .sum();
    assert_eq!(total, 5);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["digraph", "X3", "1"]).status.code(), Some(1));
    assert_eq!(run(&["digraph", "A3", "1,x"]).status.code(), Some(1));
    assert_eq!(run(&["digraph", "A3", "1,7"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["digraph"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["digraph", "A3", "1,2,1"]).status.code(), Some(3));
    assert_eq!(
        run(&["cohomology", "B2", "2,1", "--eigen"]).status.code(),
        Some(3)
    );
    assert_eq!(run(&["cohomology", "B2", "2,1"]).status.code(), Some(0));
}

#[test]
fn recover_trusted_and_obfuscated() {
    let f = temp_json(&d9_ring());
    let path = f.path().to_str().unwrap();
    let v = json(&run(&["recover", "--input", path, "--emit", "json"]));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["steps_run"], serde_json::json!([1, 2, 3, 4]));
    let expect = json(&run(&["digraph", "D9", "8,5,4,2,1,3,6,7,9", "--json"]));
    assert_eq!(v["edges"], expect["edges"]);
    let o = run(&[
        "recover",
        "--input",
        path,
        "--obfuscate",
        "11",
        "--emit",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["edges"].as_array().unwrap().len(), 8);
    let o = run(&["recover", "--input", path, "--bound", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn recover_refuses_label_two() {
    let f =
        temp_json(&serde_json::json!({"m": 2, "generators": [2, 1], "alphas": [[0, 0], [2, 0]]}));
    let o = run(&["recover", "--input", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn recover_step_failure_is_reported() {
    let f = temp_json(&serde_json::json!({"r": 2, "h4_dim": 1, "table": [[[1], [1]], [[1], [1]]]}));
    let o = run(&["recover", "--input", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["error"], "recovery");
    assert_eq!(v["step"], "step1");
}

#[test]
fn recover_bad_input_is_usage() {
    assert_eq!(
        run(&["recover", "--input", "/nonexistent/ring.json"])
            .status
            .code(),
        Some(1)
    );
    let f = temp_json(&serde_json::json!({"hello": 1}));
    assert_eq!(
        run(&["recover", "--input", f.path().to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn output_is_deterministic() {
    let a = run(&["enumerate", "D5", "--json"]);
    let b = run(&["enumerate", "D5", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn selfcheck_passes() {
    let o = run(&["selfcheck"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}
