use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rado(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rado-lab")).args(args).env("RADO_LAB_THREADS", "2").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decompose_reports_prism() {
    let o = rado(&["decompose", "builtin:hexagonal_prism"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["d_inf"], 1);
    assert_eq!(v["isometry_group_order"], 24);
    assert_eq!(v["config"]["command"]["subcommand"], "decompose");
}

#[test]
fn same_config_gives_identical_bytes() {
    let args = ["s0-experiment", "--p", "1/2", "--trials", "6", "--seed", "3", "--nu", "4", "--fibre", "2", "--u-radius", "2", "--budget", "2"];
    let a = rado(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_rado-lab")).args(args).env("RADO_LAB_THREADS", "1").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("# rado-lab {"));
    assert!(text.contains("trial,agreed,bf_completed"));
}

#[test]
fn graph_file_round_trip_through_bj_audit() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.json");
    let o = rado(&["--out", path(&graph), "sample-graph", "--ball", "builtin:square", "--n", "300", "--window", "3/2", "--p", "1/2", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let g: Value = serde_json::from_str(&std::fs::read_to_string(&graph).unwrap()).unwrap();
    assert_eq!(g["config"]["command"]["seed"], 5);

    let again = dir.path().join("g2.json");
    rado(&["--out", path(&again), "sample-graph", "--ball", "builtin:square", "--n", "300", "--window", "3/2", "--p", "1/2", "--seed", "5"]);
    assert_eq!(std::fs::read(&graph).unwrap(), std::fs::read(&again).unwrap());

    let audit = rado(&["bj-audit", "--graph", path(&graph), "--kmax", "3"]);
    assert_eq!(audit.status.code(), Some(0));
    let text = stdout(&audit);
    assert!(text.contains("k,pairs,satisfied,fraction"));
    assert!(text.contains("# one_sided_violations 0"));

    let json = rado(&["bj-audit", "--graph", path(&graph), "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["report"]["one_sided_violations"], 0);
}

#[test]
fn step_isometry_check_and_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, r#"{"pairs": [[["0", "0"], ["1/3", "0"]], [["3/2", "1/4"], ["11/6", "1/4"]]]}"#).unwrap();
    let o = rado(&["check-step-isometry", "builtin:square", path(&good)]);
    assert_eq!(o.status.code(), Some(0));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"pairs": [[["0", "0"], ["0", "0"]], [["1/2", "9/10"], ["7/5", "9/10"]]]}"#).unwrap();
    let o = rado(&["check-step-isometry", "builtin:square", path(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["counterexample"]["y_j"], serde_json::json!(["7/5", "9/10"]));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a step-isometry"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["frobnicate"],
        vec![],
        vec!["agreement", "--p", "0.3"],
        vec!["agreement", "--p", "3/2"],
        vec!["decompose", "builtin:dodecahedron"],
        vec!["sample-graph", "--ball", "builtin:square", "--n", "10", "--window", "1.5", "--p", "1/2"],
        vec!["decompose", "builtin:square", "--format", "csv"],
    ] {
        let o = rado(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
    let o = rado(&["decompose", "builtin:dodecahedron"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("dodecahedron"));
}

#[test]
fn missing_input_is_a_runtime_error() {
    let o = rado(&["bj-audit", "--graph", "/nonexistent/graph.json"]);
    assert_eq!(o.status.code(), Some(3));
    let o = rado(&["decompose", "/nonexistent/ball.json"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(rado(&["--help"]).status.code(), Some(0));
    let v = rado(&["--version"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains(env!("CARGO_PKG_VERSION")));
}
