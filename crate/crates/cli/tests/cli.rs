//! End-to-end runs of the `entropy-lab` binary.

use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entropy-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn passing_run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["run", "--experiment", "kuhn_consistency", "--seed", "1", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS relative_error"));
    for f in ["manifest.json", "results.csv", "summary.json"] {
        assert!(dir.path().join(f).is_file(), "{f} missing");
    }
    let csv = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
    assert!(csv.starts_with("n_or_k,lower,upper,heuristic,reference,ratio\n"));
}

#[test]
fn failed_check_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"experiment": "hardy_consistency", "params": {"c_max": 0.5}}"#).unwrap();
    let out = cli(&["run", "--config", path(&cfg), "--out", path(&dir.path().join("run"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL constant_c"));
}

#[test]
fn bad_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cli(&["run", "--experiment", "nope"]).status.code(), Some(1));
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"experiment": "kuhn_consistency", "extra": 1}"#).unwrap();
    assert_eq!(cli(&["run", "--config", path(&cfg)]).status.code(), Some(1));
    let missing = dir.path().join("missing.json");
    assert_eq!(cli(&["norm", "--tree", path(&missing), "--p", "2", "--q", "2"]).status.code(), Some(1));
}

#[test]
fn gen_tree_then_norm() {
    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("h.json");
    std::fs::write(
        &profile,
        r#"{"h": {"theta": 1.0, "gamma": 0.0, "tau": {"kind": "const"}, "c3": 2.0}}"#,
    )
    .unwrap();
    let tree = dir.path().join("tree.json");
    let out = cli(&["gen-tree", "--profile", path(&profile), "--depth", "4", "--out", path(&tree)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = cli(&["norm", "--tree", path(&tree), "--p", "2", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let (lo, hi) = (v["lower"].as_f64().unwrap(), v["upper"].as_f64().unwrap());
    assert!(lo > 0.0 && lo <= hi);
}
