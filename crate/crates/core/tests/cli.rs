use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_coarse-lab");

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(BIN).args(args).env_remove("COARSE_LAB_JOBS").output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn put(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn missing_input_is_a_usage_error() {
    let (code, _) = run(&["analyze", "--space", "/nonexistent/space.json"]);
    assert_eq!(code, 2);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let (code, _) = run(&["fuzz", "--bogus"]);
    assert_eq!(code, 2);
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn generate_is_deterministic() {
    let args = ["generate", "random-graph", "--n", "12", "--seed", "7"];
    let (a, first) = run(&args);
    let (b, second) = run(&args);
    assert_eq!((a, b), (0, 0));
    assert_eq!(first, second);
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["n"], 12);
}

#[test]
fn fold_map_is_two_to_one() {
    let dir = tempfile::tempdir().unwrap();
    put(dir.path(), "x.json", &run(&["generate", "path", "--n", "21"]).1);
    put(dir.path(), "y.json", &run(&["generate", "path", "--n", "11"]).1);
    let table: Vec<String> = (0..21i64).map(|i| (i - 10).abs().to_string()).collect();
    let map = put(dir.path(), "f.json", &format!(r#"{{"source":"x.json","target":"y.json","table":[{}]}}"#, table.join(",")));

    let (code, body) = run(&["check-map", "--map", &map, "--scale-list", "1,2,3", "--expect-n", "2"]);
    assert_eq!(code, 0, "{body}");
    let report: Value = serde_json::from_str(&body).unwrap();
    assert!(report["rows"].as_array().unwrap().iter().all(|r| r["n"] == 2));

    let (code, _) = run(&["check-map", "--map", &map, "--scale-list", "1", "--expect-n", "1"]);
    assert_eq!(code, 1);
}

#[test]
fn written_certificates_reverify() {
    let dir = tempfile::tempdir().unwrap();
    let space = put(dir.path(), "x.json", &run(&["generate", "path", "--n", "40"]).1);
    let cover = put(dir.path(), "u.json", &run(&["generate", "brick-cover", "--dims", "40", "--size", "10"]).1);
    let base = ["certify-asdim", "--space", &space, "--cover", &cover, "--n", "1", "--scale-list"];
    let (code, _) = run(&[&base[..], &["4"]].concat());
    assert_eq!(code, 1);
    let out = dir.path().join("certs.json").display().to_string();
    let (code, _) = run(&[&["--out", &out][..], &base[..], &["1,2"]].concat());
    assert_eq!(code, 0);
    let (code, body) = run(&["verify", "--certificate", &out, "--space", &space]);
    assert_eq!(code, 0, "{body}");
}

#[test]
fn fuzz_smoke() {
    let (code, body) = run(&["fuzz", "--seed", "3", "--count", "10", "--max-n", "12"]);
    assert_eq!(code, 0, "{body}");
}
