use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pillowcase-kh")).args(args).env("PILLOWCASE_THREADS", "2").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(rel: &str) -> String {
    corpus(rel).to_string_lossy().into_owned()
}

#[test]
fn verify_is_clean() {
    let out = run(&["verify"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["passed"], true);
    for r in v["reports"].as_array().unwrap() {
        assert!(r["violations"].as_array().unwrap().is_empty(), "{}", r["name"]);
    }
}

#[test]
fn compare_on_the_trefoil() {
    let out = run(&["compare", "--closure", "0", &path("tangles/trefoil_right.json")]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["equal"], true);
    assert_eq!(v["pipeline"], v["oracle"]);
}

#[test]
fn compare_is_refused_without_an_extending_orientation() {
    let out = run(&["compare", "--closure", "1", &path("tangles/trefoil_right.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "refused");
    // pairing still runs, relative to the cube
    let out = run(&["pair", "--closure", "1", &path("tangles/trefoil_right.json")]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["ranks"]["mode"], "relative");
    assert!(v["note"].is_string());
}

#[test]
fn invariance_on_an_r2_pair() {
    let out = run(&["invariance", &path("pairs/r2_on_crossing.json")]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["passed"], true);
    for row in v["pairs"].as_array().unwrap() {
        assert_eq!(row["first"], row["second"]);
    }
}

#[test]
fn invariance_over_the_directory() {
    let out = run(&["invariance", "--format", "table", &path("pairs")]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 20);
    assert!(!text.contains("DIFFERENT"));
}

#[test]
fn jones_of_the_figure_eight() {
    let out = run(&["jones", "--closure", "1", &path("tangles/figure_eight.json")]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["terms"], serde_json::json!([[-5, 1], [-3, -1], [-1, 1], [1, -1], [3, 1]]));
    assert_eq!(v["state_sum_agrees"], true);
}

#[test]
fn build_and_pair_are_deterministic() {
    for cmd in ["build", "pair", "khovanov"] {
        let a = run(&[cmd, &path("tangles/hopf_positive.json")]);
        let b = run(&[cmd, &path("tangles/hopf_positive.json")]);
        assert!(a.status.success(), "{cmd}");
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
    let v = json(&run(&["build", &path("tangles/hopf_positive.json")]));
    assert!(v["checks"]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn bad_input_gives_structured_errors() {
    let out = run(&["pair", "no/such/file.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "io");
    let dir = std::env::temp_dir().join("pillowcase-kh-bad.json");
    std::fs::write(&dir, r#"{"endpoints":[1,2,3],"crossings":[]}"#).unwrap();
    let out = run(&["build", &dir.to_string_lossy()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "input");
    let out = run(&["pair", "--closure", "2", &path("tangles/crossing.json")]);
    assert!(!out.status.success());
}
