use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn majlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_majlat")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

struct Files {
    _dir: TempDir,
    p: String,
    q: String,
    p2: String,
    q2: String,
}

fn files() -> Files {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "p.json", r#"{"pmf": [0.6, 0.2, 0.2]}"#);
    let q = write(dir.path(), "q.csv", "mass\n0.45\n0.4\n0.15\n");
    let p2 = write(dir.path(), "p2.json", r#"{"pmf": [0.398886918, 0.370328848, 0.228811150, 0.001973084]}"#);
    let q2 = write(dir.path(), "q2.json", r#"{"pmf": [0.539996140, 0.229554617, 0.116684354, 0.113764889]}"#);
    let s = |p: PathBuf| p.to_str().unwrap().to_string();
    Files { p: s(p), q: s(q), p2: s(p2), q2: s(q2), _dir: dir }
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn delta_table() {
    let f = files();
    let out = json(&majlat(&["delta", "--a", &f.p, "--b", &f.q, "--family", "renyi", "--alphas", "0,0.2,0.5,0.7,0.9,1,2,inf"]));
    let got: Vec<f64> = out["deltas"].as_array().unwrap().iter().map(|r| r["delta"].as_f64().unwrap()).collect();
    let want = [0.0, 0.00580417, 0.01387056, 0.01882329, 0.02343356, 0.02560746, 0.04204643, 0.0];
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= 1e-6, "{got:?}");
    }
    assert_eq!(out["deltas"][7]["alpha"], "inf");

    let out = json(&majlat(&["delta", "--a", &f.p2, "--b", &f.q2, "--alphas", "0.5"]));
    assert!((out["deltas"][0]["delta"].as_f64().unwrap() + 0.00234206).abs() <= 1e-6);
}

#[test]
fn meet_join_and_round_trip() {
    let f = files();
    let out = json(&majlat(&["meet", "--a", &f.p, "--b", &f.q]));
    assert_eq!(floats(&out["pmf"]), vec![0.45, 0.35, 0.2]);
    assert_eq!(floats(&out["prefix_sums"]), vec![0.45, 0.8, 1.0]);

    let dir = TempDir::new().unwrap();
    let out = majlat(&["join", "--a", &f.p2, "--b", &f.q2, "--precision", "6"]);
    let path = write(dir.path(), "join.json", std::str::from_utf8(&out.stdout).unwrap());
    let again = json(&majlat(&["meet", "--a", path.to_str().unwrap(), "--b", path.to_str().unwrap(), "--precision", "6"]));
    let want = [0.539996140, 0.229554617, 0.228476159, 0.001973084];
    for (g, w) in floats(&again["pmf"]).iter().zip(want) {
        assert!((g - w).abs() <= 1e-6);
    }

    let csv = majlat(&["join", "--a", &f.p, "--b", &f.q, "--csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap(), "k,mass,prefix\n1,0.6,0.6\n2,0.25,0.85\n3,0.15,1\n");
}

#[test]
fn lorenz_csv() {
    let f = files();
    let out = majlat(&["lorenz", "--pmf", &f.p]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "t,L\n0,0\n1,0.6\n2,0.8\n3,1\n");
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("curve.csv");
    assert!(majlat(&["lorenz", "--pmf", &f.q, "--out", path.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read_to_string(path).unwrap(), "t,L\n0,0\n1,0.45\n2,0.85\n3,1\n");
}

#[test]
fn couplings() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.json", r#"{"pmf": [0.5, 0.5]}"#);
    let b = write(dir.path(), "b.json", r#"{"pmf": [0.75, 0.25]}"#);
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let out = majlat(&["coupling", "--a", a, "--b", b, "--kind", "comonotone"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "i,j,mass\n1,1,0.5\n2,1,0.25\n2,2,0.25\n");
    let out = json(&majlat(&["coupling", "--a", a, "--b", b, "--kind", "independent", "--sorted"]));
    assert_eq!(floats(&out["pmf"]), vec![0.375, 0.375, 0.125, 0.125]);
    let out = json(&majlat(&["coupling", "--a", a, "--b", b, "--kind", "comonotone", "--json"]));
    assert_eq!(out["cells"].as_array().unwrap().len(), 3);
}

#[test]
fn entropy_metric_theil() {
    let f = files();
    let out = json(&majlat(&["entropy", "--pmf", &f.p, "--alpha", "1"]));
    assert!((out["value"].as_f64().unwrap() - 0.950270539).abs() < 1e-9);
    assert_eq!(out["family"], "renyi");
    let out = json(&majlat(&["entropy", "--pmf", &f.p, "--alpha", "1", "--base", "2"]));
    assert!((out["value"].as_f64().unwrap() - 0.9502705392 / std::f64::consts::LN_2).abs() < 1e-8);
    let out = json(&majlat(&["entropy", "--pmf", &f.p, "--alpha", "2", "--family", "tsallis"]));
    assert!((out["value"].as_f64().unwrap() - 0.56).abs() < 1e-12);

    let out = json(&majlat(&["metric", "--a", &f.p, "--b", &f.q, "--alpha", "1"]));
    assert!((out["value"].as_f64().unwrap() - 0.085409368).abs() < 1e-9);
    assert_eq!(out["base"], "e");

    let out = json(&majlat(&["theil", "--pmf", &f.p]));
    assert!((out["value"].as_f64().unwrap() - 0.148341749).abs() < 1e-9);
    let out = json(&majlat(&["theil", "--pmf", &f.p, "--alpha", "inf"]));
    assert!((out["value"].as_f64().unwrap() - 0.587786665).abs() < 1e-9);

    let dir = TempDir::new().unwrap();
    let z = write(dir.path(), "z.json", r#"{"pmf": [0.5, 0.5, 0.0]}"#);
    let out = json(&majlat(&["theil", "--pmf", z.to_str().unwrap(), "--trim-zeros"]));
    assert_eq!(out["value"].as_f64().unwrap(), 0.0);
}

#[test]
fn verify_exit_codes_and_report() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("out.json");
    let out = majlat(&[
        "verify", "--predicate", "subadd", "--family", "renyi", "--alphas", "0,0.5,1,2,inf",
        "--n", "6", "--samples", "2000", "--seed", "7", "--report", report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep["samples_run"], 2000);
    assert_eq!(rep["violations"].as_array().unwrap().len(), 0);
    assert!(rep["config"].is_object() && rep["worst_gap"].is_number());

    // Rényi entropy of order 1/2 is not supermodular, and sample 1 shows it
    let out = majlat(&[
        "verify", "--predicate", "supermod", "--alphas", "0.5", "--n", "4", "--samples", "10",
        "--report", report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let v = &rep["violations"][0];
    assert!(v["p"].is_array() && v["q"].is_array() && v["gap"].as_f64().unwrap() < 0.0);
    assert_eq!(v["alpha"], 0.5);
}

#[test]
fn search_reports_both_signs() {
    let out = json(&majlat(&["search", "--alpha", "0.5", "--family", "renyi", "--n", "4", "--samples", "2000", "--seed", "7"]));
    let w = &out["witnesses"][0];
    assert!(w["positive_count"].as_u64().unwrap() > 0);
    assert!(w["negative_count"].as_u64().unwrap() > 0);
}

#[test]
fn input_errors_exit_two() {
    let f = files();
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"pmf": [0.5, 0.6]}"#);
    let bad = bad.to_str().unwrap();
    assert_eq!(majlat(&["entropy", "--pmf", "/nonexistent/p.json", "--alpha", "1"]).status.code(), Some(2));
    assert_eq!(majlat(&["entropy", "--pmf", bad, "--alpha", "1", "--strict"]).status.code(), Some(2));
    assert_eq!(majlat(&["entropy", "--pmf", bad, "--alpha", "1"]).status.code(), Some(0));
    assert_eq!(majlat(&["entropy", "--pmf", &f.p, "--alpha", "-1"]).status.code(), Some(2));
    assert_eq!(majlat(&["entropy", "--pmf", &f.p, "--alpha", "inf", "--family", "tsallis"]).status.code(), Some(2));
    assert_eq!(majlat(&["metric", "--a", &f.p, "--b", &f.q, "--alpha", "0.5"]).status.code(), Some(2));
    assert_eq!(majlat(&["meet", "--a", &f.p, "--b", &f.q, "--precision", "18"]).status.code(), Some(2));
    assert_eq!(majlat(&["verify", "--n", "1"]).status.code(), Some(2));
}
