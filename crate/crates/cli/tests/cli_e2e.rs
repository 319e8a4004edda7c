//! Exit-code contract per subcommand: 0 all pass, 1 a failed check, 2 usage.

use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_koranyi")).args(args).output().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), json)
}

fn code(args: &[&str]) -> i32 {
    run(args).0
}

#[test]
fn verify_identities() {
    let (c, json) = run(&["verify-identities", "--mc-samples", "20000", "--triples", "500", "--points", "500"]);
    assert_eq!(c, 0, "{json}");
    assert!(json["checks"].as_array().unwrap().iter().all(|c| !c["citation"].as_str().unwrap().is_empty()));
    let (c, json) = run(&["verify-identities", "--mc-samples", "20000", "--tol-scale", "0"]);
    assert_eq!(c, 1);
    let worst = json["checks"].as_array().unwrap().iter().find(|c| c["passed"] == false).unwrap();
    assert!(worst.get("worst_point").is_some());
    assert_eq!(code(&["verify-identities", "--N", "0"]), 2);
    assert_eq!(code(&["verify-identities", "--tol-scale", "-1"]), 2);
}

#[test]
fn classify() {
    for (args, verdict) in [
        (vec!["--N", "1", "--lambda", "0", "--a", "-2", "--p", "2"], "NonexistenceAllF"),
        (vec!["--N", "1", "--lambda-critical", "--a", "0", "--p", "3"], "OpenCritical"),
        (vec!["--N", "1", "--lambda", "0", "--a", "0", "--p", "2"], "ExistenceWitness"),
    ] {
        let mut full = vec!["classify"];
        full.extend(args);
        let (c, json) = run(&full);
        assert_eq!(c, 0);
        assert_eq!(json["data"]["verdict"], verdict, "{json}");
    }
    assert_eq!(code(&["classify", "--lambda", "-5"]), 2);
    assert_eq!(code(&["classify", "--p", "1"]), 2);
}

#[test]
fn witness() {
    assert_eq!(code(&["witness"]), 0);
    assert_eq!(code(&["witness", "--lambda-critical", "--a", "0", "--p", "2"]), 0);
    assert_eq!(code(&["witness", "--tau", "5"]), 2);
    assert_eq!(code(&["witness", "--eps", "100"]), 2);
    assert_eq!(code(&["witness", "--a", "-3"]), 2);
}

#[test]
fn lemma_scaling() {
    let (c, json) = run(&["lemma-scaling", "--quantity", "gamma-space"]);
    assert_eq!(c, 0);
    let slope = json["data"]["fit"]["slope"].as_f64().unwrap();
    assert!((slope - 2.0).abs() < 0.1);
    assert_eq!(code(&["lemma-scaling", "--quantity", "time-factor", "--k", "1", "--p", "2"]), 0);
    assert_eq!(code(&["lemma-scaling", "--quantity", "mu-log", "--lambda", "0", "--a", "-2", "--p", "2"]), 0);
    assert_eq!(code(&["lemma-scaling", "--quantity", "mu-log", "--lambda", "0", "--a", "0", "--p", "2"]), 1);
    assert_eq!(code(&["lemma-scaling", "--big-t", "0"]), 2);
}

#[test]
fn integrate() {
    assert_eq!(code(&["integrate", "--s", "-2", "--r-inner", "0.1"]), 0);
    assert_eq!(code(&["integrate", "--r-inner", "2", "--r-outer", "1"]), 2);
}

#[test]
fn simulate() {
    let (c, json) = run(&["simulate", "--lambda", "0", "--a", "2", "--cells", "48", "--t-end", "0.5"]);
    assert_eq!(c, 0);
    assert!(json["data"]["result"].get("status").is_some(), "{json}");
    assert_eq!(code(&["simulate", "--cells", "4"]), 2);
    assert_eq!(code(&["simulate", "--t-end", "-1"]), 2);
}

#[test]
fn phase_sweep_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let out = |sub: &str| dir.path().join(sub);
    let args = |d: &Path| {
        vec![
            "--out".to_string(),
            d.display().to_string(),
            "phase-sweep".into(),
            "--lambdas".into(),
            "-0.75,0".into(),
            "--a-list".into(),
            "-2,2".into(),
            "--cells".into(),
            "40".into(),
            "--t-end".into(),
            "0.5".into(),
        ]
    };
    for sub in ["one", "two"] {
        let a = args(&out(sub));
        assert_eq!(code(&a.iter().map(String::as_str).collect::<Vec<_>>()), 0);
    }
    let one = std::fs::read_to_string(out("one").join("sweep.csv")).unwrap();
    assert_eq!(one, std::fs::read_to_string(out("two").join("sweep.csv")).unwrap());
    assert!(out("one").join("sweep_p0.svg").exists());
    assert_eq!(code(&["phase-sweep", "--lambdas", ""]), 2);
    assert_eq!(code(&["phase-sweep", "--t-end", "0"]), 2);
    assert_eq!(code(&["phase-sweep", "--cells", "4"]), 2);
}

#[test]
fn report_merges_and_propagates_failures() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(code(&["--out", d, "classify"]), 0);
    assert_eq!(code(&["--out", d, "witness"]), 0);
    let (c, json) = run(&["--out", d, "report"]);
    assert_eq!(c, 0);
    assert_eq!(json["data"]["suites"].as_array().unwrap().len(), 2);
    assert!(dir.path().join("report.md").exists());
    assert_eq!(code(&["--out", d, "verify-identities", "--mc-samples", "20000", "--tol-scale", "0"]), 1);
    assert_eq!(code(&["--out", d, "report"]), 1);
    assert_eq!(code(&["report", "--input", "/nonexistent/report.json"]), 2);
    assert_eq!(code(&["report"]), 2);
}
