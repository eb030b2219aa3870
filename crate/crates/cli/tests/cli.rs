use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hcube(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcube"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn exhaustive_verify_covers_every_table() {
    let out = hcube(&[
        "verify",
        "--law",
        "eldan-gross",
        "--n",
        "3",
        "--p",
        "0.5",
        "--exhaustive",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["summary"]["rows"], 256);
    assert_eq!(doc["summary"]["violations"], 0);
    assert_eq!(doc["command"], "verify");
    assert_eq!(doc["tool"], "hcube");
}

#[test]
fn numerical_fact_passes() {
    let out = hcube(&["verify", "--law", "numerical-fact"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn trace_reports_its_branch() {
    let out = hcube(&["trace", "--fn", "n:2 hex:8"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["result"]["branch"], "W_large");
    assert_eq!(doc["reports"][0]["pass"], true);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["verify", "--law", "no-such-law"],
        vec!["verify", "--law", "eldan-gross", "--fn", "n:2 hex:zz"],
        vec!["search", "--n", "5", "--exhaustive"],
        vec!["trace", "--fn", "n:2 hex:0"],
        vec!["verify", "--law", "eldan-gross", "--p", "1.5"],
        vec!["verify", "--law", "eldan-gross", "--random", "10"],
        vec!["bogus"],
    ] {
        let out = hcube(&args);
        assert_eq!(code(&out), 1, "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&hcube(&["--help"])), 0);
    assert_eq!(code(&hcube(&["verify", "--help"])), 0);
    assert_eq!(code(&hcube(&["--version"])), 0);
}

#[test]
fn violations_exit_two_and_name_a_witness() {
    // an over-ambitious constant must break the lower bound
    let out = hcube(&["verify", "--law", "eldan-gross", "--n", "2", "--c", "10"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("worst violation"), "{err}");
    assert!(err.contains("witness=n:2 hex:"), "{err}");
    let doc = json(&out);
    assert!(doc["summary"]["violations"].as_u64().unwrap() > 0);
    assert_eq!(doc["summary"]["worst"]["pass"], false);
}

#[test]
fn identical_runs_differ_only_in_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let mut docs = Vec::new();
    for _ in 0..2 {
        let out = hcube(&[
            "verify",
            "--law",
            "talagrand-logvar",
            "--n",
            "3",
            "--p",
            "0.3",
            "--random",
            "50",
            "--seed",
            "7",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        assert!(String::from_utf8_lossy(&out.stdout).contains("50 rows"));
        docs.push(read_json(&path));
    }
    let (mut da, mut db) = (docs.remove(0), docs.remove(0));
    da.as_object_mut().unwrap().remove("timestamp_unix");
    db.as_object_mut().unwrap().remove("timestamp_unix");
    assert_eq!(
        serde_json::to_string(&da).unwrap(),
        serde_json::to_string(&db).unwrap()
    );
}

#[test]
fn thread_count_does_not_change_results() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_hcube"))
            .args(["search", "--law", "eldan-gross", "--n", "4", "--p", "0.3"])
            .env("HCUBE_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
        let mut doc = json(&out);
        doc.as_object_mut().unwrap().remove("timestamp_unix");
        doc
    };
    assert_eq!(run("1"), run("4"));

    let bad = Command::new(env!("CARGO_BIN_EXE_hcube"))
        .args(["verify", "--law", "numerical-fact"])
        .env("HCUBE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 1);
}

#[test]
fn csv_output_and_report_conversion() {
    let out = hcube(&[
        "verify",
        "--law",
        "eldan-gross",
        "--n",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "law,n,p,lhs,rhs_unit,ratio,constant,direction,pass,slack,witness_hex,tol,params,note"
    );
    assert_eq!(lines.count(), 16);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = hcube(&[
        "verify",
        "--law",
        "eldan-gross",
        "--n",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let out = hcube(&["report", "--in", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), text);

    let out = hcube(&[
        "report",
        "--in",
        dir.path().join("missing.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn search_profile_and_gauss_succeed() {
    let out = hcube(&["search", "--law", "eldan-gross", "--n", "1"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["result"]["argmin"], "n:1 hex:1");
    let min = doc["result"]["min_ratio"].as_f64().unwrap();
    assert!((min - 1.0 / (1.0 + std::f64::consts::E).ln().sqrt()).abs() < 1e-12);

    let out = hcube(&["profile", "--grid", "101"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["result"]["c_log"].is_object());

    let out = hcube(&["gauss", "--grid", "201"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["summary"]["violations"], 0);
    assert_eq!(
        doc["result"]["smoothed_gradient"].as_array().unwrap().len(),
        9
    );
}
