//! Exercises the installed binary end to end: exit codes, JSON shapes,
//! CSV export, and report files on disk.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chevalley"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn failing_lemma_exits_with_one_and_names_the_index() {
    let out = run(&["verify", "--lemma", "perfect", "--system", "B2", "--ring", "Z/2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["lemma_id"], "perfect");
    assert_eq!(v["status"], "fail");
    let witnesses = v["witnesses"].as_array().expect("witnesses array");
    assert!(
        witnesses.iter().any(|w| w.as_str().unwrap_or("").contains("index 2")),
        "no witness mentions the index: {witnesses:?}"
    );
}

#[test]
fn group_enumeration_reports_the_known_order() {
    let out = run(&["egroup", "--system", "A2", "--ring", "Z/2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["order"], 168);
    assert_eq!(v["complete"], true);
}

#[test]
fn passing_lemma_exits_cleanly() {
    let out = run(&["verify", "--lemma", "root-sys-dec", "--system", "G2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "pass");
}

#[test]
fn csv_export_uses_the_documented_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let out = run(&[
        "commutator",
        "--system",
        "A2",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(&path).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("alpha,beta,i,j,coefficient"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 12, "A2 has 12 nonzero table terms");
    for row in rows {
        assert_eq!(row.split(',').count(), 5, "malformed row: {row}");
    }
}

#[test]
fn report_files_land_on_disk_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "verify",
        "--lemma",
        "perfect",
        "--system",
        "A2",
        "--ring",
        "Z/2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["lemma_id"], "perfect");
    assert_eq!(v["instance"]["system"], "A2");
    assert_eq!(v["instance"]["ring"], "Z/2");
    assert_eq!(v["status"], "pass");
    assert!(v["timings"]["elements"].is_u64());
}

#[test]
fn empty_suite_profile_exits_cleanly() {
    let out = run(&["suite", "--profile", "empty"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["summary"]["total"], 0);
}

#[test]
fn argument_and_domain_errors_exit_with_two() {
    let unknown_lemma = run(&["verify", "--lemma", "no-such-lemma", "--system", "A2"]);
    assert_eq!(unknown_lemma.status.code(), Some(2));
    let bad_ring = run(&["egroup", "--system", "A2", "--ring", "Z/banana"]);
    assert_eq!(bad_ring.status.code(), Some(2));
    let missing_arg = run(&["egroup", "--system"]);
    assert_eq!(missing_arg.status.code(), Some(2));
    let unknown_flag = run(&["egroup", "--system", "A2", "--ring", "Z/2", "--bogus"]);
    assert_eq!(unknown_flag.status.code(), Some(2));
}

#[test]
fn exhausted_caps_exit_with_three() {
    let out = run(&[
        "verify",
        "--lemma",
        "rel-elem",
        "--system",
        "B2",
        "--ring",
        "Z/3",
        "--cap",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "capped");
}
