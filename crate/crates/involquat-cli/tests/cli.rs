//! End-to-end tests of the binary: descriptor in, one JSON document out,
//! exit codes per contract, byte-identical output for identical inputs.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_involquat"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .expect("stdin piped")
        .write_all(stdin.as_bytes())
        .expect("stdin written");
    child.wait_with_output().expect("binary finishes")
}

fn metabolic_counterexample_descriptor(p: u64) -> String {
    format!(
        r#"{{
        "schema": "involquat/1",
        "algebra": {{
            "field": {{"kind": "Fp", "p": {p}}},
            "n": 4,
            "involution": {{"kind": "first", "g": [["1","0","0","0"],["0","-1","0","0"],["0","0","1","0"],["0","0","0","-1"]]}}
        }},
        "elements": {{"e": [["1","0","0","0"],["1","0","0","0"],["1","-1","1","0"],["1","-1","1","0"]]}},
        "seed": 1,
        "trials": 50
    }}"#
    )
}

fn symplectic_m2_descriptor() -> &'static str {
    r#"{
        "schema": "involquat/1",
        "algebra": {
            "field": {"kind": "Fp", "p": 3},
            "n": 2,
            "involution": {"kind": "first", "g": [["0","1"],["-1","0"]]}
        },
        "elements": {"u": [["1","0"],["0","-1"]]},
        "lambda": "1",
        "seed": 3,
        "trials": 25
    }"#
}

#[test]
fn find_quat_counterexample_is_negative_and_deterministic() {
    let descriptor = metabolic_counterexample_descriptor(3);
    let first = run(&["find-quat", "--for", "idempotent"], &descriptor);
    assert!(first.status.success(), "stderr: {}", String::from_utf8_lossy(&first.stderr));
    let body = String::from_utf8(first.stdout.clone()).unwrap();
    assert!(body.contains("\"decision\":\"none-by-theorem\""), "{body}");
    let second = run(&["find-quat", "--for", "idempotent"], &descriptor);
    assert_eq!(first.stdout, second.stdout, "identical inputs must give identical bytes");
}

#[test]
fn find_quat_element_constructs() {
    let out = run(&["find-quat", "--for", "element"], symplectic_m2_descriptor());
    assert!(out.status.success());
    let body = String::from_utf8(out.stdout).unwrap();
    assert!(body.contains("\"decision\":\"constructed\""), "{body}");
    assert!(body.contains("\"split_witness\""), "{body}");
}

#[test]
fn find_quat_symmetric_route_char2_orthogonal() {
    let descriptor = r#"{
        "schema": "involquat/1",
        "algebra": {
            "field": {"kind": "Fp", "p": 2},
            "n": 4,
            "involution": {"kind": "first", "g": [["1","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1"]]}
        },
        "elements": {"u": [["1","0","1","1"],["0","1","1","1"],["1","1","0","1"],["1","1","1","0"]]},
        "lambda": "1"
    }"#;
    let out = run(&["find-quat", "--for", "element"], descriptor);
    assert!(out.status.success());
    let body = String::from_utf8(out.stdout).unwrap();
    assert!(body.contains("\"decision\":\"none-by-theorem\""), "{body}");
}

#[test]
fn malformed_json_exits_two() {
    let out = run(&["classify-involution"], "{not json");
    assert_eq!(out.status.code(), Some(2));
    let body = String::from_utf8(out.stdout).unwrap();
    assert!(body.contains("malformed JSON"), "{body}");
}

#[test]
fn precondition_failure_exits_two() {
    // identity is not metabolic, and not even a legal skew element
    let descriptor = r#"{
        "schema": "involquat/1",
        "algebra": {
            "field": {"kind": "Fp", "p": 3},
            "n": 2,
            "involution": {"kind": "first", "g": [["1","0"],["0","1"]]}
        },
        "elements": {"u": [["1","0"],["0","1"]]}
    }"#;
    let out = run(&["find-quat", "--for", "element"], descriptor);
    assert_eq!(out.status.code(), Some(2));
    let body = String::from_utf8(out.stdout).unwrap();
    assert!(body.contains("\"decision\":\"precondition-failed\""), "{body}");
}

#[test]
fn classify_involution_output() {
    let out = run(&["classify-involution"], &metabolic_counterexample_descriptor(5));
    assert!(out.status.success());
    let body = String::from_utf8(out.stdout).unwrap();
    assert!(body.contains("\"kind\":\"first\""), "{body}");
    assert!(body.contains("\"type\":\"orthogonal\""), "{body}");
}

#[test]
fn classify_idempotent_output() {
    let out = run(&["classify-idempotent"], &metabolic_counterexample_descriptor(3));
    assert!(out.status.success());
    let body = String::from_utf8(out.stdout).unwrap();
    assert!(body.contains("\"class\":\"metabolic\""), "{body}");
    assert!(body.contains("\"dim_right_ideal\":8"), "{body}");
}

#[test]
fn fuzz_summary_deterministic() {
    let descriptor = metabolic_counterexample_descriptor(3);
    let args = ["fuzz", "--kind", "metabolic", "--trials", "8", "--seed", "5"];
    let a = run(&args, &descriptor);
    let b = run(&args, &descriptor);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let body = String::from_utf8(a.stdout).unwrap();
    assert!(body.contains("\"violations\":[]"), "{body}");
}

#[test]
fn oracle_finds_whole_m2() {
    let descriptor = r#"{
        "schema": "involquat/1",
        "algebra": {
            "field": {"kind": "Fp", "p": 2},
            "n": 2,
            "involution": {"kind": "first", "g": [["1","0"],["0","1"]]}
        },
        "elements": {"required": [["0","1"],["0","0"]]}
    }"#;
    let out = run(&["oracle", "--threads", "1"], descriptor);
    assert!(out.status.success());
    let body = String::from_utf8(out.stdout).unwrap();
    assert!(body.contains("\"found\":true"), "{body}");
}

#[test]
fn verify_examples_passes() {
    let out = run(&["verify-examples", "--no-oracle"], "");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let body = String::from_utf8(out.stdout).unwrap();
    assert!(body.contains("\"all_pass\":true"), "{body}");
}
