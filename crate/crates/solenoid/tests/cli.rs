//! End-to-end checks of the command-line front end.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solenoid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn periodic_counts_from_flags() {
    let out = run(&[
        "periodic",
        "--matrix",
        "[[0,0,6],[1,0,-2],[0,1,1]]",
        "--xi-poly",
        "[2,1,-1]",
        "--xi-power",
        "-3",
        "--k",
        "1,2",
    ]);
    assert!(out.status.success());
    let r = json(&out);
    let counts = r["periodic_points"].as_array().unwrap();
    assert_eq!(counts[0]["count"], serde_json::json!(169));
    assert_eq!(counts[1]["count"], serde_json::json!(38701));
}

#[test]
fn describe_tags() {
    let out = run(&["describe", "--matrix", "[[6,0],[0,2]]"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["end_ring"]["tag"], "two_dim_case_c");
    assert_eq!(r["linear_rep_group"]["tag"], "lower_triangular_gl2");
}

#[test]
fn end_check_identity_fast_path() {
    let out = run(&[
        "end-check",
        "--matrix",
        "[[1,0],[0,1]]",
        "--transform",
        "[[3,1],[4,7]]",
    ]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["decision"]["verdict"], "YES");
    assert_eq!(r["decision"]["certificate"]["kind"], "integrality");
}

#[test]
fn invalid_input_exits_2() {
    let out = run(&["end-check", "--matrix", "[[1,2],[3]]", "--transform", "[[1]]"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["periodic", "--matrix", "[[0,0],[0,0]]", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["periodic", "--matrix", "[[2,0],[0,2]]", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2)); // no transform given
}

#[test]
fn input_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join("solenoid-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("input.json");
    std::fs::write(
        &path,
        r#"{"matrix": [[0,0,6],[1,0,-2],[0,1,1]], "xi": {"poly": [2,1,-1], "power": -3}, "k": [1]}"#,
    )
    .unwrap();
    let out = run(&["periodic", "--input", path.to_str().unwrap()]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["periodic_points"][0]["count"], serde_json::json!(169));
    // --k flag wins over the file
    let out = run(&["periodic", "--input", path.to_str().unwrap(), "--k", "2"]);
    let r = json(&out);
    assert_eq!(r["periodic_points"][0]["count"], serde_json::json!(38701));
}

#[test]
fn deterministic_reports() {
    let args = [
        "analyze",
        "--matrix",
        "[[0,0,6],[1,0,-2],[0,1,1]]",
        "--xi-poly",
        "[2,1,-1]",
        "--xi-power",
        "-3",
        "--k",
        "1,2",
        "--assert-monogenic",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    // a reducible matrix with a transform yields an inconclusive ergodicity
    // block and exit code 3
    let out = run(&[
        "analyze",
        "--matrix",
        "[[2,1],[0,3]]",
        "--transform",
        "[[1,0],[0,1]]",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn big_integers_as_strings() {
    let out = run(&["describe", "--matrix", "[[\"123456789012345678901\",0],[0,1]]"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["invariants"]["det"], "123456789012345678901");
}
