//! End-to-end checks of the command-line interface: exit codes, report
//! formats, and the documented error paths.

use std::io::Write;
use std::process::{Command, Output};

fn qxprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qxprod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn empty_suite_list_reports_nothing_and_passes() {
    let out = qxprod(&["verify-symbolic", "--suite", "none"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("ok: 0/0 checks passed"));
}

#[test]
fn exact_suites_pass() {
    let out = qxprod(&[
        "verify-symbolic",
        "--suite",
        "hopf",
        "--suite",
        "coideal",
        "--suite",
        "weyl",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = qxprod(&["verify-symbolic", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn series_run_passes_at_the_reference_radius() {
    let out = qxprod(&["check-series", "--label", "e2eq2-II"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("ok: 38/38 checks passed"));
}

#[test]
fn closed_window_violation_is_a_validation_error() {
    let out = qxprod(&["check-series", "--label", "su-I1", "--h", "1.2"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn unknown_label_is_a_usage_error() {
    let out = qxprod(&["check-series", "--label", "nope"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(stderr(&out).contains("known labels"));
}

#[test]
fn malformed_measure_is_a_usage_error_with_line_number() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "0.6").unwrap();
    writeln!(file, "krange -8 8").unwrap();
    let path = file.path().to_str().unwrap();
    let out = qxprod(&["functional", "--family", "eq2-mu0", "--task", "eval", "--measure", path]);
    assert_eq!(out.status.code(), Some(64));
    assert!(stderr(&out).contains("line 1"), "{}", stderr(&out));
}

#[test]
fn json_report_is_well_formed() {
    let out = qxprod(&["verify-symbolic", "--suite", "weyl", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["passed"], serde_json::Value::Bool(true));
    assert!(v["checks"].as_array().is_some_and(|c| !c.is_empty()));
}

#[test]
fn report_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = qxprod(&[
        "verify-symbolic",
        "--suite",
        "weyl",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout(&out));
}

#[test]
fn proposition_reports_beta_and_b_value() {
    let out = qxprod(&["proposition", "--case", "eq2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("beta = -1"), "{text}");
    assert!(text.contains("0.666666666667"), "{text}");
}

#[test]
fn disc_proposition_reports_both_summands_and_the_exact_gram() {
    let out = qxprod(&["proposition", "--case", "disc"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("disc-I1"), "{text}");
    assert!(text.contains("disc-II2"), "{text}");
    assert!(text.contains("PASS  [disc-I1] tail GNS Gram matrix is exactly the identity"));
}

#[test]
fn functional_invariance_includes_the_disc_balance() {
    let out = qxprod(&[
        "functional",
        "--family",
        "disc-mu0",
        "--task",
        "invariance",
        "--count",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("q^-2 h(f(y)(1 - y))"), "{}", stdout(&out));
}

#[test]
fn eval_prints_the_weighted_sum() {
    let out = qxprod(&["functional", "--family", "eq2-mu0", "--task", "eval"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("1.05"), "{}", stdout(&out));
}

#[test]
fn matrices_export_in_coordinate_list_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = qxprod(&[
        "check-series",
        "--label",
        "uq-I",
        "--export",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(dir.path().join("uq-I-z.coo")).unwrap();
    let first = body.lines().next().expect("nonempty");
    assert_eq!(first.split_whitespace().count(), 4);
}
