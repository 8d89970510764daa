//! Black-box tests for the qtc binary: golden outputs, exit codes, and
//! byte-for-byte determinism of the JSON mode.

use std::process::{Command, Output};

fn qtc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtc")).args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn eval_golden_outputs() {
    for (expr, expected) in [
        ("u*v", "U(1,1)"),
        ("v*u", "e(-t)*U(1,1)"),
        ("e(1/2)*u", "-U(1,0)"),
        ("u*v*u'*v'", "e(t)"),
        ("(u + v)^2", "U(0,2) + (1 + e(-t))*U(1,1) + U(2,0)"),
    ] {
        let out = qtc(&["eval", "--theta", "t", expr]);
        assert_eq!(out.status.code(), Some(0), "eval {expr} failed: {out:?}");
        assert_eq!(stdout_of(&out).trim(), expected, "golden output changed for {expr}");
    }
}

#[test]
fn solve_theta_golden_output() {
    let out = qtc(&["solve-theta", "--theta", "t", "--M", "2,0,0,1", "--K", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("theta'[1,2] = t/2"), "unexpected solve-theta output: {text}");
}

#[test]
fn classify_reports_four_coverings_up_to_index_two() {
    let out = qtc(&["classify", "--theta", "t", "--max-index", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("total: 4"), "expected 4 rows, got: {text}");
}

#[test]
fn check_covering_passes_and_sets_exit_code() {
    let out = qtc(&["check-covering", "--theta", "t", "--M", "2,0,0,1"]);
    assert_eq!(out.status.code(), Some(0), "valid covering must exit 0");
    assert!(stdout_of(&out).contains("all_passed: true"));

    // A theta' that violates the covering relation is a domain error.
    let out = qtc(&["check-covering", "--theta", "t", "--M", "2,0,0,1", "--theta-prime", "t/3"]);
    assert_eq!(out.status.code(), Some(1), "violated relation must exit 1");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["eval", "--theta", "t", "u + "],
        vec!["eval", "--theta", "t", "u0"],
        vec!["eval", "--theta", "not-a-poly", "u"],
        vec!["solve-theta", "--theta", "t", "--M", "1,2,3", "--K", "0"],
        vec!["no-such-command"],
    ] {
        let out = qtc(&args);
        assert_eq!(out.status.code(), Some(2), "expected usage error for {args:?}: {out:?}");
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(qtc(&["--help"]).status.code(), Some(0));
    assert_eq!(qtc(&["--version"]).status.code(), Some(0));
    assert_eq!(qtc(&["eval", "--help"]).status.code(), Some(0));
}

#[test]
fn freeness_exits_zero_for_both_answers() {
    let partial = qtc(&["freeness", "--group", "2,2", "--support", "0,0;1,0"]);
    assert_eq!(partial.status.code(), Some(0));
    assert!(stdout_of(&partial).contains("free: false"));

    let full = qtc(&["freeness", "--group", "2,2", "--support", "0,0;1,0;0,1;1,1"]);
    assert_eq!(full.status.code(), Some(0));
    assert!(stdout_of(&full).contains("free: true"));
}

#[test]
fn json_output_is_deterministic() {
    let args = ["classify", "--theta", "t", "--max-index", "3", "--json"];
    let first = qtc(&args);
    let second = qtc(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "JSON output must be byte-identical across runs");

    let parsed: serde_json::Value =
        serde_json::from_slice(&first.stdout).expect("JSON mode emits valid JSON");
    assert!(parsed.get("rows").is_some(), "classify JSON carries a rows field");
}

#[test]
fn pretty_json_parses() {
    let out = qtc(&["poset", "--max-index", "4", "--json", "--pretty"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(parsed["nodes"].as_array().map(|a| a.len()), Some(15));
}

#[test]
fn smooth_build_runs_from_phi_file() {
    let dir = std::env::temp_dir().join(format!("qtc-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let phi = dir.join("phi.json");
    std::fs::write(
        &phi,
        r#"{"group": [2], "images": [{"w": [["1/2", "0"], ["0", "0"]], "M": [[1, 0], [0, 1]]}]}"#,
    )
    .expect("write phi");

    let out = qtc(&["smooth-build", "--theta", "t", "--phi", phi.to_str().expect("utf-8 path")]);
    assert_eq!(out.status.code(), Some(0), "smooth-build failed: {out:?}");
    let text = stdout_of(&out);
    assert!(text.contains("all_passed: true"), "unexpected smooth-build report: {text}");

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn thread_override_is_validated() {
    let ok = Command::new(env!("CARGO_BIN_EXE_qtc"))
        .env("QTC_THREADS", "2")
        .args(["classify", "--theta", "t", "--max-index", "2"])
        .output()
        .expect("binary runs");
    assert_eq!(ok.status.code(), Some(0));

    let bad = Command::new(env!("CARGO_BIN_EXE_qtc"))
        .env("QTC_THREADS", "zero")
        .args(["classify", "--theta", "t", "--max-index", "2"])
        .output()
        .expect("binary runs");
    assert_eq!(bad.status.code(), Some(2), "unparseable QTC_THREADS must be a usage error");
}
