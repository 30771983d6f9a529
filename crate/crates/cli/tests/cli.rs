//! End-to-end runs of the binary over the bundled fixtures.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fusion-classes"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn run_on(args: &[&str], file: &str) -> (i32, String) {
    let path = fixture(file);
    let mut all = args.to_vec();
    all.push(path.to_str().unwrap());
    let out = run(&all);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn validate_exit_codes() {
    assert_eq!(run_on(&["validate"], "z2.json").0, 0);
    assert_eq!(run_on(&["validate"], "s3rep-sparse.json").0, 0);
    let (code, text) = run_on(&["validate"], "invalid/fib-corrupted.json");
    assert_eq!(code, 1);
    assert!(text.contains("FAIL fusion: tau condition  witness=[1, 1]"), "{text}");
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(run_on(&["validate"], "missing.json").0, 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["validate", bad.to_str().unwrap()]).status.code(), Some(2));
    let z2 = fixture("z2.json");
    assert_eq!(
        run(&["--tol-eq=-1", "validate", z2.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["--tol-int", "0", "validate", z2.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn tolerance_below_rounding_is_an_internal_error() {
    let (code, text) = run_on(&["--tol-eq", "1e-18", "burnside"], "fib.json");
    assert_eq!(code, 3, "{text}");
}

#[test]
fn characters_report_codegrees() {
    let (code, text) = run_on(&["characters"], "fib.json");
    assert_eq!(code, 0);
    assert!(text.contains("codegrees: [3.61803398875, 1.38196601125]"), "{text}");
    let (_, text) = run_on(&["characters"], "z2.json");
    assert!(text.contains("codegrees: [2.00000000000, 2.00000000000]"), "{text}");
    let (_, text) = run_on(&["characters"], "s3rep.json");
    assert!(
        text.contains("codegrees: [6.00000000000, 2.00000000000, 3.00000000000]"),
        "{text}"
    );
}

#[test]
fn burnside_reports() {
    let (code, text) = run_on(&["burnside"], "s3rep.json");
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("C1*C1: [3.00000000000, 0, 3.00000000000]"), "{text}");
    assert!(text.contains("C1*C1:C0: 18.0000000000 integer 18"), "{text}");

    let (code, text) = run_on(&["--lattice", "1,(1+sqrt(5))/2", "burnside"], "fib.json");
    assert_eq!(code, 0, "{text}");
    assert!(!text.contains("unresolved"), "{text}");

    let (code, text) = run_on(&["burnside"], "ising.json");
    assert_eq!(code, 0, "{text}");
    assert!(!text.contains("unresolved"), "{text}");
}

#[test]
fn quotient_by_sign() {
    let (code, text) = run_on(&["quotient", "--subgroup", "0,1"], "s3rep.json");
    assert_eq!(code, 0, "{text}");
    // {1, V} is not closed: V V reaches sgn
    let (code, text) = run_on(&["quotient", "--subgroup", "0,2"], "s3rep.json");
    assert_eq!(code, 1);
    assert!(text.contains("reaches 1"), "{text}");
    let (code, _) = run_on(&["quotient"], "z4.json");
    assert_eq!(code, 0);
}

#[test]
fn selfdual_and_center() {
    assert_eq!(run_on(&["selfdual"], "ising-modular.json").0, 0);
    let ising = fixture("ising.json");
    let md = fixture("ising-modular.json");
    let out = run(&["selfdual", ising.to_str().unwrap(), md.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(run_on(&["selfdual"], "fib-modular.json").0, 0);
    assert_eq!(run_on(&["selfdual"], "invalid/z2-degenerate-modular.json").0, 1);
    let (code, text) = run_on(&["center"], "group-s3-center.json");
    assert_eq!(code, 0, "{text}");
}

#[test]
fn corpus_over_fixtures() {
    let (code, text) = run_on(&["corpus", "--workers", "2"], "");
    assert_eq!(code, 0, "{text}");
    let (code, _) = run_on(&["corpus"], "invalid");
    assert_eq!(code, 1);
}

#[test]
fn double_writes_a_checkable_center_pair() {
    let dir = tempfile::tempdir().unwrap();
    let group = fixture("group-s3.json");
    let out = run(&["double", group.to_str().unwrap(), "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let center = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.to_string_lossy().ends_with("-center.json"))
        .expect("center pair written");
    let out = run(&["center", center.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let modular = center.to_string_lossy().replace("-center.json", "-double.json");
    assert_eq!(run(&["selfdual", &modular]).status.code(), Some(0));
}

#[test]
fn structured_output() {
    let (code, text) = run_on(&["--format", "structured", "characters"], "s3rep.json");
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["summary"]["passed"], true);
    assert_eq!(doc["tolerances"]["eq"], "1e-9");
    assert!(doc["sections"]["codegrees"].is_object());

    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let (code, stdout) = run_on(
        &[
            "--format",
            "structured",
            "--out",
            out_path.to_str().unwrap(),
            "validate",
        ],
        "fib.json",
    );
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(doc["command"], "validate");
}

#[test]
fn seeds_do_not_change_reports() {
    let a = run_on(
        &["--seed", "1", "--format", "structured", "burnside"],
        "group-s3-double-ring.json",
    );
    let b = run_on(
        &["--seed", "987654321", "--format", "structured", "burnside"],
        "group-s3-double-ring.json",
    );
    assert_eq!(a, b);
}
