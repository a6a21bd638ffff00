//! End-to-end tests of the `monorel` binary: exit codes, report formats,
//! determinism, and the operation round-trips.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn monorel() -> Command {
    Command::new(env!("CARGO_BIN_EXE_monorel"))
}

fn write_file(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    monorel().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn info_reports_identity_facts() {
    let dir = tempfile::tempdir().unwrap();
    let id = write_file(dir.path(), "id.json", r#"{"n":2,"matrix":[[1,0],[0,1]]}"#);
    let out = run(&["info", id.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("dom: dim 2"), "{text}");
    assert!(text.contains("is_maximal_monotone: true"), "{text}");
    assert!(text.contains("is_skew: false"), "{text}");
}

#[test]
fn info_on_normal_cone_detects_skew_and_maximal() {
    let dir = tempfile::tempdir().unwrap();
    let cone = write_file(dir.path(), "cone.json", r#"{"n":2,"normal_cone":[[1,0]]}"#);
    let out = run(&["info", cone.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("dom: dim 1"), "{text}");
    assert!(text.contains("at_zero: dim 1"), "{text}");
    assert!(text.contains("is_maximal_monotone: true"), "{text}");
    assert!(text.contains("is_skew: true"), "{text}");
}

#[test]
fn info_on_vertical_graph() {
    let dir = tempfile::tempdir().unwrap();
    let v = write_file(dir.path(), "v.json", r#"{"n":1,"graph_basis":[[0,1]]}"#);
    let out = run(&["info", v.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("dom: dim 0"), "{text}");
    assert!(text.contains("is_monotone: true"), "{text}");
    assert!(text.contains("is_maximal_monotone: true"), "{text}");
}

#[test]
fn malformed_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_file(dir.path(), "bad.json", r#"{"n":2}"#);
    assert_eq!(run(&["info", bad.to_str().unwrap()]).status.code(), Some(2));
    let bad_dims = write_file(dir.path(), "dims.json", r#"{"n":2,"matrix":[[1,0]]}"#);
    assert_eq!(
        run(&["info", bad_dims.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["info", dir.path().join("missing.json").to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn op_adjoint_of_rotation_is_minus_rotation() {
    let dir = tempfile::tempdir().unwrap();
    let j = write_file(dir.path(), "j.json", r#"{"n":2,"matrix":[[0,-1],[1,0]]}"#);
    let out_path = dir.path().join("adj.json");
    let out = run(&[
        "op",
        "adjoint",
        j.to_str().unwrap(),
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("form: matrix"));
    let written: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let m = written["matrix"].as_array().unwrap();
    assert_eq!(m[0][1].as_f64().unwrap(), 1.0);
    assert_eq!(m[1][0].as_f64().unwrap(), -1.0);
}

#[test]
fn op_adjoint_twice_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    // A multivalued relation, so the output takes the graph_basis form.
    let cone = write_file(dir.path(), "cone.json", r#"{"n":2,"normal_cone":[[3,4]]}"#);
    let once = dir.path().join("a1.json");
    let twice = dir.path().join("a2.json");
    assert_eq!(
        run(&["op", "adjoint", cone.to_str().unwrap(), "-o", once.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        run(&["op", "adjoint", once.to_str().unwrap(), "-o", twice.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    // Double adjoint restores the original: identical info blocks on
    // re-parse (margins carry a sign-of-zero ambiguity, so they are
    // stripped; bases, dims, and verdicts must match exactly).
    let strip = |text: String| -> String {
        text.lines()
            .skip(1)
            .map(|l| l.split(" (margin").next().unwrap().to_string())
            .collect::<Vec<_>>()
            .join("\n")
    };
    let info_orig = strip(stdout(&run(&["info", cone.to_str().unwrap()])));
    let info_back = strip(stdout(&run(&["info", twice.to_str().unwrap()])));
    assert_eq!(info_orig, info_back);
}

#[test]
fn op_add_identities_gives_twice_identity() {
    let dir = tempfile::tempdir().unwrap();
    let id = write_file(dir.path(), "id.json", r#"{"n":1,"matrix":[[1]]}"#);
    let out = run(&["op", "add", id.to_str().unwrap(), id.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("form: matrix"), "{text}");
    assert!(text.contains('2'), "{text}");
}

#[test]
fn op_extend_zero_on_line_yields_normal_cone() {
    let dir = tempfile::tempdir().unwrap();
    let zero_on_d = write_file(
        dir.path(),
        "zd.json",
        r#"{"n":2,"graph_basis":[[1,0,0,0]]}"#,
    );
    let out_path = dir.path().join("ext.json");
    let out = run(&[
        "op",
        "extend",
        zero_on_d.to_str().unwrap(),
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("is_maximal_monotone: true"), "{text}");
    assert!(text.contains("is_skew: true"), "{text}");
}

#[test]
fn op_extend_on_non_monotone_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let neg = write_file(dir.path(), "neg.json", r#"{"n":1,"matrix":[[-1]]}"#);
    assert_eq!(
        run(&["op", "extend", neg.to_str().unwrap()]).status.code(),
        Some(3)
    );
}

#[test]
fn op_scale_requires_lambda() {
    let dir = tempfile::tempdir().unwrap();
    let id = write_file(dir.path(), "id.json", r#"{"n":1,"matrix":[[1]]}"#);
    assert_eq!(run(&["op", "scale", id.to_str().unwrap()]).status.code(), Some(2));
    let out = run(&["op", "scale", id.to_str().unwrap(), "--lambda", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("form: matrix"));
}

#[test]
fn fitz_golden_values() {
    let dir = tempfile::tempdir().unwrap();
    let id = write_file(dir.path(), "id.json", r#"{"n":1,"matrix":[[1]]}"#);
    let out = run(&["fitz", id.to_str().unwrap(), "--x", "1", "--xstar", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("value: 1"), "{}", stdout(&out));

    let j = write_file(dir.path(), "j.json", r#"{"n":2,"matrix":[[0,-1],[1,0]]}"#);
    let out = run(&["fitz", j.to_str().unwrap(), "--x", "1,0", "--xstar", "1,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("value: +inf"), "{}", stdout(&out));
}

#[test]
fn fitz_conj_and_star_t() {
    let dir = tempfile::tempdir().unwrap();
    let id = write_file(dir.path(), "id.json", r#"{"n":1,"matrix":[[1]]}"#);
    // F*(x*, x) at (1,1): the graph point gives the pairing.
    let out = run(&["fitz", id.to_str().unwrap(), "--x", "1", "--xstar", "1", "--conj"]);
    assert!(stdout(&out).contains("value: 1"));
    // F^{*T}(0,1) is +inf while F(0,1) = 0.25.
    let out = run(&["fitz", id.to_str().unwrap(), "--x", "0", "--xstar", "1", "--star-t"]);
    assert!(stdout(&out).contains("value: +inf"));
    let out = run(&["fitz", id.to_str().unwrap(), "--x", "0", "--xstar", "1"]);
    assert!(stdout(&out).contains("value: 0.25"));
}

#[test]
fn fitz_inf_conv_reports_argmin() {
    let dir = tempfile::tempdir().unwrap();
    let id = write_file(dir.path(), "id.json", r#"{"n":1,"matrix":[[1]]}"#);
    let out = run(&[
        "fitz",
        id.to_str().unwrap(),
        "--x",
        "1",
        "--xstar",
        "2",
        "--inf-conv",
        id.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("value: 2"), "{text}");
    assert!(text.contains("argmin: [1") || text.contains("argmin: [0.99999"), "{text}");
}

#[test]
fn fitz_on_non_monotone_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let neg = write_file(dir.path(), "neg.json", r#"{"n":1,"matrix":[[-1]]}"#);
    assert_eq!(
        run(&["fitz", neg.to_str().unwrap(), "--x", "1", "--xstar", "1"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn fitz_with_wrong_point_length_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let id = write_file(dir.path(), "id.json", r#"{"n":2,"matrix":[[1,0],[0,1]]}"#);
    assert_eq!(
        run(&["fitz", id.to_str().unwrap(), "--x", "1", "--xstar", "1,0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_single_suite_passes() {
    let out = run(&[
        "verify",
        "--suite",
        "brezis-browder",
        "--n-range",
        "1..3",
        "--trials",
        "10",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 failures"), "{}", stdout(&out));
}

#[test]
fn verify_all_suites_pass() {
    let out = run(&[
        "verify", "--suite", "all", "--n-range", "1..4", "--trials", "5", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.matches("-- pass").count(), 14, "{text}");
}

#[test]
fn verify_unknown_suite_exits_2_and_lists_names() {
    let out = run(&["verify", "--suite", "nosuch", "--trials", "1", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("brezis-browder"), "{err}");
}

#[test]
fn verify_json_reports_are_byte_identical() {
    let args = [
        "verify",
        "--suite",
        "halo",
        "--n-range",
        "1..3",
        "--trials",
        "5",
        "--seed",
        "11",
        "--format",
        "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let parsed: serde_json::Value = serde_json::from_str(stdout(&a).trim()).unwrap();
    assert_eq!(parsed["schema"], 1);
    assert_eq!(parsed["results"][1]["kind"], "suite");
}

#[test]
fn verify_seed_falls_back_to_environment() {
    let out = monorel()
        .args(["verify", "--suite", "halo", "--trials", "3", "--format", "json"])
        .env("MONOREL_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(parsed["results"][0]["name"], "seed");
    assert_eq!(parsed["results"][0]["value"].as_f64().unwrap(), 99.0);
}

#[test]
fn json_info_is_deterministic_and_versioned() {
    let dir = tempfile::tempdir().unwrap();
    let cone = write_file(dir.path(), "cone.json", r#"{"n":3,"normal_cone":[[1,2,2]]}"#);
    let a = run(&["info", cone.to_str().unwrap(), "--format", "json"]);
    let b = run(&["info", cone.to_str().unwrap(), "--format", "json"]);
    assert_eq!(stdout(&a), stdout(&b));
    let parsed: serde_json::Value = serde_json::from_str(stdout(&a).trim()).unwrap();
    assert_eq!(parsed["schema"], 1);
    assert_eq!(parsed["tolerance"]["atol"].as_f64().unwrap(), 1e-9);
}

#[test]
fn tolerance_flags_are_honored() {
    let dir = tempfile::tempdir().unwrap();
    let id = write_file(dir.path(), "id.json", r#"{"n":1,"matrix":[[1]]}"#);
    let out = run(&[
        "info",
        id.to_str().unwrap(),
        "--atol",
        "1e-6",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(parsed["tolerance"]["atol"].as_f64().unwrap(), 1e-6);
    // Invalid tolerances are usage errors.
    assert_eq!(
        run(&["info", id.to_str().unwrap(), "--atol", "-1"]).status.code(),
        Some(2)
    );
}
