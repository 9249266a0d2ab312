//! End-to-end tests of the command-line harness: golden outputs for the
//! computation commands, the exit-code contract, and byte-identical
//! reports for identical configurations.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_necklace-bv"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn bracket_golden_outputs() {
    let q = fixture("jordan.quiver");
    let q = q.to_str().unwrap();
    let out = run(&["--quiver", q, "bracket", "a a", "~a ~a"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), "4 * a ~a");

    let out = run(&["--quiver", q, "cobracket", "a ~a"]);
    assert_eq!(stdout_of(&out).trim(), "0");

    let out = run(&["--quiver", q, "bracket", "e(v)", "a ~a"]);
    assert_eq!(stdout_of(&out).trim(), "0");
}

#[test]
fn phi_golden_outputs() {
    let q = fixture("jordan.quiver");
    let q = q.to_str().unwrap();
    let out = run(&["--quiver", q, "phi", "e(v)"]);
    assert_eq!(stdout_of(&out).trim(), "0");

    let out = run(&[
        "--quiver", q, "--p", "1", "--hbar", "1", "--dims", "v=3|0", "phi", "e(v)",
    ]);
    assert_eq!(stdout_of(&out).trim(), "3");

    let out = run(&[
        "--quiver", q, "--p", "1", "--hbar", "1", "--dims", "v=1|0", "phi", "a ~a",
    ]);
    assert_eq!(stdout_of(&out).trim(), "1 * y[a,0] * y[~a,0]");
}

#[test]
fn verify_all_passes_on_default_jordan() {
    let q = fixture("jordan.quiver");
    let out = run(&["--quiver", q.to_str().unwrap(), "--trials", "40", "verify", "all"]);
    assert!(out.status.success(), "verify all must exit 0");
    let text = stdout_of(&out);
    assert!(text.contains("theorem::main_theorem"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_axioms_a2_p1_passes() {
    let q = fixture("a2.quiver");
    let out = run(&[
        "--quiver", q.to_str().unwrap(), "--p", "1", "--hbar", "1", "--trials", "40",
        "verify", "axioms",
    ]);
    assert!(out.status.success());
}

#[test]
fn exit_code_two_on_config_errors() {
    let q = fixture("jordan.quiver");
    let q = q.to_str().unwrap();
    // non-square hbar at p = 1
    let out = run(&["--quiver", q, "--p", "1", "--hbar", "2", "verify", "theorem"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("square"));
    // unbalanced dims at p = 0
    let out = run(&["--quiver", q, "--dims", "v=2|1", "verify", "axioms"]);
    assert_eq!(out.status.code(), Some(2));
    // parse error in a word
    let out = run(&["--quiver", q, "bracket", "a c", "a"]);
    assert_eq!(out.status.code(), Some(2));
    // missing quiver file
    let out = run(&["--quiver", "/definitely/not/here", "verify"]);
    assert_eq!(out.status.code(), Some(2));
    // length cap
    let out = run(&["--quiver", q, "--max-len", "2", "bracket", "a a a", "a"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_for_equal_configs() {
    let q = fixture("jordan.quiver");
    let q = q.to_str().unwrap();
    let dir = std::env::temp_dir();
    let r1 = dir.join("nbv_report_1.json");
    let r2 = dir.join("nbv_report_2.json");
    for path in [&r1, &r2] {
        let out = run(&[
            "--quiver", q, "--trials", "25", "--seed", "7",
            "--json", path.to_str().unwrap(), "verify", "all",
        ]);
        assert!(out.status.success());
    }
    let b1 = std::fs::read(&r1).unwrap();
    let b2 = std::fs::read(&r2).unwrap();
    assert_eq!(b1, b2, "identical config + seed must give identical bytes");
    // different seed gives a valid report too (and exit 0)
    let out = run(&[
        "--quiver", q, "--trials", "25", "--seed", "8",
        "--json", r2.to_str().unwrap(), "verify", "all",
    ]);
    assert!(out.status.success());
}

#[test]
fn report_schema_and_quiver_echo_round_trip() {
    let q = fixture("two_loop.quiver");
    let q = q.to_str().unwrap();
    let dir = std::env::temp_dir();
    let path = dir.join("nbv_report_schema.json");
    let out = run(&[
        "--quiver", q, "--trials", "10",
        "--json", path.to_str().unwrap(), "verify", "axioms",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["pass"], serde_json::Value::Bool(true));
    assert_eq!(v["config"]["seed"], 0);
    assert_eq!(v["config"]["hbar"], "1/2");
    let suites = v["suites"].as_array().unwrap();
    assert!(!suites.is_empty());
    for s in suites {
        assert!(s["identity"].is_string());
        assert!(s["trials"].as_u64().unwrap() > 0);
        assert_eq!(s["failures"].as_u64(), Some(0));
        assert!(s["seed"].is_u64());
    }
    // the quiver text embedded in the config is bit-exact round-trippable
    let text = v["config"]["quiver"].as_str().unwrap();
    let original = std::fs::read_to_string(q).unwrap();
    assert_eq!(text, original);
}

#[test]
fn mixed_dims_three_cycle() {
    // rectangular blocks: a 3-cycle with different dims per vertex
    let dir = std::env::temp_dir();
    let q = dir.join("nbv_cycle3.quiver");
    std::fs::write(&q, "vertices: u v w\narrow a u v\narrow b v w\narrow c w u\n").unwrap();
    let q = q.to_str().unwrap();
    let out = run(&[
        "--quiver", q, "--dims", "u=1|1,v=2|2,w=1|1", "--trials", "15", "verify", "all",
    ]);
    assert!(out.status.success());
    assert!(!stdout_of(&out).contains("FAIL"));
    let out = run(&[
        "--quiver", q, "--p", "1", "--hbar", "4", "--dims", "u=1|0,v=2|1,w=0|2",
        "--trials", "15", "verify", "all",
    ]);
    assert!(out.status.success());
    assert!(!stdout_of(&out).contains("FAIL"));
}

#[test]
fn degenerate_quivers() {
    let dir = std::env::temp_dir();
    // arrowless quiver: every suite runs (some vacuously) and passes
    let arrowless = dir.join("nbv_arrowless.quiver");
    std::fs::write(&arrowless, "vertices: v\n").unwrap();
    let out = run(&[
        "--quiver", arrowless.to_str().unwrap(), "--trials", "5", "verify", "all",
    ]);
    assert!(out.status.success());
    // vertexless quiver: configuration error
    let empty = dir.join("nbv_empty.quiver");
    std::fs::write(&empty, "vertices:\n").unwrap();
    let out = run(&["--quiver", empty.to_str().unwrap(), "verify", "all"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bvdelta_golden_output() {
    let q = fixture("jordan.quiver");
    let out = run(&[
        "--quiver",
        q.to_str().unwrap(),
        "bvdelta",
        "1 * (a a) (~a ~a)",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), "-4 * (a ~a)");
}
