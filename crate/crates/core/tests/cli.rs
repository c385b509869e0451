use std::process::Command;

use lattice_lab::cli::run_command;
use lattice_lab::NormedLattice;
use serde_json::Value;

fn run(args: &[&str]) -> lattice_lab::cli::CommandOutput {
    run_command(std::iter::once("lattice-lab").chain(args.iter().copied()))
}

fn report(out: &lattice_lab::cli::CommandOutput) -> Value {
    serde_json::from_str(&out.stdout).expect("stdout is JSON")
}

fn write_doc(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

#[test]
fn gamma_command() {
    let out = run(&["constants", "gamma", "--p", "2"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = report(&out);
    let g = v["report"]["gamma"].as_f64().unwrap();
    assert!((g - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["command"], "constants gamma");
    for key in ["command", "config", "version", "wall_time_ms", "report"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["config"]["seed"], 0);
    assert_eq!(v["config"]["budget"], 10000);
}

#[test]
fn norm_eval_reads_a_lattice_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(&dir, "x.json", r#"{"dim": 3, "norm": {"kind": "example54_dual", "p": 2}}"#);
    let out = run(&["norm", "eval", "--lattice", &path, "--x", "1,1,1"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = report(&out)["report"]["value"].as_f64().unwrap();
    assert!((v - 5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn lorentz_with_r_at_least_p_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(
        &dir,
        "bad.json",
        r#"{"dim": 2, "norm": {"kind": "lorentz_pinfty", "p": 2, "r": 3, "weights": [1, 1]}}"#,
    );
    let out = run(&["norm", "eval", "--lattice", &path, "--x", "1,0"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.is_empty());
    assert!(out.stderr.contains("r"), "{}", out.stderr);
    assert!(out.stderr.contains("< p") || out.stderr.contains("less than p"), "{}", out.stderr);
}

#[test]
fn usage_errors_exit_one() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("Usage") || out.stderr.contains("usage"), "{}", out.stderr);
    assert_eq!(run(&["constants", "gamma"]).code, 1);
    assert_eq!(run(&["constants", "gamma", "--p", "abc"]).code, 1);
    let missing = run(&["norm", "eval", "--lattice", "/nonexistent/x.json", "--x", "1"]);
    assert_eq!(missing.code, 1);
    assert!(missing.stderr.starts_with("error:"));
}

#[test]
fn help_goes_to_stdout() {
    let out = run(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("reproduce"));
}

#[test]
fn tolerances_only_loosen() {
    let tight = run(&["--tolerance", "sandwich=1e-12", "lorentz", "sandwich", "--values", "3,1", "--p", "2", "--r", "1"]);
    assert_eq!(tight.code, 1);
    assert!(tight.stderr.contains("loosened"), "{}", tight.stderr);
    let unknown = run(&["--tolerance", "nope=1", "constants", "gamma", "--p", "2"]);
    assert_eq!(unknown.code, 1);
    let loose = run(&["--tolerance", "sandwich=1e-6", "lorentz", "sandwich", "--values", "3,1", "--p", "2", "--r", "1"]);
    assert_eq!(loose.code, 0, "{}", loose.stderr);
    assert_eq!(report(&loose)["config"]["tolerance_overrides"]["sandwich"].as_f64(), Some(1e-6));
}

#[test]
fn failed_checks_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let x = write_doc(
        &dir,
        "x.json",
        r#"{"dim": 3, "norm": {"kind": "predual_of", "norm": {"kind": "example54_dual", "p": 2}}}"#,
    );
    let lattice = NormedLattice::predual_of(NormedLattice::example54_dual(2.0).unwrap()).unwrap();
    let a = 1.0 / lattice.norm(&[1.0, 1.0, 1.0]);
    let a = format!("{a},{a},{a}");
    let out = run(&["--budget", "500", "embed", "check", "--lattice", &x, "--p", "2", "--C", "1", "--a", &a]);
    assert_eq!(out.code, 2, "{}", out.stderr);
    assert_eq!(report(&out)["report"]["outcome"], "infeasible");
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gamma.json");
    let out = run(&["constants", "gamma", "--p", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["report"]["gamma"].as_f64().is_some());
}

#[test]
fn deterministic_runs_are_byte_identical() {
    let args = [
        "--deterministic",
        "--seed",
        "5",
        "--budget",
        "800",
        "constants",
        "estimate",
        "--matrix",
        "[[1,0.5],[0,2]]",
        "--domain-p",
        "1.5",
        "--codomain-p",
        "3",
        "--kind",
        "convex",
        "--p",
        "1.5",
        "--p2",
        "1.5",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(report(&a)["wall_time_ms"], 0);
}

#[test]
fn binary_matches_library_entry_point() {
    let out = Command::new(env!("CARGO_BIN_EXE_lattice-lab"))
        .args(["--deterministic", "constants", "gamma", "--p", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let lib = run(&["--deterministic", "constants", "gamma", "--p", "2"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), lib.stdout);

    let bad = Command::new(env!("CARGO_BIN_EXE_lattice-lab")).arg("nope").output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
