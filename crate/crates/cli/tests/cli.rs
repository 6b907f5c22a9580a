//! End-to-end behavior of the `kzp` binary: exit codes, JSON and dumps.

use std::path::Path;
use std::process::{Command, Output};

fn kzp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kzp")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    kzp(args).status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["bogus"][..],
        &["satake", "--p", "4"],
        &["satake", "--p", "2"],
        &["ortho", "--g", "2", "--r", "3"],
        &["ortho", "--r", "0"],
        &["verify-kz", "--kappa", "3"],
        &["curvature", "--g", "0"],
        &["curvature", "--points", "0"],
        &["solutions", "--mode", "fast"],
        &["solutions", "--g", "x"],
        &["curvature", "--g", "2", "--p", "5"],
    ] {
        assert_eq!(code(args), 2, "{args:?}");
    }
}

#[test]
fn help_exits_0() {
    let o = kzp(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verify-kz"));
}

#[test]
fn unwritable_report_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().to_str().unwrap();
    assert_eq!(code(&["ortho", "--g", "2", "--r", "1", "--p", "7", "--json", target]), 1);
}

#[test]
fn small_prime_is_exceptional_not_failed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let o = kzp(&["satake", "--g", "2", "--p", "3", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("exceptional"));
    let v = read_json(&path);
    assert!(v["tally"]["exceptional"].as_u64().unwrap() > 0);
    assert_eq!(v["tally"]["fail"], 0);
    assert_eq!(v["status"], "pass");
}

#[test]
fn verify_kz_report_shape() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json");
    let o = kzp(&["verify-kz", "--g", "2", "--p", "7", "--kappa", "-2", "--r", "1", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = read_json(&path);
    assert_eq!(v["command"], "verify-kz");
    assert_eq!(v["config"]["g"], 2);
    assert_eq!(v["config"]["kappa"], -2);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3, "barN, barM, tildeM at r = 1");
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(!text.contains("elapsed") && !text.contains("seconds"));
}

#[test]
fn kernel_audit_on_p3_at_g4() {
    let o = kzp(&["kernels", "--g", "4", "--p", "13", "--r", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.contains("dim ∩ ker C̃_a on P_3")).expect("P_3 line");
    assert!(line.trim_start().starts_with("pass") && line.contains("dim 6, expected 6"), "{line}");
}

#[test]
fn prime_sweep_runs_each_prime() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("o.json");
    assert_eq!(code(&["ortho", "--g", "2", "--r", "1", "--p", "7,11", "--json", path.to_str().unwrap()]), 0);
    let v = read_json(&path);
    assert_eq!(v["config"]["p"], serde_json::json!([7, 11]));
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"].as_str().unwrap().contains("p=7")));
    assert!(checks.iter().any(|c| c["name"].as_str().unwrap().contains("p=11")));
}

#[test]
fn seed_changes_points_not_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str, name: &str| {
        let path = dir.path().join(name);
        assert_eq!(code(&["curvature", "--g", "2", "--p", "7", "--seed", seed, "--points", "2", "--json", path.to_str().unwrap()]), 0);
        std::fs::read(path).unwrap()
    };
    let a = run("3", "a.json");
    assert_eq!(a, run("3", "b.json"));
    assert_ne!(a, run("4", "c.json"));
}

#[test]
fn dump_poly_writes_solutions_and_t() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("sol.txt");
    assert_eq!(code(&["solutions", "--g", "2", "--p", "7", "--r", "1", "--dump-poly", sol.to_str().unwrap()]), 0);
    let text = std::fs::read_to_string(&sol).unwrap();
    assert!(text.contains("# family=N g=2 p=7 r=1"), "{}", &text[..text.len().min(400)]);
    assert!(text.lines().any(|l| l.starts_with("[0] ")));

    let t = dir.path().join("t.txt");
    assert_eq!(code(&["satake", "--g", "2", "--p", "7", "--r", "2", "--dump-poly", t.to_str().unwrap()]), 0);
    let text = std::fs::read_to_string(&t).unwrap();
    assert!(text.starts_with("# T(z) over Q, g=2 r=2"));
    // a 10×10 matrix between sorted 2-subsets of 5 points
    let entries = text.lines().filter(|l| l.starts_with('[')).count();
    assert!(entries > 0 && entries <= 100);
}
