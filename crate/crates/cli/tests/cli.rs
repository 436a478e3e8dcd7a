use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fkineq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fkineq"))
        .args(args)
        .env_remove("FKINEQ_SEED")
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn check_hadamard_default_trials() {
    let out = fkineq(&["check", "--ineq", "hadamard", "--n", "4", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 100);
    assert!(recs.iter().all(|r| r["holds"] == true && r["ineq_id"] == "hadamard"));
}

#[test]
fn fischer_on_block_diagonal_file_detects_equality() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(
        dir.path(),
        "a.txt",
        "4 4\n2,0 1,0 0,0 0,0\n1,0 3,0 0,0 0,0\n0,0 0,0 1,0 0.5,0.5\n0,0 0,0 0.5,-0.5 2,0\n",
    );
    let out = fkineq(&["check", "--ineq", "fischer", "--n", "4", "--partition", "2,2", "--matrix", &m]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["equality_detected"], true);
    assert_eq!(recs[0]["equality_expected"], true);
}

#[test]
fn non_hermitian_file_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "a.txt", "2 2\n1,0 1,0\n0,0 1,0\n");
    let out = fkineq(&["check", "--ineq", "hadamard", "--n", "2", "--matrix", &m]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn counterexample_search_reports_negative_gap() {
    let out = fkineq(&[
        "falsify", "--ineq", "matic_var_counterexample", "--n", "2", "--partition", "diag", "--budget", "200",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    assert!(recs[0]["gap"].as_f64().unwrap() < 0.0);
    assert_eq!(recs[0]["holds"], false);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(fkineq(&["check", "--ineq", "nope"]).status.code(), Some(2));
    assert_eq!(fkineq(&["suite", "--dims", ""]).status.code(), Some(2));
    assert_eq!(fkineq(&["check", "--ineq", "fischer", "--n", "4", "--partition", "3,3"]).status.code(), Some(2));
    assert_eq!(fkineq(&["check", "--ineq", "op_monotone", "--fn", "square"]).status.code(), Some(2));
    assert_eq!(fkineq(&["check", "--ineq", "hadamard", "--tol-psd", "-1"]).status.code(), Some(2));
}

#[test]
fn dumped_witness_reproduces_report_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("dump");
    let out = fkineq(&[
        "check", "--ineq", "op_monotone", "--n", "3", "--fn", "power:0.5", "--trials", "1", "--seed", "11",
        "--dump", dump.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let first = &records(&out)[0];
    let file = fs::read_dir(&dump)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.to_str().unwrap().ends_with("-A.txt"))
        .expect("witness for A");
    let again = fkineq(&[
        "check", "--ineq", "op_monotone", "--n", "3", "--fn", "power:0.5", "--matrix", file.to_str().unwrap(),
    ]);
    assert_eq!(again.status.code(), Some(0));
    let second = &records(&again)[0];
    for key in ["lhs", "rhs", "gap", "deviation"] {
        assert_eq!(first[key].as_f64().unwrap().to_bits(), second[key].as_f64().unwrap().to_bits(), "{key}");
    }
}

#[test]
fn seed_from_environment_is_deterministic() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_fkineq"))
            .args(["suite", "--ineq", "inverse,arveson_left", "--dims", "3", "--trials", "4", "--jobs", "2"])
            .env("FKINEQ_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("9"), run("9"));
    assert_ne!(run("9"), run("10"));
}

#[test]
fn csv_output_has_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = fkineq(&[
        "check", "--ineq", "det_monotone", "--trials", "5", "--format", "csv", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("ineq_id,trial,seed,kind,lhs,rhs,gap"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn explicit_mixture_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let mix = write(dir.path(), "mix.txt", "w 0.5\n2 2\n1,0 0,0\n0,0 1,0\nw 0.5\n2 2\n0,0 1,0\n1,0 0,0\n");
    let arg = format!("mix:{mix}");
    let out = fkineq(&["check", "--ineq", "up_matic", "--n", "2", "--map", &arg, "--trials", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(records(&out).len(), 10);
}

#[test]
fn demo_prints_closed_form_sweep() {
    let out = fkineq(&["demo", "--trials", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("closed form"));
    assert!(records(&out).iter().all(|r| r["ineq_id"] == "gaussian_entropy"));
}
