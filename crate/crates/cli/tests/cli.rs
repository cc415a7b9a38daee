use std::path::Path;
use std::process::{Command, Output};

use fracfvt_core::report::{Report, Status};

fn fracfvt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracfvt")).args(args).output().expect("run fracfvt")
}

fn read_report(path: &Path) -> Report {
    Report::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn fvt_constant_passes_for_each_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fvt.json");
    let csv = dir.path().join("fvt.csv");
    let o = fracfvt(&["fvt", "--fn", "const1", "--alpha", "0,0.5,2", "--out", out.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = read_report(&out);
    assert_eq!(report.records().len(), 3);
    assert!(report.records().iter().all(|r| r.status == Status::Pass));
    let table = std::fs::read_to_string(csv).unwrap();
    assert!(table.starts_with("function,alpha,L,G,K,gap_G,gap_K,status"));
    assert_eq!(table.lines().count(), 4);
}

#[test]
fn fvt_example_t_squared_sin() {
    let o = fracfvt(&["fvt", "--fn", "tq_sin", "--q", "2", "--omega", "1", "--alpha", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let report = Report::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    let rec = &report.records()[0];
    assert_eq!(rec.status, Status::Pass);
    assert!(rec.get_f64("G").unwrap().abs() <= 2e-2);
}

#[test]
fn unknown_function_is_a_usage_error() {
    let o = fracfvt(&["fvt", "--fn", "nosuch"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("const1") && err.contains("tq_sin"), "{err}");
}

#[test]
fn growing_function_is_not_a_failure() {
    let o = fracfvt(&["fvt", "--fn", "exp_growth", "--alpha", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let report = Report::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(report.records()[0].status, Status::Inconclusive);
}

#[test]
fn bad_schedules_and_flags_exit_two() {
    assert_eq!(fracfvt(&["fvt", "--fn", "const1", "--s-seq", "0.1,0.2"]).status.code(), Some(2));
    assert_eq!(fracfvt(&["fvt", "--fn", "const1", "--q", "2"]).status.code(), Some(2));
    assert_eq!(fracfvt(&["fvt", "--fn", "const1", "--alpha", "-1"]).status.code(), Some(2));
    assert_eq!(fracfvt(&["nosuch"]).status.code(), Some(2));
    assert_eq!(fracfvt(&["fode", "--rhs", "rotation", "--alpha", "0.5", "--scan", "1:2"]).status.code(), Some(2));
}

#[test]
fn fode_rotation_has_a_residual_floor() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fode.json");
    let csv = dir.path().join("curve.csv");
    let o = fracfvt(&[
        "fode", "--rhs", "rotation", "--alpha", "0.8", "--scan", "1:20:60",
        "--out", out.to_str().unwrap(), "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = read_report(&out);
    let rec = &report.records()[0];
    assert_eq!(rec.status, Status::Pass);
    assert!(rec.get_f64("min_residual").unwrap() >= 0.05);
    let table = std::fs::read_to_string(csv).unwrap();
    assert!(table.starts_with("T,residual"));
    assert_eq!(table.lines().count(), 61);
}

#[test]
fn fode_rejects_integer_order() {
    let o = fracfvt(&["fode", "--rhs", "rotation", "--alpha", "1.0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fode_zero_rhs_is_inconclusive() {
    let o = fracfvt(&["fode", "--rhs", "zero", "--alpha", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let report = Report::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    let rec = &report.records()[0];
    assert_eq!(rec.status, Status::Inconclusive);
    assert_eq!(rec.get_f64("min_residual"), Some(0.0));
}

#[test]
fn fode_blow_up_is_a_numeric_failure() {
    let o = fracfvt(&["fode", "--rhs", "logistic", "--param", "r=1", "--param", "k=1", "--alpha", "0.5", "--x0", "-5", "--horizon", "30"]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "[fvt]\nfn = \"const1\"\nalpha = [0.0, 1.0]\n").unwrap();
    let cfg_arg = cfg.to_str().unwrap();
    let o = fracfvt(&["--config", cfg_arg, "fvt"]);
    assert_eq!(o.status.code(), Some(0));
    let report = Report::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(report.records().len(), 2);
    let o = fracfvt(&["--config", cfg_arg, "fvt", "--alpha", "0.5"]);
    let report = Report::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(report.records().len(), 1);

    std::fs::write(&cfg, "[fvt]\nbogus = 1\n").unwrap();
    assert_eq!(fracfvt(&["--config", cfg_arg, "fvt"]).status.code(), Some(2));
    assert_eq!(fracfvt(&["--config", "/nonexistent.toml", "fvt"]).status.code(), Some(2));
}

#[test]
fn verify_filters_and_scales_tolerances() {
    let o = fracfvt(&["verify", "--only", "fraccalc"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with('[')).count(), 1, "{text}");
    // the series error is ~2e-10, far inside even a 1e-6 scale
    assert_eq!(fracfvt(&["verify", "--only", "xform", "--tol-scale", "1e-6"]).status.code(), Some(1));
    assert_eq!(fracfvt(&["verify", "--only", "nosuch"]).status.code(), Some(2));
    assert_eq!(fracfvt(&["verify", "--tol-scale", "0"]).status.code(), Some(2));
}

#[test]
fn thread_cap_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_fracfvt"))
        .args(["fvt", "--fn", "const1"])
        .env("FRACFVT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_fracfvt"))
        .args(["fvt", "--fn", "const1", "--alpha", "0,1"])
        .env("FRACFVT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}
