use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn specwass(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specwass"))
        .args(args)
        .current_dir(dir)
        .env_remove("SPECWASS_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json_line(o: &Output) -> Value {
    serde_json::from_str(stdout(o).lines().last().expect("some output")).expect("json")
}

fn write_inputs(dir: &Path) {
    assert!(specwass(dir, &["space", "gen-line", "--n", "5", "-o", "l.json"]).status.success());
    fs::write(dir.join("a.json"), r#"{"space":"l.json","weights":[0.5,0.5,0,0,0]}"#).unwrap();
    fs::write(dir.join("b.json"), r#"{"space":"l.json","weights":[0,0,0.25,0,0.75]}"#).unwrap();
}

#[test]
fn circle_generation_validates() {
    let dir = tempfile::tempdir().unwrap();
    let o = specwass(dir.path(), &["space", "gen-circle", "--n", "8", "-o", "c8.json"]);
    assert!(o.status.success());
    assert_eq!(json_line(&o)["points"], 8);
    let v = specwass(dir.path(), &["space", "validate", "c8.json"]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(json_line(&v)["valid"], true);
}

#[test]
fn twosheet_jump_is_inverse_norm() {
    let dir = tempfile::tempdir().unwrap();
    write_inputs(dir.path());
    let o = specwass(
        dir.path(),
        &["space", "gen-twosheet", "--base", "l.json", "--norm-di", "2", "--fiber", "33", "-o", "ts.json"],
    );
    assert!(o.status.success());
    assert_eq!(json_line(&o)["jump_distance"], 0.5);
    let v = specwass(dir.path(), &["space", "validate", "ts.json"]);
    assert_eq!(v.status.code(), Some(0));
}

#[test]
fn asymmetric_matrix_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.json"),
        r#"{"points":[{"id":"a"},{"id":"b"}],"metric":"explicit","matrix":[[0,1],[2,0]]}"#,
    )
    .unwrap();
    let o = specwass(dir.path(), &["space", "validate", "bad.json"]);
    assert_eq!(o.status.code(), Some(1));
    let report = json_line(&o);
    assert_eq!(report["valid"], false);
    assert_eq!(report["report"]["violations"][0]["axiom"], "symmetry");
}

#[test]
fn methods_agree_on_a_line() {
    let dir = tempfile::tempdir().unwrap();
    write_inputs(dir.path());
    let run = |m: &str| {
        let o = specwass(dir.path(), &["dist", m, "--space", "l.json", "--mu", "a.json", "--nu", "b.json"]);
        assert!(o.status.success(), "{m}: {}", String::from_utf8_lossy(&o.stderr));
        json_line(&o)
    };
    let both = run("both");
    assert_eq!(both["method"], "primal+dual");
    assert!(both["certificate"]["gap"].as_f64().unwrap() <= 1e-9);
    let value = both["value"].as_f64().unwrap();
    // cumulative difference 1/2, 1, 3/4 on [0, 1/4), [1/4, 1/2), [1/2, 1)
    assert!((value - 0.75).abs() < 1e-12);
    assert_eq!(run("closed1d")["value"].as_f64().unwrap(), value);
    assert_eq!(run("primal")["value"].as_f64().unwrap(), value);
    let bounds = run("bounds");
    let (lo, up) = (bounds["certificate"]["lower"].as_f64().unwrap(), bounds["certificate"]["upper"].as_f64().unwrap());
    assert!(lo <= value + 1e-12 && value <= up + 1e-12);
}

#[test]
fn closed_form_on_circle_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(specwass(dir.path(), &["space", "gen-circle", "--n", "4", "-o", "c.json"]).status.success());
    fs::write(dir.path().join("p.json"), r#"{"space":"c.json","weights":[1,0,0,0]}"#).unwrap();
    fs::write(dir.path().join("q.json"), r#"{"space":"c.json","weights":[0,0,0,1]}"#).unwrap();
    let o = specwass(dir.path(), &["dist", "closed1d", "--space", "c.json", "--mu", "p.json", "--nu", "q.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("hypothesis"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(specwass(dir.path(), &["dist", "nonsense"]).status.code(), Some(2));
    assert_eq!(specwass(dir.path(), &["dist", "primal"]).status.code(), Some(2));
    assert_eq!(specwass(dir.path(), &["verify", "duality", "--seed", "x"]).status.code(), Some(2));
}

#[test]
fn scalar_methods() {
    let dir = tempfile::tempdir().unwrap();
    let o = specwass(dir.path(), &["dist", "moyal", "--a", "[0,0,0]", "--b", "[0.6,0,0]", "--theta", "2"]);
    assert!((json_line(&o)["value"].as_f64().unwrap() - 0.6).abs() < 1e-15);
    let o = specwass(dir.path(), &["dist", "equator", "--theta1", "1", "--theta2", "1", "--r", "0.5"]);
    assert_eq!(json_line(&o)["value"], 0.0);
    let o = specwass(
        dir.path(),
        &["dist", "wavepacket", "--shape", "uniform", "--sigma", "1", "--sigma-p", "0.25", "--x", "0", "--y", "1"],
    );
    let r = json_line(&o);
    assert!((r["value"].as_f64().unwrap() - 0.625).abs() < 1e-9);
    assert!((r["certificate"]["pairing"].as_f64().unwrap() - 0.625).abs() < 1e-6);
    let o = specwass(dir.path(), &["dist", "moyal", "--a", "[1,1,0]", "--b", "[0,0,0]", "--theta", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn csv_output_has_header() {
    let dir = tempfile::tempdir().unwrap();
    let o = specwass(
        dir.path(),
        &["--csv", "dist", "equator", "--theta1", "0", "--theta2", "3.141592653589793", "--dd", "2"],
    );
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("method,value,certificate,wall_time_ms"));
    assert!(lines.next().unwrap().starts_with("equator,1"));
}

#[test]
fn duality_suite_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = specwass(dir.path(), &["verify", "duality", "--cases", "100", "--seed", "7"]);
    let b = specwass(dir.path(), &["verify", "duality", "--cases", "100", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let summary = json_line(&a);
    assert_eq!(summary["detail"]["passed"], 100);
    assert_eq!(summary["detail"]["failed"], 0);
}

#[test]
fn interp_and_twosheet_suites_pass() {
    let dir = tempfile::tempdir().unwrap();
    assert!(specwass(dir.path(), &["verify", "interp", "--cases", "50"]).status.success());
    let o = specwass(dir.path(), &["verify", "twosheet", "--refine", "4", "--cases", "5"]);
    assert!(o.status.success());
    let rows: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let last = rows.iter().rfind(|r| r["case"] == "refine3").unwrap();
    assert!(last["detail"]["rel_error"].as_f64().unwrap() <= 0.02);
}

#[test]
fn failures_exit_one_with_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_specwass"))
        .args(["verify", "interp", "--cases", "3"])
        .current_dir(dir.path())
        .env("SPECWASS_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(json_line(&o)["counterexample"]["detail"]["instance"].is_object());
}
