//! End-to-end runs of the `qfwalk` binary.

use std::path::Path;
use std::process::{Command, Output};

fn qfwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfwalk")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn verify_on_defaults_passes() {
    let o = qfwalk(&["verify"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("# seed 20240601"));
    assert!(text.contains(", 0 failed"));
}

#[test]
fn verify_single_suite_with_seed() {
    let o = qfwalk(&["verify", "--suite", "algebra", "--seed", "7"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("# seed 7"));
    assert!(text.contains("C1 ") && !text.contains("C3 "));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    assert_eq!(qfwalk(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn converge_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"model": {"preset": "thermal_qubit", "gamma0": 0.8, "systemDim": 2}, "grid": {"nList": [16, 64, 256], "T": 1.0}}"#);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = qfwalk(&["converge", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let csv = std::fs::read_to_string(&a).unwrap();
    assert_eq!(csv, std::fs::read_to_string(&b).unwrap());
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,tau,abs_error,ratio");
    assert_eq!(lines.len(), 4);
    let errors: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{csv}");
    assert!(lines[1].starts_with("16,6.2500000000000000e-2,"));
}

#[test]
fn dilate_without_coupling_reports_all_amplitudes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "d.json",
        r#"{"model": {"rho": [[0.6, 0], [0, 0.4]], "H_S": [[0, 0], [0, 1]], "H_P": [[1, 0], [0, 0]],
            "H_I": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}}"#,
    );
    let o = qfwalk(&["dilate", "--config", &cfg]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("uniqueness: all amplitudes admissible"));
    assert!(text.contains("max|L|: 0.0000000000000000e0"));
}

#[test]
fn uniqueness_on_preset() {
    let o = qfwalk(&["uniqueness"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("amplitude set is a singleton: true"));
}

#[test]
fn invalid_configuration_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.json",
        r#"{"model": {"rho": [[0.6, 0], [0, 0.4]], "H_S": [[0, 1], [0, 1]], "H_P": [[1, 0], [0, 0]],
            "H_I": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}}"#,
    );
    let o = qfwalk(&["dilate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("\"H_S\""));
}
