use std::path::Path;
use std::process::{Command, Output};

fn cauchylab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cauchylab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_cantor_writes_64_atoms_of_unit_mass() {
    let dir = tempfile::tempdir().unwrap();
    let o = cauchylab(&["gen", "cantor", "--lambda", "0.25", "--depth", "3", "-o", "c.json"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("c.json")).unwrap()).unwrap();
    let weights = v["weights"].as_array().unwrap();
    assert_eq!(weights.len(), 64);
    let mass: f64 = weights.iter().map(|w| w.as_f64().unwrap()).sum();
    assert!((mass - 1.0).abs() < 1e-15);
}

#[test]
fn verdict_emits_json_report() {
    let dir = tempfile::tempdir().unwrap();
    cauchylab(&["gen", "cantor", "--lambda", "0.25", "--depth", "3", "-o", "c.json"], dir.path());
    let o = cauchylab(&["verdict", "-i", "c.json", "--scales", "0.25,0.0625,0.015625"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["atoms"], 64);
    assert!(v["verdict"]["verdict"].is_string());
}

#[test]
fn missing_input_is_a_validation_error_naming_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let o = cauchylab(&["norm", "-i", "missing.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.json"));
    assert!(o.stdout.is_empty());
}

#[test]
fn budget_overrun_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = cauchylab(&["curvature", "--generate", "circle:1,100", "--budget", "1000"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn unconverged_norm_still_reports_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = cauchylab(
        &["norm", "--generate", "disc:1,16", "--tol", "1e-300", "--max-iter", "3", "-o", "n.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("n.json")).unwrap()).unwrap();
    assert_eq!(v["converged"], false);
    assert_eq!(v["iterations"], 3);
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let both = cauchylab(&["norm", "-i", "a.json", "--generate", "circle:1,10"], dir.path());
    assert_eq!(both.status.code(), Some(1));
    let ladder = cauchylab(&["density", "--generate", "circle:1,10", "--scales", "0.1,0.5"], dir.path());
    assert_eq!(ladder.status.code(), Some(1));
    let bad_gen = cauchylab(&["norm", "--generate", "spiral:1,2"], dir.path());
    assert_eq!(bad_gen.status.code(), Some(1));
}

#[test]
fn output_is_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let args = |t: &'static str, out: &'static str| {
        vec![
            "--threads", t, "verdict", "--generate", "disc:1,24", "--scales", "0.5,0.25,0.125",
            "--format", "csv", "-o", out,
        ]
    };
    assert!(cauchylab(&args("1", "a.csv"), dir.path()).status.success());
    assert!(cauchylab(&args("4", "b.csv"), dir.path()).status.success());
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.csv")).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("quantity,param1,param2,value\n"));
    assert!(text.lines().last().unwrap().starts_with("verdict,,,"));
}

#[test]
fn cantor_scan_and_tv_check_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = cauchylab(&["cantor-scan", "--lambda", "0.5", "--depth", "2", "--lambdas", "0.5"], dir.path());
    assert_eq!(o.status.code(), Some(1), "--lambda and --lambdas conflict");
    let o = cauchylab(&["cantor-scan", "--lambdas", "0.5,0.5,0.5,0.5,0.5", "--depth", "2"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["theta_series"].as_array().unwrap().len(), 3);
    let o = cauchylab(&["tv-check", "--generate", "circle:1,300", "--theta", "1"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let residual: f64 = v["relative_residual"].as_str().unwrap().parse().unwrap();
    assert!(residual < 0.05);
}
