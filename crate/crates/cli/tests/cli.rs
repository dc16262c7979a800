use std::process::{Command, Output};

use serde_json::Value;

fn su2align(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_su2align"))
        .args(args)
        .output()
        .unwrap()
}

fn su2align_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_su2align"))
        .args(args)
        .env(key, value)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

fn without_timestamp(mut v: Value) -> Value {
    v["manifest"].as_object_mut().unwrap().remove("timestamp");
    v
}

#[test]
fn solve_reports_the_optimum() {
    let v = json(&su2align(&["solve", "--n", "3"]));
    assert!((f(&v["chi1"]) - 1.3385164807).abs() < 1e-10);
    assert_eq!(v["a"].as_array().unwrap().len(), 2);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "N",
            "chi1",
            "fidelity",
            "holevo",
            "lambda0",
            "a",
            "entangled_chi1",
            "asymptotic_chi1",
            "manifest"
        ]
    );
    assert_eq!(v["manifest"]["command"], "solve");
    assert!(v["manifest"]["timestamp"].as_str().unwrap().ends_with('Z'));

    let v = json(&su2align(&["solve", "--n", "1"]));
    assert_eq!(v["chi1"].to_string(), "0.333333333333");
}

#[test]
fn solve_rejects_even_and_zero() {
    let out = su2align(&["solve", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));
    assert_eq!(su2align(&["solve", "--n", "0"]).status.code(), Some(2));
    assert_eq!(su2align(&["solve"]).status.code(), Some(2));
}

#[test]
fn solve_csv_keeps_stdout_pure() {
    let out = su2align(&["solve", "--n", "5", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("N,chi1,"));
    let manifest: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(manifest["parameters"]["n"], 5);
}

#[test]
fn scan_rows_are_ordered_and_increasing() {
    let out = su2align(&["scan", "--n-min", "1", "--n-max", "21"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "N,chi1,entangled_chi1,asymptotic_chi1,entangled_asymptotic_chi1,residual_n4,entangled_residual_n4"
    );
    let rows: Vec<(u32, f64)> = lines
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            (cols[0].parse().unwrap(), cols[1].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 11);
    assert!(rows.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1));
}

#[test]
fn scan_residuals_stay_bounded_at_large_n() {
    let v = json(&su2align(&[
        "scan", "--n-min", "101", "--n-max", "401", "--format", "json",
    ]));
    let res: Vec<f64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| f(&r["residual_n4"]))
        .collect();
    assert_eq!(res.len(), 151);
    let (lo, hi) = res
        .iter()
        .fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
    assert!(lo > 0.0 && hi / lo < 1.5, "residual×N⁴ in [{lo}, {hi}]");
}

#[test]
fn scan_rejects_bad_ranges() {
    assert_eq!(
        su2align(&["scan", "--n-min", "7", "--n-max", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        su2align(&["scan", "--n-min", "2", "--n-max", "8"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        su2align(&["scan", "--n-max", "9", "--step", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn simulate_agrees_with_analytic_value() {
    let v = json(&su2align(&[
        "simulate", "--n", "5", "--shots", "1000000", "--seed", "42",
    ]));
    assert!(f(&v["z_score"]).abs() <= 4.0, "{v}");
    assert_eq!(v["manifest"]["seed"], 42);
}

#[test]
fn simulate_is_deterministic() {
    let args = ["simulate", "--n", "3", "--shots", "20000", "--seed", "7"];
    let a = without_timestamp(json(&su2align(&args)));
    let b = without_timestamp(json(&su2align(&args)));
    let c = without_timestamp(json(&su2align_env(&args, "SU2ALIGN_THREADS", "2")));
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn simulate_fixed_truth() {
    let v = json(&su2align(&[
        "simulate",
        "--n",
        "3",
        "--shots",
        "50000",
        "--fixed-g",
        "0.5,1.0,2.0",
    ]));
    assert!(f(&v["z_score"]).abs() <= 4.0);
    assert_eq!(v["manifest"]["parameters"]["fixed_g"], "0.5,1.0,2.0");
    assert_eq!(
        su2align(&["simulate", "--n", "3", "--fixed-g", "1,2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn simulate_guards() {
    assert_eq!(
        su2align(&["simulate", "--n", "5", "--shots", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        su2align(&["simulate", "--n", "33", "--shots", "1"])
            .status
            .code(),
        Some(3)
    );
    assert!(
        su2align(&["simulate", "--n", "33", "--shots", "1", "--force"])
            .status
            .success()
    );
    assert_eq!(
        su2align_env(&["solve", "--n", "3"], "SU2ALIGN_THREADS", "zero")
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn out_paths_receive_report_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("solve.json");
    let out = su2align(&["solve", "--n", "7", "--out", json_path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(v["N"], 7);

    let csv_path = dir.path().join("scan.csv");
    assert!(
        su2align(&["scan", "--n-max", "9", "--out", csv_path.to_str().unwrap()])
            .status
            .success()
    );
    assert_eq!(
        std::fs::read_to_string(&csv_path).unwrap().lines().count(),
        6
    );
    let side = dir.path().join("scan.csv.manifest.json");
    let m: Value = serde_json::from_str(&std::fs::read_to_string(side).unwrap()).unwrap();
    assert_eq!(m["command"], "scan");
}

#[test]
fn verify_quick_passes_and_sabotage_fails() {
    let ok = su2align(&["verify", "--level", "quick"]);
    assert_eq!(ok.status.code(), Some(0));
    let table = String::from_utf8(ok.stdout).unwrap();
    assert!(table.lines().all(|l| l.starts_with("PASS")));

    let bad = su2align(&["verify", "--sabotage", "b_J"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("completeness"));
}
