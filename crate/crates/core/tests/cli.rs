//! End-to-end checks of the command-line binary: exit codes, output formats,
//! file round trips and seed determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hermite-lab"));
    c.env_remove("HERMITE_LAB_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hermite-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn simulate_csv_has_header_and_grid() {
    let out = run(&["simulate", "--process", "fbm", "--n", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,value");
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[1], "0,0");
}

#[test]
fn same_seed_same_bytes_across_threads() {
    let args = ["--seed", "7", "qv", "--q", "2", "--n", "64", "--lattice-n", "1024", "--reps", "16"];
    let a = bin().args(args).args(["--threads", "1"]).output().unwrap();
    let b = bin().args(args).args(["--threads", "3"]).output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = bin().args(["--seed", "8"]).args(&args[2..]).output().unwrap();
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn seed_env_variable_is_honoured() {
    let flag = run(&["--seed", "11", "simulate", "--process", "fbm", "--n", "16"]);
    let env = bin().env("HERMITE_LAB_SEED", "11").args(["simulate", "--process", "fbm", "--n", "16"]).output().unwrap();
    assert_eq!(flag.stdout, env.stdout);
}

#[test]
fn vasicek_round_trip_through_file() {
    let path = scratch("vasicek.csv");
    let p = path.to_str().unwrap();
    let sim = run(&[
        "--seed", "1", "--out", p, "simulate", "--process", "vasicek", "--H", "0.8", "--q", "1", "--t-end", "50",
        "--n", "2000", "--a", "1", "--b", "2",
    ]);
    assert_eq!(sim.status.code(), Some(0));
    let meta = std::fs::read_to_string(format!("{p}.meta.json")).unwrap();
    assert!(meta.contains("\"seed\": 1"));
    let est = run(&["--format", "json", "estimate", "--what", "vasicek", "--in", p, "--H", "0.8", "--q", "1"]);
    assert_eq!(est.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&est.stdout).unwrap();
    let b_hat = v["b_hat"].as_f64().unwrap();
    assert!((b_hat - 2.0).abs() < 0.5, "b_hat = {b_hat}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["simulate", "--H", "1.2"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--q", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--experiment", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["estimate", "--what", "hurst", "--in", "/nonexistent/path.csv"]).status.code(), Some(2));
}

#[test]
fn info_json_reports_de_bruijn_gap() {
    let out = run(&["--format", "json", "info", "--model", "gaussian"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["de_bruijn"]["gap"].as_f64().unwrap().abs() < 1e-6);
}
