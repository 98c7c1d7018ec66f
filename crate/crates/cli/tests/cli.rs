use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fermidim"))
        .args(args)
        .env_remove("FERMIDIM_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn counts_the_eight_by_eight_rotated_lattice() {
    let doc = json(&["count", "rotated", "8", "8"]);
    assert_eq!(doc["value"], "38735278017380352");
}

#[test]
fn counts_the_eight_by_eight_standard_lattice() {
    let doc = json(&["count", "standard", "8", "8"]);
    assert_eq!(doc["value"], "311853312");
}

#[test]
fn oracle_methods_agree() {
    let doc = json(&["count", "oracle", "3", "3"]);
    assert_eq!(doc["pass"], true);
}

#[test]
fn entropy_constants() {
    let doc = json(&["entropy"]);
    let w = doc["W"].as_f64().unwrap();
    assert!((w - 1.791622812).abs() < 1e-8, "W = {w}");
}

#[test]
fn inversion_at_a_fixed_point_passes() {
    let doc = json(&["verify", "inversion-cylinder", "6", "0.37"]);
    assert_eq!(doc["pass"], true);
}

#[test]
fn csv_output_has_header_and_rows() {
    let out = run(&["--format", "csv", "growth", "6"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "lattice,M,N,value,per_dimer,deviation");
    let rows: Vec<_> = lines.collect();
    assert!(rows.iter().any(|r| r.starts_with("rotated,6,6,3130589184,")));
    assert!(rows.iter().any(|r| r.starts_with("standard,6,6,90176,")));
}

#[test]
fn jordan_reports_exact_blocks() {
    let doc = json(&["jordan", "2", "--exact"]);
    assert_eq!(doc["diagonalizable"], false);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--precision-bits", "20", "count", "rotated", "4", "4"]).status.code(), Some(2));
    assert_eq!(run(&["count", "standard", "3", "4"]).status.code(), Some(2));
}

#[test]
fn environment_precision_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_fermidim"))
        .args(["count", "rotated", "4", "4"])
        .env("FERMIDIM_PRECISION_BITS", "16")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_sets_format_and_rejects_unknown_keys() {
    let dir = std::env::temp_dir().join(format!("fermidim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.conf");
    std::fs::write(&good, "# test\nformat = csv\nprecision_bits = 128\n").unwrap();
    let out = run(&["--config", good.to_str().unwrap(), "count", "rotated", "2", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().contains("value"), "{text}");
    assert!(text.lines().nth(1).unwrap().starts_with("2,2,24,"), "{text}");

    let bad = dir.join("bad.conf");
    std::fs::write(&bad, "colour = red\n").unwrap();
    assert_eq!(run(&["--config", bad.to_str().unwrap(), "entropy"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}
