//! End-to-end tests of the `pdsearch` binary: exit codes, output schemas,
//! and byte-for-byte determinism.

use std::process::{Command, Output};

fn pdsearch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdsearch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn simulate_single_match_matches_closed_form() {
    let out = pdsearch(&["simulate", "-n", "2", "--marked", "0", "-q", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,items,matches,marked,iterations,p_simulated,p_closed_form,abs_diff,pass")
    );
    let row = lines.next().unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(&fields[..5], &["2", "4", "1", "0", "1"]);
    assert_eq!(fields[5], "8.12500000000e-1");
    assert_eq!(fields[6], "8.12500000000e-1");
    assert_eq!(fields[8], "true");
    let diff: f64 = fields[7].parse().unwrap();
    assert!(diff < 1e-12);
}

#[test]
fn simulate_auto_resolves_iterations_from_the_floor_formula() {
    let out = pdsearch(&["simulate", "-n", "3", "--marked", "0,1,2,3", "-q", "auto"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    // M = N/2: floor(pi/(2 sqrt 2) sqrt 2) = 1 iteration, certainty.
    assert_eq!(fields[4], "1");
    assert_eq!(fields[5], "1.00000000000e0");

    let out = pdsearch(&[
        "simulate",
        "-n",
        "4",
        "--num-marked",
        "1",
        "--seed",
        "3",
        "-q",
        "auto",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let fields: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    // N = 16, M = 1: floor(1.1107 * 4) = 4.
    assert_eq!(fields[4], "4");
}

#[test]
fn simulate_rejects_invalid_register() {
    let out = pdsearch(&["simulate", "-n", "0", "--marked", "0", "-q", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn simulate_requires_a_marking_source() {
    let out = pdsearch(&["simulate", "-n", "2", "-q", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_json_reports_both_predictions() {
    let out = pdsearch(&[
        "simulate", "-n", "2", "--marked", "0", "-q", "1", "--format", "json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["marked"], serde_json::json!([0]));
    assert!((value["p_simulated"].as_f64().unwrap() - 0.8125).abs() < 1e-12);
    assert!((value["p_closed_form"].as_f64().unwrap() - 0.8125).abs() < 1e-12);
    assert_eq!(value["pass"], serde_json::json!(true));
}

#[test]
fn simulate_output_is_byte_identical_across_runs() {
    let args = [
        "simulate",
        "-n",
        "5",
        "--num-marked",
        "7",
        "--seed",
        "99",
        "-q",
        "auto",
    ];
    let first = pdsearch(&args);
    let second = pdsearch(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn table1_default_range_matches_reference() {
    let out = pdsearch(&["table1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "n,max_prob,min_prob,avg_prob");
    assert_eq!(
        lines[1],
        "2,1.00000000000e0,8.12500000000e-1,8.75000000000e-1"
    );
    assert!(lines[5].starts_with("6,1.00000000000e0,7.6187"));
}

#[test]
fn table1_wider_range_follows_average_law() {
    let out = pdsearch(&["table1", "--n-max", "8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 8);
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        let n: u32 = fields[0].parse().unwrap();
        let avg: f64 = fields[3].parse().unwrap();
        let expected = 1.0 - 1.0 / (2.0 * (1u64 << n) as f64);
        assert!((avg - expected).abs() < 1e-12);
    }
}

#[test]
fn table1_rejects_inverted_range() {
    let out = pdsearch(&["table1", "--n-min", "9", "--n-max", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_fixed_one_iteration_has_certainty_at_half() {
    let out = pdsearch(&[
        "sweep",
        "--algos",
        "grover,pd",
        "--fixed-q",
        "1",
        "--points",
        "1000",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2001);
    assert_eq!(lines[0], "algorithm,ratio,iterations,p_success");
    let pd_half = lines
        .iter()
        .find(|l| l.starts_with("partial_diffusion,5.00000000000e-1,"))
        .expect("pd row at ratio 0.5");
    assert!(pd_half.ends_with("1.00000000000e0"));
}

#[test]
fn sweep_paper_iterations_reports_the_minimum() {
    let out = pdsearch(&["sweep", "--algos", "pd", "--paper-q", "--points", "100000"]);
    assert!(out.status.success());
    let summary = String::from_utf8_lossy(&out.stderr);
    assert!(
        summary.contains("# minimum partial_diffusion: p_success=8.472"),
        "summary was: {summary}"
    );
    assert!(summary.contains("at ratio=3.0842"));
}

#[test]
fn sweep_rejects_empty_grid_and_unknown_algorithm() {
    let out = pdsearch(&["sweep", "--points", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = pdsearch(&["sweep", "--algos", "quantum-annealing"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_passes_and_negative_control_fails() {
    let out = pdsearch(&["validate", "--n-max", "5", "--q-max", "15"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("pair=recurrence_vs_closed_form"));
    assert!(text.contains("overall=pass"));

    let out = pdsearch(&[
        "validate",
        "--n-max",
        "5",
        "--q-max",
        "15",
        "--inject-diffusion-sign-fault",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("overall=fail"));
}

#[test]
fn validate_json_has_the_report_schema() {
    let out = pdsearch(&[
        "validate", "--n-max", "4", "--q-max", "10", "--format", "json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["pass"], serde_json::json!(true));
    let pairs = value["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 4);
    for pair in pairs {
        assert!(pair["pair"].is_string());
        assert!(pair["max_abs_dev"].is_number());
        assert!(pair["grid_size"].is_number());
        assert!(pair["pass"].is_boolean());
    }
}

#[test]
fn output_flag_writes_the_payload_to_a_file() {
    let dir = std::env::temp_dir().join("pdsearch-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.csv");
    let out = pdsearch(&["table1", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("n,max_prob,min_prob,avg_prob\n"));
    std::fs::remove_file(&path).ok();
}
