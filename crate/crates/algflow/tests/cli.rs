//! End-to-end tests of the `algflow` binary: exit codes, report shape,
//! artifact files, configuration diagnostics, and byte-level determinism
//! across thread counts.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_algflow"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).expect("stdout is a JSON report")
}

const E9_CONFIG: &str = r#"{
  "family": "E9",
  "params": {"a": 0.2, "b": -0.4, "c": 0.8, "d": 1.4},
  "grid": {"s_min": 0.0, "s_max": 3.0, "t_min": 0.0, "t_max": 6.0, "n_s": 6, "n_t": 9},
  "scan": {"property": "commutative", "expect": "all-false"}
}"#;

const E2_CONFIG: &str = r#"{
  "family": "E2",
  "params": {"epsilon": 0.25, "x": 0.5},
  "verify": {"triples": 60},
  "limit": {"horizon": 512.0, "expect": "exists"},
  "qsp-check": {"triples": 30}
}"#;

#[test]
fn verify_passes_for_a_flow_satisfying_its_equation() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "e2.json", E2_CONFIG);
    let output = bin().arg("verify").arg("--config").arg(&config).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    assert_eq!(report["command"], "verify");
    assert_eq!(report["summary"]["pass"], true);
    assert!(report["summary"]["worst_residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(report["input_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn verify_fails_under_the_wrong_rule() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "e9.json", E9_CONFIG);
    let output = bin()
        .args(["verify", "--rule", "C", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let report = stdout_json(&output);
    assert_eq!(report["summary"]["pass"], false);
    assert!(report["summary"]["worst_residual"].as_f64().unwrap() > 0.1);
}

#[test]
fn scan_writes_a_csv_diagram_and_honors_expectations() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "e9.json", E9_CONFIG);
    let csv_path = dir.path().join("diagram.csv");
    let output = bin()
        .arg("scan")
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(&csv_path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("s,t,holds"));
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",0")));
    // Only admissible (s <= t) cells appear.
    let rows = csv.lines().count() - 1;
    let report = stdout_json(&output);
    assert_eq!(report["summary"]["cells"]["fails"].as_u64().unwrap() as usize, rows);
}

#[test]
fn scan_exit_code_reflects_a_violated_expectation() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "e9.json",
        &E9_CONFIG.replace("all-false", "all-true"),
    );
    let output = bin().arg("scan").arg("--config").arg(&config).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn grid_flag_overrides_the_config_grid() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "e9.json", E9_CONFIG);
    let output = bin()
        .args(["scan", "--grid", "0,1,0,1,2,2", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    let cells = &report["summary"]["cells"];
    // 2x2 grid: the admissible region drops the (s=1, t=0) corner.
    assert_eq!(cells["fails"].as_u64().unwrap(), 3);
}

#[test]
fn limit_converges_for_a_contracting_process() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "e2.json", E2_CONFIG);
    let output = bin().arg("limit").arg("--config").arg(&config).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    assert_eq!(report["summary"]["converged"], true);
    let entries = report["summary"]["matrix"]["entries"].as_array().unwrap();
    // Entry order is (i, j, k) with k fastest: odd positions hold the k=2
    // coordinate, which carries the whole mass in the limit.
    for (pos, v) in entries.iter().enumerate() {
        let v = v.as_f64().unwrap();
        if pos % 2 == 1 {
            assert!((v - 1.0).abs() < 1e-6);
        } else {
            assert!(v.abs() < 1e-6);
        }
    }
}

#[test]
fn density_finds_the_classic_witness() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "density.json",
        r#"{"density": {"target": 0.0, "n_max": 1000}}"#,
    );
    let output = bin()
        .args(["density", "--tol", "1e-4", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    assert_eq!(report["summary"]["witness"]["n"], 355);
}

#[test]
fn density_without_witness_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "density.json",
        r#"{"density": {"target": 0.0, "n_max": 50}}"#,
    );
    let output = bin()
        .args(["density", "--tol", "1e-6", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let report = stdout_json(&output);
    assert!(report["summary"]["witness"].is_null());
}

#[test]
fn qsp_check_reports_the_measured_typing() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "e2.json", E2_CONFIG);
    let output = bin().arg("qsp-check").arg("--config").arg(&config).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    assert_eq!(report["summary"]["typing"], "types (A) and (B)");
}

#[test]
fn sweep_reports_closure_and_violations() {
    let dir = tempfile::tempdir().unwrap();
    let closed = write_config(
        dir.path(),
        "closed.json",
        r#"{"sweep": {"m": 3, "kind": "stochastic-k", "rule": "C", "trials": 60, "expect": "closed"}}"#,
    );
    let output = bin().arg("sweep").arg("--config").arg(&closed).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    assert_eq!(report["summary"]["fraction"].as_f64().unwrap(), 1.0);

    let open = write_config(
        dir.path(),
        "open.json",
        r#"{"sweep": {"m": 2, "kind": "stochastic-k", "rule": "D", "trials": 60, "expect": "not-closed"}}"#,
    );
    let output = bin().arg("sweep").arg("--config").arg(&open).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    assert!(report["summary"]["fraction"].as_f64().unwrap() < 1.0);
    assert!(report["summary"]["witness"].is_object());
}

#[test]
fn artifacts_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "e9.json", E9_CONFIG);
    let mut runs = Vec::new();
    for threads in ["1", "3"] {
        let csv_path = dir.path().join(format!("diagram-{threads}.csv"));
        let output = bin()
            .env("ALGFLOW_THREADS", threads)
            .arg("scan")
            .arg("--config")
            .arg(&config)
            .arg("--out")
            .arg(&csv_path)
            .output()
            .unwrap();
        assert_eq!(output.status.code(), Some(0));
        runs.push((output.stdout, std::fs::read(&csv_path).unwrap()));
    }
    assert_eq!(runs[0].0, runs[1].0, "stdout reports differ");
    assert_eq!(runs[0].1, runs[1].1, "CSV artifacts differ");
}

#[test]
fn seeded_commands_repeat_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "sweep.json",
        r#"{"sweep": {"m": 2, "kind": "twice-stochastic", "rule": "D", "trials": 40}}"#,
    );
    let run = || {
        bin()
            .args(["sweep", "--seed", "123", "--config"])
            .arg(&config)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn out_of_range_parameter_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "bad.json",
        r#"{"family": "E2", "params": {"epsilon": 0.7, "x": 0.5}, "verify": {}}"#,
    );
    let output = bin().arg("verify").arg("--config").arg(&config).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("epsilon"), "stderr: {stderr}");
}

#[test]
fn empty_config_reports_the_parse_position() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "empty.json", "");
    let output = bin().arg("verify").arg("--config").arg(&config).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("line 1"), "stderr: {stderr}");
}

#[test]
fn missing_config_file_is_a_config_error() {
    let output = bin()
        .args(["verify", "--config", "/nonexistent/nowhere.json"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    let output = bin().arg("verify").output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let output = bin().arg("frobnicate").output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn wall_time_stays_out_of_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "e2.json", E2_CONFIG);
    let output = bin().arg("verify").arg("--config").arg(&config).output().unwrap();
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(!stdout.contains("wall time"));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("wall time"));
}
