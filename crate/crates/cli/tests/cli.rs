//! End-to-end tests of the `pinch` binary: argument handling, file output,
//! and reproducibility of persisted results.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn pinch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pinch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn solve_prints_a_solution_per_scheme() {
    let output = pinch(&[
        "solve",
        "--users",
        "2",
        "--seed",
        "7",
        "--pmax-dbm",
        "20",
        "--rmin",
        "0.5",
        "--schemes",
        "noma_pso,noma_fixed",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("scheme noma_pso"));
    assert!(text.contains("scheme noma_fixed"));
    assert!(text.contains("sum rate"));
    assert!(text.contains("antenna position  0.000000 m"));
}

#[test]
fn solve_json_is_machine_readable() {
    let output = pinch(&[
        "solve",
        "--users",
        "2",
        "--seed",
        "7",
        "--schemes",
        "noma_pso",
        "--json",
    ]);
    assert!(output.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(value["solutions"][0]["scheme"], "noma_pso");
    assert!(value["solutions"][0]["solution"]["sum_rate"].is_f64());
}

#[test]
fn solve_rejects_unknown_schemes() {
    let output = pinch(&["solve", "--schemes", "fdma"]);
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("unknown scheme"));
}

fn write_tiny_config(path: &Path) {
    fs::write(
        path,
        r#"{
  "users": 2,
  "realizations": 2,
  "seed": 42,
  "p_max_dbm": [15.0, 25.0],
  "r_min": [0.4],
  "grid_step_m": 0.05,
  "schemes": ["noma_pso", "noma_exhaustive", "tdma_exhaustive"],
  "pso": {
    "swarm_size": 10,
    "max_iterations": 30,
    "inertia": 0.729,
    "cognitive": 1.49445,
    "social": 1.49445,
    "tolerance": 1e-8,
    "seed": 0,
    "velocity_cap": 0.5
  }
}"#,
    )
    .unwrap();
}

#[test]
fn sweep_writes_reproducible_files() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("config.json");
    write_tiny_config(&config_path);
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    fs::create_dir(&out_a).unwrap();
    fs::create_dir(&out_b).unwrap();

    for out in [&out_a, &out_b] {
        let output = pinch(&[
            "sweep-pmax",
            "--config",
            config_path.to_str().unwrap(),
            "--out-dir",
            out.to_str().unwrap(),
        ]);
        assert!(
            output.status.success(),
            "stderr: {}",
            String::from_utf8_lossy(&output.stderr)
        );
        assert!(stdout(&output).contains("p_max_dbm sweep"));
    }
    for name in ["pmax_raw.csv", "pmax_aggregate.csv", "pmax_manifest.json"] {
        let a = fs::read(out_a.join(name)).unwrap();
        let b = fs::read(out_b.join(name)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{name} differs between identical runs");
    }
    let raw = fs::read_to_string(out_a.join("pmax_raw.csv")).unwrap();
    assert!(raw.starts_with("scheme,realization,seed,p_max_dbm,r_min,sum_rate"));
}

#[test]
fn sweep_rmin_writes_its_own_stems() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("config.json");
    write_tiny_config(&config_path);
    let output = pinch(&[
        "sweep-rmin",
        "--config",
        config_path.to_str().unwrap(),
        "--realizations",
        "1",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert!(dir.path().join("rmin_raw.csv").exists());
    assert!(dir.path().join("rmin_aggregate.csv").exists());
    assert!(dir.path().join("rmin_manifest.json").exists());
}

#[test]
fn sweep_fails_cleanly_on_missing_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("config.json");
    write_tiny_config(&config_path);
    let missing = dir.path().join("nope");
    let output = pinch(&[
        "sweep-pmax",
        "--config",
        config_path.to_str().unwrap(),
        "--out-dir",
        missing.to_str().unwrap(),
    ]);
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("does not exist"));
    assert!(!missing.exists());
}

#[test]
fn oracle_check_passes_and_reports_lines() {
    let output = pinch(&["oracle-check", "--trials", "25", "--seed", "9"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert_eq!(text.matches("PASS").count(), 4);
    assert!(text.contains("telescoping"));
    assert!(text.contains("greedy"));
}
