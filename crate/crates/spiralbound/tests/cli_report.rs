//! Config handling, pipeline orchestration, plot-file fidelity, and the
//! CLI binary's exit behavior.

use spiralbound::report::{run, RunConfig, Stage};
use std::path::Path;
use std::process::Command;

const GEOMETRY_ONLY: &str = r#"
seed = 1
[profile]
family = "power"
scale = 0.5
exponent = 0.5
[geometry]
theta_max = 80.0
margin = 0.5
mc_samples = 8192
"#;

const SMALL_COMPARE: &str = r#"
seed = 1
[profile]
family = "power"
scale = 0.5
exponent = 0.5
[geometry]
theta_max = 80.0
margin = 0.5
mc_samples = 8192
[bound]
sigma = [1.5]
lambda = [20.0]
[eigs]
h = [0.1]
r_max = 2.4
extrapolate = false
"#;

#[test]
fn geometry_only_run_produces_dump_files_and_no_solves() {
    let dir = tempfile::tempdir().unwrap();
    let config = RunConfig::parse(GEOMETRY_ONLY).unwrap();
    let outcome = run(&config, Stage::Auto, dir.path()).unwrap();
    assert!(outcome.gates_passed);
    assert!(dir.path().join("geometry_arm0.dat").exists());
    assert!(dir.path().join("potential_arm0.dat").exists());
    assert!(dir.path().join("report.json").exists());
    assert!(outcome.report.eigen.is_empty());
    assert!(outcome.report.bounds.is_empty());
    assert!(outcome.report.comparison.is_empty());
}

#[test]
fn identical_configs_give_byte_identical_reports() {
    let config = RunConfig::parse(SMALL_COMPARE).unwrap();
    let dir1 = tempfile::tempdir().unwrap();
    let dir2 = tempfile::tempdir().unwrap();
    run(&config, Stage::Compare, dir1.path()).unwrap();
    run(&config, Stage::Compare, dir2.path()).unwrap();
    let a = std::fs::read(dir1.path().join("report.json")).unwrap();
    let b = std::fs::read(dir2.path().join("report.json")).unwrap();
    assert_eq!(a, b, "reports must be byte-identical for identical configs");
}

#[test]
fn plot_files_round_trip_at_full_precision() {
    let dir = tempfile::tempdir().unwrap();
    let config = RunConfig::parse(SMALL_COMPARE).unwrap();
    let outcome = run(&config, Stage::Compare, dir.path()).unwrap();
    let text = std::fs::read_to_string(dir.path().join("bound_vs_lambda.dat")).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with('#'));
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split_whitespace()
        .map(|t| t.parse::<f64>().unwrap())
        .collect();
    let b = &outcome.report.bounds[0];
    assert_eq!(row[0], b.sigma);
    assert_eq!(row[1], b.lambda);
    assert_eq!(row[2], b.integral_term);
    assert_eq!(row[3], b.c1_term);
    assert_eq!(row[4], b.c2_term);
    assert_eq!(row[5], b.total);

    // ratio and moment tables round-trip too
    let text = std::fs::read_to_string(dir.path().join("moment_vs_lambda.dat")).unwrap();
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split_whitespace()
        .map(|t| t.parse::<f64>().unwrap())
        .collect();
    assert_eq!(row[2], outcome.report.comparison[0].numerical_moment);
}

#[test]
fn empty_lambda_list_emits_header_only_tables() {
    let text = SMALL_COMPARE.replace("lambda = [20.0]", "lambda = []");
    let config = RunConfig::parse(&text).unwrap();
    let dir = tempfile::tempdir().unwrap();
    run(&config, Stage::Bound, dir.path()).unwrap();
    let data = std::fs::read_to_string(dir.path().join("bound_vs_lambda.dat")).unwrap();
    assert_eq!(data.lines().count(), 1);
    assert!(data.starts_with('#'));
}

#[test]
fn malformed_offsets_fail_validation() {
    let text = GEOMETRY_ONLY.replace(
        "exponent = 0.5",
        "exponent = 0.5\noffsets = [0.0, 6.283185307179586]",
    );
    assert!(RunConfig::parse(&text).is_err());
}

#[test]
fn failure_writes_a_manifest_with_partial_outputs() {
    // r_max too small for the mask: the eigensolver stage fails after the
    // geometry stage already flushed its files
    let text = SMALL_COMPARE.replace("r_max = 2.4", "r_max = 0.2");
    let config = RunConfig::parse(&text).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let err = run(&config, Stage::Compare, dir.path());
    assert!(err.is_err());
    assert!(dir.path().join("failure_manifest.json").exists());
    assert!(dir.path().join("geometry_arm0.dat").exists());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("failure_manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["stage"], "compare");
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn binary_compare_exits_zero_and_prints_rows() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = write_config(dir.path(), SMALL_COMPARE);
    let out = Command::new(env!("CARGO_BIN_EXE_spiralbound"))
        .args(["--config", config_path.to_str().unwrap(), "--out"])
        .arg(dir.path().join("out"))
        .arg("compare")
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("ratio"));
    assert!(dir.path().join("out/report.json").exists());
}

#[test]
fn binary_rejects_invalid_config_with_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let bad = SMALL_COMPARE.replace("lambda = [20.0]", "lambda = [20.0, 10.0]");
    let config_path = write_config(dir.path(), &bad);
    let out = Command::new(env!("CARGO_BIN_EXE_spiralbound"))
        .args(["--config", config_path.to_str().unwrap()])
        .arg("bound")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn multiarm_stage_reports_per_arm_files() {
    let text = r#"
seed = 2
[profile]
family = "power"
scale = 0.5
exponent = 0.5
offsets = [0.0, 3.141592653589793]
[geometry]
theta_max = 60.0
margin = 0.5
mc_samples = 4096
[bound]
sigma = [1.5]
lambda = [50.0]
"#;
    let config = RunConfig::parse(text).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let outcome = run(&config, Stage::MultiArm, dir.path()).unwrap();
    assert_eq!(outcome.report.geometry.len(), 2);
    assert_eq!(outcome.report.bounds.len(), 2);
    assert_eq!(outcome.report.multi_arm_totals.len(), 1);
    let total = outcome.report.multi_arm_totals[0].total;
    let sum: f64 = outcome.report.bounds.iter().map(|b| b.total).sum();
    assert!((total - sum).abs() <= 1e-12 * total);
    assert!(dir.path().join("bound_arm0.dat").exists());
    assert!(dir.path().join("bound_arm1.dat").exists());
    assert!(dir.path().join("bound_total.dat").exists());
    assert!(dir.path().join("geometry_arm1.dat").exists());
}
