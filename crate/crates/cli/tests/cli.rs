//! Black-box tests of the command-line surface: exit codes, JSON shapes,
//! exact rational round-trips and byte-identical reruns.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_waveamalgam"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .arg("--output-dir")
        .arg(dir)
        .output()
        .expect("binary runs")
}

#[test]
fn regions_check_thm1_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "regions", "--check", "thm1", "--n", "3", "--sigma", "4/5", "--q", "30", "--qt", "3",
            "--r", "9/2", "--rt", "24/5",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["admissible"], serde_json::Value::Bool(true));
    assert_eq!(json["schema_version"], 1);
    // exact rational round-trip through the JSON boundary
    assert_eq!(json["sigma"], "4/5");
    let parsed: waveamalgam::rational::ExtendedRational =
        json["r_tilde"].as_str().unwrap().parse().unwrap();
    assert_eq!(parsed, waveamalgam::rational::rat(24, 5));
    assert!(dir.path().join("regions_check.json").exists());
}

#[test]
fn regions_check_rejects_boundary_tuple() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "regions", "--check", "thm1", "--sigma", "4/5", "--q", "30", "--qt", "3", "--r",
            "9/2", "--rt", "5",
        ],
        dir.path(),
    );
    // the check itself succeeds; the verdict is in the payload
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["admissible"], serde_json::Value::Bool(false));
}

#[test]
fn missing_flag_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["decay", "--gamma", "8/5", "--r", "9/2"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("Usage"), "stderr: {stderr}");
}

#[test]
fn inadmissible_decay_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["decay", "--gamma", "8/5", "--r", "4", "--rt", "24/5", "--regime", "large"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decay_run_writes_reproducible_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "decay", "--gamma", "8/5", "--r", "9/2", "--rt", "24/5", "--regime", "large",
        "--points", "8", "--radius-points", "512",
    ];
    let out = run(&args, dir.path());
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv_path = dir.path().join("decay_profile_direct_large.csv");
    let json_path = dir.path().join("decay_summary.json");
    let csv_first = std::fs::read(&csv_path).unwrap();
    let json_first = std::fs::read(&json_path).unwrap();
    assert!(csv_first.starts_with(b"t,norm,estimator,gamma,r,r_tilde\n"));

    let json: serde_json::Value = serde_json::from_slice(&json_first).unwrap();
    assert_eq!(json[0]["fits"][0]["target"], "-1/15");

    // rerun overwrites byte-identically, with an explicit thread count too
    let out2 = bin()
        .args(args)
        .args(["--threads", "1"])
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out2.status.code(), Some(0));
    assert_eq!(std::fs::read(&csv_path).unwrap(), csv_first);
    assert_eq!(std::fs::read(&json_path).unwrap(), json_first);
}

#[test]
fn kernel_point_matches_reference() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["kernel", "--gamma", "1.5", "--r", "1", "--t", "0"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let re = json["value_re"].as_f64().unwrap();
    assert!((re - 0.06349363593424097).abs() < 1e-7, "value {re}");
}

#[test]
fn output_dir_env_variable_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["regions", "--kmax-curve", "--denom", "8"])
        .env("WAVEAMALGAM_OUTDIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("kmax_curve.csv")).unwrap();
    assert!(csv.starts_with("sigma,k_max\n"));
    // k(1/2) = 3 appears exactly
    assert!(csv.contains("1/2,3\n"), "csv: {csv}");
}

#[test]
fn norms_command_reads_profile_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("profile.csv");
    let mut text = String::from("radius,re,im\n");
    for j in 0..512 {
        let r = (j as f64 + 0.5) * (8.0 / 512.0);
        text.push_str(&format!("{r},{},0\n", (-r * r).exp()));
    }
    std::fs::write(&input, text).unwrap();
    let out = run(
        &[
            "norms", "--input", input.to_str().unwrap(), "--inner", "12/5", "--outer", "9/4",
            "--surrogate",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(json["direct_norm"].as_f64().unwrap() > 0.0);
    assert!(json["surrogate_norm"].as_f64().unwrap() > 0.0);
}

#[test]
fn nlw_rejects_inadmissible_tuple() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "nlw", "--k", "3", "--qt", "5", "--q", "8", "--rt", "10/3", "--r", "10/3",
            "--modes", "255", "--slices", "9",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn quotient_rejects_inadmissible_tuple() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "quotient", "--sigma", "1/2", "--qt", "4", "--q", "7", "--rt", "4", "--r", "4",
            "--modes", "255",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}
