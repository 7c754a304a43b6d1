//! End-to-end tests of the `bsnr` binary: determinism of artifacts, error
//! paths, and output formats.

use std::path::Path;
use std::process::{Command, Output};

fn bsnr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsnr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn risk_curve_output_is_byte_identical_across_runs() {
    let dir_a = tempdir("crn_a");
    let dir_b = tempdir("crn_b");
    for dir in [&dir_a, &dir_b] {
        let out = bsnr(&[
            "risk-curve",
            "--p",
            "5",
            "--k",
            "20",
            "--m",
            "2",
            "--replicates",
            "5000",
            "--lambda-grid",
            "0:2:5",
            "--seed",
            "20120601",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for name in ["risk_unbiased.csv", "risk_mle.csv", "risk_bu_l0_r2.csv"] {
        let a = read(&dir_a.join(name));
        let b = read(&dir_b.join(name));
        assert_eq!(a, b, "{name} differs between identical runs");
        assert!(a.starts_with("# bsnr risk-curve"), "missing provenance in {name}");
        assert!(a.contains("seed=20120601"));
        assert!(a.contains("lambda,estimate,std_error,replicates"));
    }
}

#[test]
fn multiplier_reports_boundary_uniform_value_at_zero() {
    let dir = tempdir("mult");
    let out = bsnr(&[
        "multiplier",
        "--p",
        "5",
        "--k",
        "20",
        "--m",
        "2",
        "--t-grid",
        "0:1:3",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let first_row = stdout.lines().nth(1).unwrap();
    // Columns: t, unbiased, mle, bu. At t = 0 the boundary-uniform
    // multiplier is m²/p = 0.8 and the others are 1.
    let cells: Vec<&str> = first_row.split_whitespace().collect();
    assert_eq!(cells[1].parse::<f64>().unwrap(), 1.0);
    assert_eq!(cells[2].parse::<f64>().unwrap(), 1.0);
    assert!((cells[3].parse::<f64>().unwrap() - 0.8).abs() < 1e-12);
    // m ≤ √p keeps the boundary-uniform column at or below the MLE column.
    for row in stdout.lines().skip(1) {
        let cells: Vec<f64> = row
            .split_whitespace()
            .map(|c| c.parse().unwrap())
            .collect();
        assert!(cells[3] <= cells[2] + 1e-12, "row {row}");
    }
    let csv = read(&dir.join("multipliers.csv"));
    assert!(csv.lines().any(|l| l.starts_with("t,unbiased,mle,bu_l0_r2")));
}

#[test]
fn rejects_posterior_violating_exponent() {
    let out = bsnr(&["risk-curve", "--p", "5", "--k", "20", "--m", "2", "--l", "30"]);
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("l < k + p"), "stderr: {stderr}");
    assert!(stderr.contains("30"), "stderr should name the offending value: {stderr}");
}

#[test]
fn rejects_zero_replicates() {
    let out = bsnr(&["risk-curve", "--replicates", "0"]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("replicate"));
}

#[test]
fn rejects_unknown_suite_and_bad_grids() {
    let out = bsnr(&["verify", "nonsense"]);
    assert!(!out.status.success());

    let out = bsnr(&["risk-curve", "--lambda-grid", "0:2"]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("lambda-grid"));

    let out = bsnr(&["risk-curve", "--lambda-grid", "0:5:3"]);
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("outside [0, m"), "stderr: {stderr}");

    let out = bsnr(&["multiplier", "--t-grid", "0:10:5:log"]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("lo > 0"));
}

#[test]
fn verify_writes_json_report_with_expected_fields() {
    let dir = tempdir("verify");
    let out = bsnr(&[
        "verify",
        "r1-inequality",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&read(&dir.join("verify_r1-inequality.json"))).unwrap();
    assert_eq!(json["suite"], "r1-inequality");
    assert_eq!(json["passed"], true);
    let reports = json["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 25); // (p,k) in {2..6}²
    for rep in reports {
        assert!(rep["name"].is_string());
        assert!(rep["grid"].is_string());
        assert_eq!(rep["passed"], true);
        assert!(rep["violations"].as_array().unwrap().is_empty());
    }
}

#[test]
fn verify_dominance_emits_truncation_for_wide_bound() {
    let dir = tempdir("dom");
    let out = bsnr(&[
        "verify",
        "dominance",
        "--p",
        "5",
        "--k",
        "20",
        "--m",
        "3",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let spec: serde_json::Value =
        serde_json::from_str(&read(&dir.join("truncated_mle.json"))).unwrap();
    assert_eq!(spec["kind"], "truncated");
    assert_eq!(spec["base"]["kind"], "mle");
    let report: serde_json::Value =
        serde_json::from_str(&read(&dir.join("verify_dominance.json"))).unwrap();
    assert_eq!(report["passed"], true);
    assert!(!report["mle_truncation"]["violations"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempdir("cfg");
    let cfg_path = dir.join("run.json");
    std::fs::write(
        &cfg_path,
        serde_json::json!({
            "p": 5, "k": 20, "m": 2.0,
            "replicates": 4000,
            "seed": 7,
            "lambda_grid": "0:2:3",
            "specs": [{"kind": "mle"}],
            "out": dir.join("from_file"),
        })
        .to_string(),
    )
    .unwrap();

    let out = bsnr(&["risk-curve", "--config", cfg_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(&dir.join("from_file/risk_mle.csv"));
    assert!(csv.contains("seed=7"));
    assert!(csv.contains("replicates=4000"));

    // A flag beats the file.
    let out = bsnr(&[
        "risk-curve",
        "--config",
        cfg_path.to_str().unwrap(),
        "--seed",
        "9",
        "--out",
        dir.join("flag_wins").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = read(&dir.join("flag_wins/risk_mle.csv"));
    assert!(csv.contains("seed=9"));
}

fn tempdir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("bsnr-cli-test-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
