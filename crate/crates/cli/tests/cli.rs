use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn halfweyl(args: &[&str], report: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_halfweyl"));
    cmd.args(args).env_remove("HALFWEYL_REPORT");
    if let Some(p) = report {
        cmd.arg("--report").arg(p);
    }
    cmd.output().unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn lists_every_identity() {
    let out = halfweyl(&["--list-identities"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), halfweyl_cli::REGISTRY.len());
    assert!(text.contains("dtensor.norm_chain"));
    assert!(text.lines().any(|l| l.starts_with("soliton.equation") && l.contains("finite_difference")));
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    for args in [
        vec!["verify", "--model", "torus"],
        vec!["verify", "--model", "s3xr", "--lambda", "-1"],
        vec!["verify", "--model", "s3xr", "--model", "s2xr2", "--lambda", "1"],
        vec!["verify", "--points", "0"],
        vec!["certify", "--bound", "0"],
        vec![],
    ] {
        let out = halfweyl(&args, Some(&report));
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "colour = 3\n").unwrap();
    let out = halfweyl(&["verify", "--config", bad.to_str().unwrap()], Some(&report));
    assert_eq!(out.status.code(), Some(2));
    assert!(!report.exists());
}

#[test]
fn io_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.toml");
    let out = halfweyl(&["verify", "--config", missing.to_str().unwrap()], Some(&dir.path().join("r.json")));
    assert_eq!(out.status.code(), Some(3));

    // a regular file where a directory is needed
    let blocker = dir.path().join("blocker");
    std::fs::write(&blocker, "").unwrap();
    let out = halfweyl(&["verify", "--model", "gaussian", "--points", "2"], Some(&blocker.join("r.json")));
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gaussian_algebraic_residuals_vanish() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("nested/dir/r.json");
    let out = halfweyl(&["verify", "--model", "gaussian", "--points", "10", "--seed", "3"], Some(&report));
    assert_eq!(out.status.code(), Some(0));
    let v = read_json(&report);
    assert_eq!(v["schema"], "halfweyl.report/1");
    assert_eq!(v["config"]["seed"], 3);
    let entries = v["identities"].as_array().unwrap();
    assert!(!entries.is_empty());
    for e in entries.iter().filter(|e| e["tier"] == "algebraic") {
        assert_eq!(e["residual"].as_f64(), Some(0.0), "{e}");
    }
    assert_eq!(v["aggregate"]["failed"], 0);
    assert_eq!(v["exit_code"], 0);
}

#[test]
fn zero_tolerance_config_fails_numerical_checks() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.toml");
    std::fs::write(&cfg, "points_per_model = 5\n[[models]]\nid = \"s2xr2\"\n[tolerance_tiers]\nfd = 0.0\n").unwrap();
    let report = dir.path().join("r.json");
    let out = halfweyl(&["verify", "--config", cfg.to_str().unwrap()], Some(&report));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
    let v = read_json(&report);
    let failed: Vec<&Value> = v["identities"].as_array().unwrap().iter().filter(|e| e["pass"] == false).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|e| e["tier"] == "fd"));
    assert_eq!(v["exit_code"], 1);
}

#[test]
fn environment_names_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let from_env = dir.path().join("env.json");
    let out = Command::new(env!("CARGO_BIN_EXE_halfweyl"))
        .args(["verify", "--model", "cp2_point", "--points", "3"])
        .env("HALFWEYL_REPORT", &from_env)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(from_env.exists());

    let flag = dir.path().join("flag.json");
    let out = Command::new(env!("CARGO_BIN_EXE_halfweyl"))
        .args(["verify", "--model", "cp2_point", "--points", "3", "--report"])
        .arg(&flag)
        .env("HALFWEYL_REPORT", dir.path().join("unused.json"))
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(flag.exists() && !dir.path().join("unused.json").exists());
}

#[test]
fn certify_reports_symbolic_and_sampling_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Value> = [("1", "a.json"), ("2", "b.json")]
        .iter()
        .map(|(seed, name)| {
            let path = dir.path().join(name);
            let out = halfweyl(&["certify", "--samples", "20000", "--seed", seed], Some(&path));
            assert_eq!(out.status.code(), Some(0));
            read_json(&path)
        })
        .collect();
    let names: Vec<&str> =
        runs[0]["certificates"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["timofte_t11", "timofte_tt1", "a1_zero_branch", "critical_points", "sampling"]);
    let symbolic = |v: &Value| v["certificates"].as_array().unwrap()[..4].to_vec();
    assert_eq!(symbolic(&runs[0]), symbolic(&runs[1]));
    assert_ne!(runs[0]["certificates"][4], runs[1]["certificates"][4]);
    assert_eq!(runs[0]["certificates"][4]["sampling"]["samples"], 20000);
}

#[test]
fn zero_samples_pass_with_a_note() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = halfweyl(&["certify", "--samples", "0"], Some(&path));
    assert_eq!(out.status.code(), Some(0));
    let v = read_json(&path);
    let sampling = &v["certificates"][4];
    assert_eq!(sampling["verdict"]["kind"], "certified_nonnegative");
    assert!(sampling["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("0 samples")));
}
