use std::process::{Command, Output};

use serde_json::Value;

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(args)
        .env_remove("SKEWALG_MAX_DEGREE")
        .output()
        .expect("spawn verify")
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = verify(&full);
    let report = serde_json::from_slice(&out.stdout).expect("json on stdout");
    (out.status.code().unwrap(), report)
}

fn strip_durations(report: &mut Value) {
    for check in report["checks"].as_array_mut().unwrap() {
        check.as_object_mut().unwrap().remove("duration_ms");
    }
}

#[test]
fn passing_run_exits_zero() {
    let out = verify(&["mu", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS"));
    assert!(text.trim_end().ends_with("verdict: pass (version 0.1.0)"));
}

#[test]
fn invalid_config_exits_two() {
    for args in [
        &["mu", "--t", "0"][..],
        &["mu", "--trials", "0"],
        &["supermatrix", "--n", "0"],
        &["cayley-hamilton", "--ring", "grassmann"],
        &["grassmann-tower", "--m", "9"],
        &["mu", "--jobs", "0"],
    ] {
        let out = verify(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("invalid config"), "{args:?}");
    }
}

#[test]
fn failing_check_exits_one_with_witness() {
    let out = verify(&["grassmann-tower", "--m", "1", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL       tower-constant-trace"));
    assert!(text.contains("witness seed=42 trial=0"));

    let (code, report) = json_report(&["grassmann-tower", "--m", "1", "--trials", "5"]);
    assert_eq!(code, 1);
    assert_eq!(report["verdict"], "fail");
    let failed = report["checks"].as_array().unwrap().iter().find(|c| c["verdict"] == "fail").unwrap();
    assert_eq!(failed["witness"]["seed"], 42);
    assert!(failed["witness"]["inputs"].as_array().is_some_and(|i| !i.is_empty()));
}

#[test]
fn json_schema() {
    let (code, report) = json_report(&["theta", "--ring", "gaussian", "--trials", "5"]);
    assert_eq!(code, 0);
    let keys: Vec<&str> = report.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["checks", "config", "verdict", "version"]);
    assert_eq!(report["config"]["suite"], "theta");
    assert_eq!(report["config"]["ring"], "gaussian");
    assert_eq!(report["config"]["seed"], 42);
    assert_eq!(report["config"]["trials"], 5);
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
    let checks = report["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for check in checks {
        for key in ["name", "params", "trials", "verdict", "duration_ms"] {
            assert!(check.get(key).is_some(), "missing {key} in {check}");
        }
        assert!(check.get("witness").is_none());
    }
}

#[test]
fn identical_runs_identical_reports() {
    let args = ["supermatrix", "--ring", "grassmann", "--t", "2", "--n", "3", "--k", "1", "--trials", "20"];
    let (_, mut first) = json_report(&args);
    let (_, mut second) = json_report(&args);
    strip_durations(&mut first);
    strip_durations(&mut second);
    assert_eq!(first, second);

    let (_, mut reseeded) = json_report(&[&args[..], &["--seed", "7"]].concat());
    strip_durations(&mut reseeded);
    assert_eq!(reseeded["config"]["seed"], 7);
    assert_ne!(first["config"], reseeded["config"]);
}

#[test]
fn random_seed_is_recorded() {
    let (code, report) = json_report(&["mu", "--seed", "random", "--trials", "3"]);
    assert_eq!(code, 0);
    assert!(report["config"]["seed"].is_u64());
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("skewalg-cli-{}.json", std::process::id()));
    let out = verify(&["mu", "--trials", "5", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(written["verdict"], "pass");
}

#[test]
fn cayley_hamilton_example() {
    let out = verify(&["cayley-hamilton", "--ring", "rotation", "--t", "2", "--n", "2", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn standard_identities_budget_from_env() {
    let run = |value: &str| {
        Command::new(env!("CARGO_BIN_EXE_verify"))
            .args(["standard-identities", "--ring", "rationals", "--t", "2", "--trials", "2", "--format", "json"])
            .env("SKEWALG_MAX_DEGREE", value)
            .output()
            .unwrap()
    };
    let out = run("6");
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["config"]["max_degree"], 6);
    assert_eq!(report["config"]["max_degree_env"], "SKEWALG_MAX_DEGREE");

    assert_eq!(run("lots").status.code(), Some(2));

    let (_, flagged) = json_report(&["standard-identities", "--ring", "rationals", "--t", "2", "--trials", "2", "--max-degree", "5"]);
    assert_eq!(flagged["config"]["max_degree"], 5);
}
