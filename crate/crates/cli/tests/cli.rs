use std::process::{Command, Output};

fn agd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agd"))
        .args(args)
        .env_remove("AGD_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a json report")
}

#[test]
fn simulate_prints_report_to_stdout() {
    let out = agd(&["simulate", "--mode", "record-jump", "--threshold", "8", "--reps", "200", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["config"]["threshold"], 8);
    assert_eq!(report["statistics"][0]["statistic"], "s_tilde");
    assert_eq!(report["metadata"]["master_seed"], 3);
}

#[test]
fn config_file_values_are_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"mode":"agd","n":900,"replications":50,"master_seed":1}"#).unwrap();
    let out = agd(&["simulate", "--config", cfg.to_str().unwrap(), "--reps", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["config"]["mode"], "agd");
    assert_eq!(report["config"]["n"], 900);
    assert_eq!(report["config"]["replications"], 20);
    assert_eq!(report["analytic"]["threshold"], 30);
}

#[test]
fn out_flag_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("runs").join("sweep");
    let out = agd(&[
        "sweep", "--n-list", "100,400", "--reps", "50", "--out", stem.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(stem.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(stem.with_extension("json").exists());
}

#[test]
fn env_var_sets_default_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_agd"))
        .args(["couple", "--n", "400", "--reps", "30", "--seed", "9"])
        .env("AGD_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("coupled-seed9.json").exists());
    assert!(dir.path().join("coupled-seed9.csv").exists());

    // the flag wins over the environment
    let elsewhere = tempfile::tempdir().unwrap();
    let stem = elsewhere.path().join("mine");
    let out = Command::new(env!("CARGO_BIN_EXE_agd"))
        .args(["couple", "--n", "400", "--reps", "30", "--out", stem.to_str().unwrap()])
        .env("AGD_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stem.with_extension("json").exists());
}

#[test]
fn config_errors_exit_with_one() {
    assert_eq!(agd(&["simulate", "--mode", "agd"]).status.code(), Some(1));
    assert_eq!(agd(&["sweep", "--n-list", "1000,10"]).status.code(), Some(1));
    assert_eq!(agd(&["simulate", "--config", "/nonexistent/cfg.json"]).status.code(), Some(1));
    assert_eq!(agd(&["simulate", "--mode", "poisson-rep", "--threshold", "1"]).status.code(), Some(1));
}

#[test]
fn verify_analytics_exits_two_on_failed_checks() {
    // the variance bracket is inverted for every A >= 2
    let out = agd(&["verify-analytics", "--a-list", "2,5"]);
    assert_eq!(out.status.code(), Some(2));
    let report = json(&out);
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"] == "campbell_consistency_A=5" && c["passed"] == true));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL variance_bracket_ordered_A=2"));
}

#[test]
fn dominate_passes_on_moderate_graph() {
    let out = agd(&["dominate", "--n", "2500", "--reps", "200", "--seed", "5", "--sequential"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["dominance"]["passed"], true);
    assert_eq!(report["dominance"]["deciles"].as_array().unwrap().len(), 9);
}
