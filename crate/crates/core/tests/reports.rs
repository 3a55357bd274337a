use agd::harness::{read_sweep_csv, run_experiment, write_atomic, ExperimentConfig, Mode};
use agd::Error;

#[test]
fn sweep_csv_round_trips_through_disk() {
    let mut cfg = ExperimentConfig::new(Mode::Sweep);
    cfg.n_list = Some(vec![400, 1_600]);
    cfg.replications = 200;
    cfg.master_seed = 11;
    let report = run_experiment(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let (json_path, csv_path) = report.write(&dir.path().join("sweep")).unwrap();

    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert!(text.starts_with("n,A,mean_E,ref_exact,ref_asym,ratio_exact,ratio_asym,ci,mean_S\n"));
    let rows = read_sweep_csv(&text).unwrap();
    assert_eq!(&rows, report.sweep.as_ref().unwrap());
    assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![400, 1_600]);
    assert_eq!(rows.iter().map(|r| r.a).collect::<Vec<_>>(), vec![20, 40]);

    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json_path).unwrap()).unwrap();
    assert_eq!(json["config"]["mode"], "sweep");
    assert_eq!(json["metadata"]["master_seed"], 11);
    assert_eq!(json["sweep"].as_array().unwrap().len(), 2);
}

#[test]
fn stat_csv_has_one_row_per_statistic() {
    let mut cfg = ExperimentConfig::new(Mode::RecordDirect);
    cfg.threshold = Some(6);
    cfg.replications = 500;
    let report = run_experiment(&cfg).unwrap();
    let csv = report.to_csv().unwrap();
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let header = reader.headers().unwrap().clone();
    assert_eq!(header.len(), 15);
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), report.statistics.len());
    assert_eq!(&rows[0][8], "s_tilde");
    assert_eq!(&rows[0][13], "exp(H_{A-1})");
}

#[test]
fn verify_analytics_report_lists_every_check() {
    let mut cfg = ExperimentConfig::new(Mode::VerifyAnalytics);
    cfg.a_list = Some(vec![3, 7]);
    let report = run_experiment(&cfg).unwrap();
    // survival agreement, then consistency, Campbell bound and bracket per A
    assert_eq!(report.checks.len(), 1 + 2 * 3);
    assert!(report.checks.iter().filter(|c| c.name.starts_with("campbell")).all(|c| c.passed));
    assert!(report.checks[0].passed);
    assert!(!report.all_checks_passed());
}

#[test]
fn atomic_write_replaces_and_leaves_no_temporaries() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested").join("out.json");
    write_atomic(&path, b"first").unwrap();
    write_atomic(&path, b"second").unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), b"second");
    let entries: Vec<_> = std::fs::read_dir(path.parent().unwrap()).unwrap().collect();
    assert_eq!(entries.len(), 1);
}

#[test]
fn config_errors_surface_before_running() {
    let missing_n = ExperimentConfig::new(Mode::Agd);
    assert!(matches!(run_experiment(&missing_n), Err(Error::Config(_))));

    let mut unsorted = ExperimentConfig::new(Mode::Sweep);
    unsorted.n_list = Some(vec![1_000, 100]);
    assert!(matches!(run_experiment(&unsorted), Err(Error::Config(_))));

    let mut big_gd = ExperimentConfig::new(Mode::Gd);
    big_gd.n = Some(1_000_000);
    assert!(matches!(run_experiment(&big_gd), Err(Error::Config(_))));

    let mut zero = ExperimentConfig::new(Mode::RecordJump);
    zero.threshold = Some(5);
    zero.replications = 0;
    assert!(matches!(run_experiment(&zero), Err(Error::Config(_))));

    assert!(ExperimentConfig::from_json(r#"{"mode":"agd","n":100,"bogus":1}"#).is_err());
    let cfg = ExperimentConfig::from_json(r#"{"mode":"record-jump","threshold":9,"master_seed":4}"#).unwrap();
    assert_eq!((cfg.threshold, cfg.replications, cfg.lambda), (Some(9), 1000, 1.0));
}
