//! Experiment orchestration: configuration, replication, aggregation and
//! report persistence.

pub mod config;
pub mod experiment;
pub mod report;

pub use config::{ExperimentConfig, Mode};
pub use experiment::{
    agd_replication, baseline_replication, convergence_sweep, coupled_compare, dominance_check, gd_replication,
    poisson_replication, record_direct_replication, record_jump_replication, run_experiment, verify_analytics,
};
pub use report::{read_sweep_csv, write_atomic, CheckResult, CoupledReport, DominanceReport, ExperimentReport, StatRow, SweepRow};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "AGD_OUT_DIR";
