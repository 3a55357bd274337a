use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analytics::AnalyticReport;
use crate::error::Result;
use crate::stats::Summary;

use super::config::ExperimentConfig;

/// One summarised statistic with its analytic reference, when one exists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatRow {
    pub statistic: String,
    pub mean: f64,
    pub variance: f64,
    pub ci_halfwidth: f64,
    pub reference: Option<f64>,
    pub reference_formula: Option<String>,
    pub ratio: Option<f64>,
}

impl StatRow {
    pub fn new(statistic: &str, summary: &Summary) -> Self {
        StatRow {
            statistic: statistic.to_string(),
            mean: summary.mean,
            variance: summary.variance,
            ci_halfwidth: summary.ci_halfwidth,
            reference: None,
            reference_formula: None,
            ratio: None,
        }
    }

    pub fn with_reference(mut self, value: f64, formula: &str) -> Self {
        self.reference = Some(value);
        self.reference_formula = Some(formula.to_string());
        self.ratio = Some(self.mean / value);
        self
    }
}

/// Pass/fail item from an analytic identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Row of a convergence sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: u64,
    #[serde(rename = "mean_E")]
    pub mean_e: f64,
    pub ref_exact: f64,
    pub ref_asym: f64,
    pub ratio_exact: f64,
    pub ratio_asym: f64,
    pub ci: f64,
    #[serde(rename = "mean_S")]
    pub mean_s: f64,
}

/// Coupled comparison of AGD and the record process on one cost stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupledReport {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: u64,
    /// `|E - S̃|`.
    pub l1_explorations: Summary,
    /// `|S/n^{1-α} - S̃/(β n^{1-α})|`.
    pub l1_scaled_steps: Summary,
    /// `|S - S̃/β|`.
    pub abs_steps_diff: Summary,
    pub mean_explorations: Summary,
    pub mean_s_tilde: Summary,
    /// Every replication's first revealed cost equalled the record process's first value.
    pub first_cost_shared: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecileRow {
    pub q: f64,
    pub agd: f64,
    pub baseline: f64,
    pub agd_not_above: bool,
}

/// AGD against the first-improvement baseline on independent instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub agd: Summary,
    pub baseline: Summary,
    pub pooled_se: f64,
    /// `mean_agd <= mean_baseline + 3 · pooled_se`.
    pub passed: bool,
    pub deciles: Vec<DecileRow>,
    /// `sup_x (F_baseline(x) - F_agd(x))`; informational.
    pub ks_one_sided: f64,
    pub agd_all_verified: bool,
    pub baseline_all_verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub master_seed: u64,
    pub rng: String,
    pub record_orientation: String,
    pub version: String,
    pub wall_time_seconds: f64,
}

/// Everything one experiment produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub metadata: Metadata,
    pub analytic: Option<AnalyticReport>,
    pub statistics: Vec<StatRow>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sweep: Option<Vec<SweepRow>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coupled: Option<CoupledReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dominance: Option<DominanceReport>,
}

/// Header of the statistics CSV.
pub const STAT_CSV_HEADER: [&str; 15] = [
    "mode",
    "n",
    "lambda",
    "alpha",
    "beta",
    "threshold",
    "replications",
    "master_seed",
    "statistic",
    "mean",
    "variance",
    "ci_halfwidth",
    "reference",
    "reference_formula",
    "ratio",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl ExperimentReport {
    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// CSV body for this report's mode: the sweep table, the check list, or
    /// one row per statistic.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if let Some(rows) = &self.sweep {
            for r in rows {
                w.serialize(r)?;
            }
            if rows.is_empty() {
                w.write_record(SWEEP_CSV_HEADER)?;
            }
        } else if !self.checks.is_empty() {
            w.write_record(["name", "passed", "detail"])?;
            for c in &self.checks {
                w.write_record([c.name.as_str(), &c.passed.to_string(), c.detail.as_str()])?;
            }
        } else {
            w.write_record(STAT_CSV_HEADER)?;
            let c = &self.config;
            let threshold = self.analytic.map(|a| a.threshold).or(c.threshold);
            for s in &self.statistics {
                w.write_record([
                    c.mode.as_str().to_string(),
                    opt(c.n),
                    c.lambda.to_string(),
                    c.alpha.to_string(),
                    c.beta.to_string(),
                    opt(threshold),
                    c.replications.to_string(),
                    c.master_seed.to_string(),
                    s.statistic.clone(),
                    s.mean.to_string(),
                    s.variance.to_string(),
                    s.ci_halfwidth.to_string(),
                    opt(s.reference),
                    s.reference_formula.clone().unwrap_or_default(),
                    opt(s.ratio),
                ])?;
            }
        }
        let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Writes `<stem>.json` and `<stem>.csv`, each atomically.
    pub fn write(&self, stem: &Path) -> Result<(PathBuf, PathBuf)> {
        let json_path = stem.with_extension("json");
        let csv_path = stem.with_extension("csv");
        write_atomic(&json_path, self.to_json()?.as_bytes())?;
        write_atomic(&csv_path, self.to_csv()?.as_bytes())?;
        Ok((json_path, csv_path))
    }
}

/// Header of the sweep CSV.
pub const SWEEP_CSV_HEADER: [&str; 9] =
    ["n", "A", "mean_E", "ref_exact", "ref_asym", "ratio_exact", "ratio_asym", "ci", "mean_S"];

/// Parses a sweep CSV written by [`ExperimentReport::to_csv`].
pub fn read_sweep_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let rows = r.deserialize().collect::<std::result::Result<Vec<SweepRow>, _>>()?;
    Ok(rows)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
