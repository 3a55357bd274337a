use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::analytics::QuadratureSpec;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::{derive_params, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Agd,
    Gd,
    Baseline,
    RecordDirect,
    RecordJump,
    PoissonRep,
    Coupled,
    Dominance,
    Sweep,
    VerifyAnalytics,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Agd => "agd",
            Mode::Gd => "gd",
            Mode::Baseline => "baseline",
            Mode::RecordDirect => "record-direct",
            Mode::RecordJump => "record-jump",
            Mode::PoissonRep => "poisson-rep",
            Mode::Coupled => "coupled",
            Mode::Dominance => "dominance",
            Mode::Sweep => "sweep",
            Mode::VerifyAnalytics => "verify-analytics",
        }
    }

    fn needs_graph_params(&self) -> bool {
        matches!(self, Mode::Agd | Mode::Gd | Mode::Baseline | Mode::Coupled | Mode::Dominance)
    }

    fn is_record(&self) -> bool {
        matches!(self, Mode::RecordDirect | Mode::RecordJump | Mode::PoissonRep)
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::Config(format!("unknown mode {s:?}")))
    }
}

fn default_lambda() -> f64 {
    1.0
}
fn default_alpha() -> f64 {
    0.5
}
fn default_beta() -> f64 {
    1.0
}
fn default_reps() -> u64 {
    1000
}

/// One experiment, as given on the command line or in a JSON config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    /// Record threshold for the record and Poisson modes; derived from the
    /// graph parameters when absent.
    #[serde(default)]
    pub threshold: Option<u64>,
    #[serde(default = "default_reps")]
    pub replications: u64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub n_list: Option<Vec<usize>>,
    #[serde(default)]
    pub a_list: Option<Vec<u64>>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub quadrature: Option<QuadratureSpec>,
    #[serde(default, skip_serializing)]
    pub execution: Execution,
}

impl ExperimentConfig {
    pub fn new(mode: Mode) -> Self {
        ExperimentConfig {
            mode,
            n: None,
            lambda: default_lambda(),
            alpha: default_alpha(),
            beta: default_beta(),
            threshold: None,
            replications: default_reps(),
            master_seed: 0,
            n_list: None,
            a_list: None,
            output: None,
            quadrature: None,
            execution: Execution::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn quad(&self) -> QuadratureSpec {
        self.quadrature.unwrap_or_default()
    }

    /// Graph parameters for `n`, taking λ, α, β from this config.
    pub fn params_for(&self, n: usize) -> Result<ModelParams> {
        derive_params(n, self.lambda, self.alpha, self.beta).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn params(&self) -> Result<ModelParams> {
        let n = self.n.ok_or_else(|| Error::Config(format!("mode {} requires n", self.mode.as_str())))?;
        self.params_for(n)
    }

    /// Threshold for record modes: explicit `threshold`, else `⌈λ n^{1-α}⌉`.
    pub fn record_threshold(&self) -> Result<u64> {
        match (self.threshold, self.n) {
            (Some(a), _) => Ok(a),
            (None, Some(_)) => Ok(self.params()?.threshold as u64),
            (None, None) => Err(Error::Config(format!(
                "mode {} requires a threshold or n",
                self.mode.as_str()
            ))),
        }
    }

    /// Checks mode-specific parameter presence before anything runs.
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        if let Some(q) = &self.quadrature {
            q.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        if self.mode.needs_graph_params() {
            self.params()?;
        }
        if self.mode.is_record() {
            let a = self.record_threshold()?;
            if a == 0 || (self.mode == Mode::PoissonRep && a < 2) {
                return Err(Error::Config(format!("threshold {a} too small for {}", self.mode.as_str())));
            }
        }
        match self.mode {
            Mode::Sweep => {
                let list = self.n_list.as_ref().ok_or_else(|| Error::Config("sweep requires n_list".into()))?;
                if list.is_empty() || list.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Config("n_list must be nonempty and strictly ascending".into()));
                }
                for &n in list {
                    self.params_for(n)?;
                }
            }
            Mode::VerifyAnalytics => {
                if let Some(list) = &self.a_list {
                    if list.is_empty() || list.iter().any(|&a| a < 2) {
                        return Err(Error::Config("a_list entries must be at least 2".into()));
                    }
                }
            }
            Mode::Gd => {
                let n = self.params()?.n;
                if n > crate::graph::DEFAULT_EXPLICIT_CAP {
                    return Err(Error::Config(format!(
                        "gd needs an explicit graph; n={n} exceeds the cap {}",
                        crate::graph::DEFAULT_EXPLICIT_CAP
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_config_defaults_and_validation() {
        let c = ExperimentConfig::from_json(r#"{"mode":"record-jump","threshold":20,"replications":10}"#).unwrap();
        assert_eq!(c.mode, Mode::RecordJump);
        assert_eq!(c.lambda, 1.0);
        c.validate().unwrap();

        let bad = ExperimentConfig::from_json(r#"{"mode":"agd"}"#).unwrap();
        assert!(matches!(bad.validate(), Err(Error::Config(_))));
        assert!(ExperimentConfig::from_json(r#"{"mode":"nope"}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"mode":"agd","bogus":1}"#).is_err());

        let mut sweep = ExperimentConfig::new(Mode::Sweep);
        sweep.n_list = Some(vec![1000, 100]);
        assert!(sweep.validate().is_err());
        sweep.n_list = Some(vec![100, 1000]);
        sweep.validate().unwrap();

        let mut zero = ExperimentConfig::new(Mode::RecordJump);
        zero.threshold = Some(5);
        zero.replications = 0;
        assert!(zero.validate().is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("poisson-rep".parse::<Mode>().unwrap(), Mode::PoissonRep);
        assert_eq!(Mode::VerifyAnalytics.as_str(), "verify-analytics");
        assert!("x".parse::<Mode>().is_err());
    }
}
