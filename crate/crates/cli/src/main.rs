use std::path::{Path, PathBuf};
use std::process::ExitCode;

use agd::exec::Execution;
use agd::harness::{run_experiment, ExperimentConfig, ExperimentReport, Mode, OUT_DIR_ENV};
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "agd", version, about = "Local search on sparse random graphs and the record process behind it")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one mode (agd, gd, baseline, record-direct, record-jump, poisson-rep).
    Simulate {
        #[arg(long)]
        mode: Option<Mode>,
        #[command(flatten)]
        common: Common,
    },
    /// Convergence sweep of AGD explorations over increasing n.
    Sweep {
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<usize>>,
        #[command(flatten)]
        common: Common,
    },
    /// Check the analytic identities; exits 2 when any check fails.
    VerifyAnalytics {
        #[arg(long, value_delimiter = ',')]
        a_list: Option<Vec<u64>>,
        #[command(flatten)]
        common: Common,
    },
    /// Couple AGD with the record process on shared costs.
    Couple {
        #[command(flatten)]
        common: Common,
    },
    /// Compare AGD against the first-improvement baseline; exits 2 on failure.
    Dominate {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Record threshold A, overriding the value derived from n.
    #[arg(long)]
    threshold: Option<u64>,
    #[arg(long)]
    reps: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output stem; `<stem>.json` and `<stem>.csv` are written.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run replications on one thread.
    #[arg(long)]
    sequential: bool,
}

impl Common {
    /// Loads the config file if given, then applies flags. `mode`, when set,
    /// overrides the file's mode.
    fn build(&self, mode: Option<Mode>) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                ExperimentConfig::from_json(&text)?
            }
            None => ExperimentConfig::new(mode.unwrap_or(Mode::Agd)),
        };
        if let Some(m) = mode {
            cfg.mode = m;
        }
        macro_rules! set {
            ($($f:ident => $t:ident),*) => { $(if let Some(v) = self.$f.clone() { cfg.$t = v; })* };
        }
        set!(lambda => lambda, alpha => alpha, beta => beta, reps => replications, seed => master_seed);
        if self.n.is_some() {
            cfg.n = self.n;
        }
        if self.threshold.is_some() {
            cfg.threshold = self.threshold;
        }
        if self.out.is_some() {
            cfg.output = self.out.clone();
        }
        if self.sequential {
            cfg.execution = Execution::Sequential;
        }
        Ok(cfg)
    }
}

fn output_stem(cfg: &ExperimentConfig) -> Option<PathBuf> {
    cfg.output.clone().or_else(|| {
        std::env::var_os(OUT_DIR_ENV)
            .map(|dir| Path::new(&dir).join(format!("{}-seed{}", cfg.mode.as_str(), cfg.master_seed)))
    })
}

fn config_for(command: Command) -> Result<(ExperimentConfig, bool)> {
    Ok(match command {
        Command::Simulate { mode, common } => (common.build(mode)?, false),
        Command::Sweep { n_list, common } => {
            let mut cfg = common.build(Some(Mode::Sweep))?;
            if n_list.is_some() {
                cfg.n_list = n_list;
            }
            (cfg, false)
        }
        Command::VerifyAnalytics { a_list, common } => {
            let mut cfg = common.build(Some(Mode::VerifyAnalytics))?;
            if a_list.is_some() {
                cfg.a_list = a_list;
            }
            (cfg, true)
        }
        Command::Couple { common } => (common.build(Some(Mode::Coupled))?, false),
        Command::Dominate { common } => (common.build(Some(Mode::Dominance))?, true),
    })
}

fn emit(report: &ExperimentReport, stem: Option<PathBuf>) -> Result<()> {
    match stem {
        Some(stem) => {
            if let Some(parent) = stem.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            let (json, csv) = report.write(&stem)?;
            eprintln!("wrote {} and {}", json.display(), csv.display());
        }
        None => println!("{}", report.to_json()?),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cfg, gated) = match config_for(cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let report = match run_experiment(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = emit(&report, output_stem(&cfg)) {
        eprintln!("error writing report: {e:#}");
        return ExitCode::from(1);
    }
    for c in &report.checks {
        eprintln!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    if gated && !report.all_checks_passed() {
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
