//! Replication kernels and the experiment drivers built on them.

use std::time::Instant;

use rand::Rng;

use crate::analytics::{
    asymptotic_means, harmonic, mean_class_count_at_barrier, mean_s_tilde, survival_tau, survival_tau_oracle,
    var_bounds, AnalyticReport, QuadratureSpec, EULER_GAMMA,
};
use crate::error::{Error, Result};
use crate::exec::{replicate, Execution};
use crate::graph::{sample_explicit, EdgeOracle};
use crate::model::{rng_from_seed, subseed, CostStream, ModelParams, RNG_NAME, TAG_AUX, TAG_COST, TAG_EDGE, TAG_WALK};
use crate::poisson::simulate_representation;
use crate::record::{run_record_direct, run_record_jump, RecordOutcome};
use crate::search::{run_agd, run_baseline, run_gd, SearchOutcome, StreamCosts};
use crate::stats::{pooled_se, Ecdf, Summary};

use super::config::{ExperimentConfig, Mode};
use super::report::{
    CheckResult, CoupledReport, DecileRow, DominanceReport, ExperimentReport, Metadata, StatRow, SweepRow,
};

const ORIENTATION_NOTE: &str =
    "running minimum: records are new lows, jumps uniform on (0, Y_j), terminal residence >= A";

fn start_vertex(params: &ModelParams, seed: u64) -> usize {
    rng_from_seed(subseed(seed, TAG_WALK)).gen_range(0..params.n)
}

/// AGD on the lazy oracle for one replication seed.
pub fn agd_replication(params: &ModelParams, seed: u64) -> Result<SearchOutcome> {
    let mut oracle = EdgeOracle::new(params, subseed(seed, TAG_EDGE));
    let mut costs = StreamCosts::new(CostStream::new(subseed(seed, TAG_COST)));
    run_agd(&mut oracle, params, &mut costs, start_vertex(params, seed))
}

/// First-improvement baseline on the lazy oracle.
pub fn baseline_replication(params: &ModelParams, seed: u64) -> Result<SearchOutcome> {
    let mut oracle = EdgeOracle::new(params, subseed(seed, TAG_EDGE));
    let mut costs = StreamCosts::new(CostStream::new(subseed(seed, TAG_COST)));
    run_baseline(&mut oracle, params, &mut costs, start_vertex(params, seed))
}

/// GD on a freshly sampled explicit graph.
pub fn gd_replication(params: &ModelParams, seed: u64) -> Result<SearchOutcome> {
    let graph = sample_explicit(params, subseed(seed, TAG_EDGE))?;
    let mut costs = StreamCosts::new(CostStream::new(subseed(seed, TAG_COST)));
    run_gd(&graph, &mut costs, start_vertex(params, seed))
}

pub fn record_direct_replication(a: u64, seed: u64) -> Result<RecordOutcome> {
    run_record_direct(a, &mut CostStream::new(subseed(seed, TAG_COST)))
}

pub fn record_jump_replication(a: u64, seed: u64) -> Result<RecordOutcome> {
    run_record_jump(a, &mut rng_from_seed(subseed(seed, TAG_AUX)))
}

/// `(S̃, Ṽ)` from the marked Poisson representation.
pub fn poisson_replication(a: u64, seed: u64) -> Result<(u64, u64)> {
    let r = simulate_representation(a, &mut rng_from_seed(subseed(seed, TAG_AUX)))?;
    Ok((r.s_tilde, r.v_tilde))
}

fn collect<T: Send>(
    reps: u64,
    seed: u64,
    exec: Execution,
    f: impl Fn(u64) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    replicate(reps, seed, exec, |_, s| f(s)).into_iter().collect()
}

fn summarize<T>(xs: &[T], f: impl Fn(&T) -> f64) -> Summary {
    Summary::from_slice(&xs.iter().map(f).collect::<Vec<_>>())
}

fn search_rows(outcomes: &[SearchOutcome], params: &ModelParams) -> Result<Vec<StatRow>> {
    let exact = mean_s_tilde(params.threshold as u64)?;
    Ok(vec![
        StatRow::new("steps", &summarize(outcomes, |o| o.steps as f64))
            .with_reference(exact / params.beta, "exp(H_{A-1})/beta"),
        StatRow::new("visits", &summarize(outcomes, |o| o.visits as f64)),
        StatRow::new("explorations", &summarize(outcomes, |o| o.explorations as f64))
            .with_reference(exact, "exp(H_{A-1})"),
        StatRow::new("verified_local_min", &summarize(outcomes, |o| o.verified_local_min as u8 as f64)),
    ])
}

fn record_rows(s: &[f64], v: &[f64], a: u64) -> Result<Vec<StatRow>> {
    Ok(vec![
        StatRow::new("s_tilde", &Summary::from_slice(s)).with_reference(mean_s_tilde(a)?, "exp(H_{A-1})"),
        StatRow::new("v_tilde", &Summary::from_slice(v)),
    ])
}

/// Couples AGD and the record process on one cost stream per replication.
pub fn coupled_compare(params: &ModelParams, reps: u64, master_seed: u64, exec: Execution) -> Result<CoupledReport> {
    if reps == 0 {
        return Err(Error::Config("replications must be at least 1".into()));
    }
    let a = params.threshold as u64;
    let scale = params.scale();
    let rows = collect(reps, master_seed, exec, |seed| {
        let cost_seed = subseed(seed, TAG_COST);
        let mut oracle = EdgeOracle::new(params, subseed(seed, TAG_EDGE));
        let mut costs = StreamCosts::new(CostStream::new(cost_seed));
        let agd = run_agd(&mut oracle, params, &mut costs, start_vertex(params, seed))?;
        let rec = run_record_direct(a, &mut CostStream::new(cost_seed))?;
        let shared = costs.revealed_costs().first().copied() == rec.jumps.first().copied();
        Ok((agd, rec.s_tilde, shared))
    })?;
    let beta = params.beta;
    Ok(CoupledReport {
        n: params.n,
        a,
        l1_explorations: summarize(&rows, |(o, s, _)| (o.explorations as f64 - *s as f64).abs()),
        l1_scaled_steps: summarize(&rows, |(o, s, _)| (o.steps as f64 / scale - *s as f64 / (beta * scale)).abs()),
        abs_steps_diff: summarize(&rows, |(o, s, _)| (o.steps as f64 - *s as f64 / beta).abs()),
        mean_explorations: summarize(&rows, |(o, _, _)| o.explorations as f64),
        mean_s_tilde: summarize(&rows, |(_, s, _)| *s as f64),
        first_cost_shared: rows.iter().all(|r| r.2),
    })
}

/// AGD against the first-improvement baseline on independent graphs and costs.
pub fn dominance_check(params: &ModelParams, reps: u64, master_seed: u64, exec: Execution) -> Result<DominanceReport> {
    if reps == 0 {
        return Err(Error::Config("replications must be at least 1".into()));
    }
    let pairs = collect(reps, master_seed, exec, |seed| {
        let agd = agd_replication(params, seed)?;
        let base = baseline_replication(params, subseed(seed, 0xba5e))?;
        Ok((agd, base))
    })?;
    let agd_e: Vec<f64> = pairs.iter().map(|p| p.0.explorations as f64).collect();
    let base_e: Vec<f64> = pairs.iter().map(|p| p.1.explorations as f64).collect();
    let agd = Summary::from_slice(&agd_e);
    let baseline = Summary::from_slice(&base_e);
    let se = pooled_se(&agd, &baseline);
    let agd_cdf = Ecdf::new(agd_e);
    let base_cdf = Ecdf::new(base_e);
    let deciles = (1..=9)
        .map(|d| {
            let q = d as f64 / 10.0;
            let (x, y) = (agd_cdf.quantile(q), base_cdf.quantile(q));
            DecileRow { q, agd: x, baseline: y, agd_not_above: x <= y }
        })
        .collect();
    Ok(DominanceReport {
        passed: agd.mean <= baseline.mean + 3.0 * se,
        agd,
        baseline,
        pooled_se: se,
        deciles,
        ks_one_sided: base_cdf.one_sided_ks(&agd_cdf),
        agd_all_verified: pairs.iter().all(|p| p.0.verified_local_min),
        baseline_all_verified: pairs.iter().all(|p| p.1.verified_local_min),
    })
}

/// Mean explorations and steps against the exact and first-order references, per `n`.
pub fn convergence_sweep(
    n_list: &[usize],
    template: &ExperimentConfig,
    reps: u64,
    master_seed: u64,
    exec: Execution,
) -> Result<Vec<SweepRow>> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("n_list must be nonempty and strictly ascending".into()));
    }
    n_list
        .iter()
        .map(|&n| {
            let params = template.params_for(n)?;
            let outcomes = collect(reps, master_seed, exec, |seed| agd_replication(&params, seed))?;
            let e = summarize(&outcomes, |o| o.explorations as f64);
            let s = summarize(&outcomes, |o| o.steps as f64);
            let a = params.threshold as u64;
            let ref_exact = mean_s_tilde(a)?;
            let ref_asym = asymptotic_means(&params).1;
            Ok(SweepRow {
                n,
                a,
                mean_e: e.mean,
                ref_exact,
                ref_asym,
                ratio_exact: e.mean / ref_exact,
                ratio_asym: e.mean / ref_asym,
                ci: e.ci_halfwidth,
                mean_s: s.mean,
            })
        })
        .collect()
}

/// Analytic identity suite: quadrature against the binomial-transform
/// oracle, the Campbell consistency identity, the Campbell upper bound and
/// the ordering of the variance bracket.
pub fn verify_analytics(a_list: &[u64], quad: &QuadratureSpec) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();

    let mut worst = 0.0f64;
    for j in 1..=5 {
        for k in 0..=50 {
            worst = worst.max((survival_tau(j, k, quad)? - survival_tau_oracle(j, k)?).abs());
        }
    }
    checks.push(CheckResult {
        name: "survival_quadrature_vs_binomial_transform".into(),
        passed: worst < 1e-8,
        detail: format!("max |difference| over j<=5, k<=50 = {worst:.3e} (tolerance 1e-8)"),
    });

    for &a in a_list {
        let counts: Vec<f64> = (1..a).map(|i| mean_class_count_at_barrier(i, a, quad)).collect::<Result<_>>()?;
        let lhs = a as f64 + counts.iter().enumerate().map(|(i, m)| (i + 1) as f64 * m).sum::<f64>();
        let exact = mean_s_tilde(a)?;
        let rel = (lhs - exact).abs() / exact;
        checks.push(CheckResult {
            name: format!("campbell_consistency_A={a}"),
            passed: rel < 1e-6,
            detail: format!("A + sum i*E N_i = {lhs:.12}, exp(H_(A-1)) = {exact:.12}, rel err {rel:.3e}"),
        });
        let bound_ok = counts.iter().enumerate().all(|(i, &m)| m <= 1.0 / (i + 1) as f64 + 1e-12);
        checks.push(CheckResult {
            name: format!("campbell_below_unstopped_mean_A={a}"),
            passed: bound_ok,
            detail: "E N_i at the barrier <= 1/i".into(),
        });
        let b = var_bounds(a)?;
        checks.push(CheckResult {
            name: format!("variance_bracket_ordered_A={a}"),
            passed: b.is_ordered(),
            detail: format!("lower = {:.6}, upper = {:.6}", b.lower, b.upper),
        });
    }
    Ok(checks)
}

/// Runs the configured experiment; writes nothing.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let started = Instant::now();
    let reps = config.replications;
    let seed = config.master_seed;
    let exec = config.execution;
    let mut analytic = None;
    let mut statistics = Vec::new();
    let mut checks = Vec::new();
    let mut sweep = None;
    let mut coupled = None;
    let mut dominance = None;

    match config.mode {
        Mode::Agd | Mode::Baseline | Mode::Gd => {
            let params = config.params()?;
            let kernel = match config.mode {
                Mode::Agd => agd_replication,
                Mode::Baseline => baseline_replication,
                _ => gd_replication,
            };
            let outcomes = collect(reps, seed, exec, |s| kernel(&params, s))?;
            analytic = Some(AnalyticReport::for_params(&params)?);
            statistics = search_rows(&outcomes, &params)?;
        }
        Mode::RecordDirect | Mode::RecordJump => {
            let a = config.record_threshold()?;
            let kernel = if config.mode == Mode::RecordDirect {
                record_direct_replication
            } else {
                record_jump_replication
            };
            let outs = collect(reps, seed, exec, |s| kernel(a, s))?;
            let s: Vec<f64> = outs.iter().map(|o| o.s_tilde as f64).collect();
            let v: Vec<f64> = outs.iter().map(|o| o.v_tilde as f64).collect();
            analytic = Some(AnalyticReport::for_threshold(a)?);
            statistics = record_rows(&s, &v, a)?;
        }
        Mode::PoissonRep => {
            let a = config.record_threshold()?;
            let outs = collect(reps, seed, exec, |s| poisson_replication(a, s))?;
            let s: Vec<f64> = outs.iter().map(|o| o.0 as f64).collect();
            let v: Vec<f64> = outs.iter().map(|o| o.1 as f64).collect();
            analytic = Some(AnalyticReport::for_threshold(a)?);
            statistics = record_rows(&s, &v, a)?;
        }
        Mode::Coupled => {
            let params = config.params()?;
            let c = coupled_compare(&params, reps, seed, exec)?;
            analytic = Some(AnalyticReport::for_params(&params)?);
            statistics = vec![
                StatRow::new("abs_explorations_minus_s_tilde", &c.l1_explorations),
                StatRow::new("abs_scaled_steps_minus_scaled_s_tilde", &c.l1_scaled_steps),
                StatRow::new("abs_steps_minus_s_tilde_over_beta", &c.abs_steps_diff),
                StatRow::new("explorations", &c.mean_explorations)
                    .with_reference(mean_s_tilde(c.a)?, "exp(H_{A-1})"),
                StatRow::new("s_tilde", &c.mean_s_tilde).with_reference(mean_s_tilde(c.a)?, "exp(H_{A-1})"),
            ];
            coupled = Some(c);
        }
        Mode::Dominance => {
            let params = config.params()?;
            let d = dominance_check(&params, reps, seed, exec)?;
            analytic = Some(AnalyticReport::for_params(&params)?);
            statistics = vec![
                StatRow::new("agd_explorations", &d.agd),
                StatRow::new("baseline_explorations", &d.baseline),
            ];
            checks.push(CheckResult {
                name: "mean_agd_le_mean_baseline_plus_3se".into(),
                passed: d.passed,
                detail: format!("{:.4} <= {:.4} + 3*{:.4}", d.agd.mean, d.baseline.mean, d.pooled_se),
            });
            dominance = Some(d);
        }
        Mode::Sweep => {
            let list = config.n_list.clone().unwrap_or_default();
            sweep = Some(convergence_sweep(&list, config, reps, seed, exec)?);
        }
        Mode::VerifyAnalytics => {
            let list = config.a_list.clone().unwrap_or_else(|| vec![2, 5, 10, 50]);
            checks = verify_analytics(&list, &config.quad())?;
        }
    }

    Ok(ExperimentReport {
        config: config.clone(),
        metadata: Metadata {
            master_seed: seed,
            rng: RNG_NAME.to_string(),
            record_orientation: ORIENTATION_NOTE.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_seconds: started.elapsed().as_secs_f64(),
        },
        analytic,
        statistics,
        checks,
        sweep,
        coupled,
        dominance,
    })
}

/// Asymptotic ratio `e^{H_{A-1}} / (e^γ (A-1))`, handy for sweeps.
pub fn exact_to_asymptotic_ratio(a: u64) -> f64 {
    (harmonic(a - 1) - EULER_GAMMA).exp() / (a - 1) as f64
}
