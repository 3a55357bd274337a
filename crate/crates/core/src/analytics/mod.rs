//! Closed forms and quadratures for the record process and its Poisson
//! representation. These are the reference values every simulator is
//! checked against.

pub mod quadrature;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::poisson::intensity_unchecked;
pub use quadrature::{integrate, integrate_half_line, Estimate, QuadratureSpec};

/// Euler–Mascheroni constant, 0.57721566490153286061.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// Largest `k` accepted by [`survival_tau_oracle`].
pub const ORACLE_MAX_K: u64 = 60;

const HARMONIC_DIRECT_MAX: u64 = 1_000_000;

/// `H_m = Σ_{k=1}^m 1/k`, with `H_0 = 0`.
pub fn harmonic(m: u64) -> f64 {
    if m <= HARMONIC_DIRECT_MAX {
        // smallest terms first
        (1..=m).rev().map(|k| 1.0 / k as f64).sum()
    } else {
        let x = m as f64;
        x.ln() + EULER_GAMMA + 0.5 / x - 1.0 / (12.0 * x * x) + 1.0 / (120.0 * x.powi(4))
    }
}

/// Mean stopping time of the record process with threshold `a`: `e^{H_{a-1}}`.
pub fn mean_s_tilde(a: u64) -> Result<f64> {
    if a == 0 {
        return Err(Error::Range("threshold must be at least 1".into()));
    }
    Ok(harmonic(a - 1).exp())
}

/// `P(τ_j > k) = (1/(j-1)!) ∫_0^∞ t^{j-1} e^{-t} (1-e^{-t})^k dt`.
pub fn survival_tau(j: u64, k: u64, quad: &QuadratureSpec) -> Result<f64> {
    if j == 0 {
        return Err(Error::Range("j must be at least 1".into()));
    }
    quad.validate()?;
    let jm1 = (j - 1) as f64;
    let kf = k as f64;
    let log_norm = ln_gamma(j as f64);
    let integrand = |t: f64| {
        if t <= 0.0 {
            return if j == 1 && k == 0 { 1.0 } else { 0.0 };
        }
        let mut log_f = -t - log_norm;
        if j > 1 {
            log_f += jm1 * t.ln();
        }
        if k > 0 {
            log_f += kf * (-(-t).exp()).ln_1p();
        }
        log_f.exp()
    };
    // past both the knee of (1-e^{-t})^k and the bulk of the Gamma(j) density
    let knee = ((k + 1) as f64).ln().max(jm1 + 10.0 * jm1.sqrt()) + 10.0;
    let est = integrate_half_line(integrand, knee, quad)?;
    Ok(est.value.clamp(0.0, 1.0))
}

/// Binomial-transform form `Σ_{l=0}^k (-1)^l C(k,l) (l+1)^{-j}`, summed in
/// exact rational arithmetic and rounded once.
pub fn survival_tau_oracle(j: u64, k: u64) -> Result<f64> {
    if j == 0 {
        return Err(Error::Range("j must be at least 1".into()));
    }
    if k > ORACLE_MAX_K {
        return Err(Error::Range(format!("binomial-transform oracle limited to k <= {ORACLE_MAX_K}, got {k}")));
    }
    let jexp = u32::try_from(j).map_err(|_| Error::Range(format!("j too large: {j}")))?;
    let mut sum = BigRational::zero();
    let mut binom = BigInt::one();
    for l in 0..=k {
        let denom = BigInt::from(l + 1).pow(jexp);
        let term = BigRational::new(binom.clone(), denom);
        if l % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        binom = binom * BigInt::from(k - l) / BigInt::from(l + 1);
    }
    sum.to_f64().ok_or_else(|| Error::Range("oracle value not representable".into()))
}

/// `Λ_A(t) = ∫_0^t (1-e^{-s})^{A-1} ds` by quadrature.
pub fn cumulative_terminal_intensity(a: u64, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    if a == 0 || !(t >= 0.0) {
        return Err(Error::Range(format!("need A >= 1 and t >= 0, got A={a}, t={t}")));
    }
    Ok(integrate(|s| intensity_unchecked(a, a, s), 0.0, t, quad)?.value)
}

/// Mean number of class-`i` points before the first class-`A` point:
/// `∫_0^∞ λ_i(t) exp(-Λ_A(t)) dt`.
pub fn mean_class_count_at_barrier(i: u64, a: u64, quad: &QuadratureSpec) -> Result<f64> {
    if i == 0 || i >= a {
        return Err(Error::Range(format!("need 1 <= i <= A-1, got i={i}, A={a}")));
    }
    quad.validate()?;
    let mut inner_err = None;
    let knee = (a as f64).ln().max(1.0);
    let est = integrate_half_line(
        |t| {
            let lam = intensity_unchecked(i, a, t);
            if lam == 0.0 {
                return 0.0;
            }
            match cumulative_terminal_intensity(a, t, quad) {
                Ok(big_lambda) => lam * (-big_lambda).exp(),
                Err(e) => {
                    inner_err.get_or_insert(e);
                    0.0
                }
            }
        },
        knee,
        quad,
    )?;
    if let Some(e) = inner_err {
        return Err(e);
    }
    Ok(est.value)
}

/// Lower and upper variance bounds for `S̃`, `(A-1)(A/2 + m - (A-1))` and
/// `2A^2 + A m - (A + m)^2` with `m = e^{H_{A-1}}`. The upper bound is
/// negative for every `A >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarBounds {
    pub lower: f64,
    pub upper: f64,
}

impl VarBounds {
    pub fn is_ordered(&self) -> bool {
        self.lower <= self.upper
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }
}

/// `lower = (A-1)[A/2 + e^{H_{A-1}} - (A-1)]`,
/// `upper = 2A² + A e^{H_{A-1}} - (A + e^{H_{A-1}})²`.
pub fn var_bounds(a: u64) -> Result<VarBounds> {
    if a < 2 {
        return Err(Error::Range(format!("var_bounds needs A >= 2, got {a}")));
    }
    let af = a as f64;
    let m = mean_s_tilde(a)?;
    let lower = (af - 1.0) * (af / 2.0 + m - (af - 1.0));
    let upper = 2.0 * af * af + af * m - (af + m).powi(2);
    Ok(VarBounds { lower, upper })
}

/// Smallest `A` in `range` where the bracket is ordered, if any.
pub fn first_ordered_var_bounds(range: std::ops::RangeInclusive<u64>) -> Option<u64> {
    range.into_iter().find(|&a| var_bounds(a).map(|b| b.is_ordered()).unwrap_or(false))
}

/// First-order means `(λ/β) e^γ n^{1-α}` (steps) and `λ e^γ n^{1-α}` (explorations).
pub fn asymptotic_means(params: &ModelParams) -> (f64, f64) {
    let base = params.lambda * EULER_GAMMA.exp() * params.scale();
    (base / params.beta, base)
}

/// Every analytic reference for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticReport {
    pub threshold: u64,
    pub harmonic: f64,
    pub mean_s_tilde: f64,
    pub var_lower: Option<f64>,
    pub var_upper: Option<f64>,
    pub asymptotic_mean_s: Option<f64>,
    pub asymptotic_mean_e: Option<f64>,
}

impl AnalyticReport {
    pub fn for_threshold(a: u64) -> Result<Self> {
        let bounds = var_bounds(a).ok();
        Ok(AnalyticReport {
            threshold: a,
            harmonic: harmonic(a.saturating_sub(1)),
            mean_s_tilde: mean_s_tilde(a)?,
            var_lower: bounds.map(|b| b.lower),
            var_upper: bounds.map(|b| b.upper),
            asymptotic_mean_s: None,
            asymptotic_mean_e: None,
        })
    }

    pub fn for_params(params: &ModelParams) -> Result<Self> {
        let mut r = Self::for_threshold(params.threshold as u64)?;
        let (s, e) = asymptotic_means(params);
        r.asymptotic_mean_s = Some(s);
        r.asymptotic_mean_e = Some(e);
        Ok(r)
    }
}
