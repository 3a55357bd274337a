//! The running-minimum (record) process of an i.i.d. uniform sequence and
//! its stopping time: the first moment the current record has held for
//! `threshold` consecutive values, counting the value that set it.
//!
//! With residence `τ_j` = number of draws after the j-th record up to and
//! including the one that beats it, a record is terminal when `τ_j ≥ A`, and
//! `S̃ = A + Σ_{j<Ṽ} τ_j`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::CostStream;

/// One run of the record process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordOutcome {
    /// Stopping time `S̃` in draws.
    pub s_tilde: u64,
    /// Number of records, the first included.
    pub v_tilde: u64,
    /// Record values, strictly decreasing.
    pub jumps: Vec<f64>,
    /// Residence of each record; the last one is capped at the threshold.
    pub residences: Vec<u64>,
}

/// Simulates the record process value by value from `stream`.
pub fn run_record_direct(threshold: u64, stream: &mut CostStream) -> Result<RecordOutcome> {
    if threshold == 0 {
        return Err(Error::InvalidParameter("record threshold must be at least 1".into()));
    }
    let mut record = stream.next_cost();
    let mut jumps = vec![record];
    let mut residences = Vec::new();
    let mut drawn = 1u64;
    let mut since = 0u64;
    while since + 1 < threshold {
        let w = stream.next_cost();
        drawn += 1;
        since += 1;
        if w < record {
            residences.push(since);
            record = w;
            jumps.push(w);
            since = 0;
        }
    }
    residences.push(threshold);
    Ok(RecordOutcome {
        s_tilde: drawn,
        v_tilde: jumps.len() as u64,
        jumps,
        residences,
    })
}

/// `Geometric(y)` on `{1, 2, ...}` by inversion, capped at `cap`.
pub fn sample_geometric_capped<R: Rng + ?Sized>(y: f64, cap: u64, rng: &mut R) -> u64 {
    if y >= 1.0 {
        return 1.min(cap);
    }
    if y <= 0.0 {
        return cap;
    }
    // U in (0, 1]
    let u = 1.0 - rng.gen::<f64>();
    let t = (u.ln() / (-y).ln_1p()).ceil();
    if !(t < cap as f64) {
        cap
    } else {
        (t as u64).max(1)
    }
}

/// Records and their (uncensored) residences, generated jump by jump:
/// `Y_{j+1} = W_{j+1} · Y_j` and `τ_j ~ Geometric(Y_j)`.
#[derive(Debug)]
pub struct JumpChain<'r, R: Rng + ?Sized> {
    rng: &'r mut R,
    log_record: f64,
}

impl<'r, R: Rng + ?Sized> JumpChain<'r, R> {
    pub fn new(rng: &'r mut R) -> Self {
        JumpChain { rng, log_record: 0.0 }
    }
}

impl<R: Rng + ?Sized> Iterator for JumpChain<'_, R> {
    /// `(Y_j, τ_j)`, with `τ_j` saturating at `u64::MAX`.
    type Item = (f64, u64);

    fn next(&mut self) -> Option<Self::Item> {
        let w = 1.0 - self.rng.gen::<f64>();
        self.log_record += w.ln();
        let y = self.log_record.exp();
        let tau = sample_geometric_capped(y, u64::MAX, self.rng);
        Some((y, tau))
    }
}

/// Simulates the record process one record at a time, never touching
/// individual draws.
pub fn run_record_jump<R: Rng + ?Sized>(threshold: u64, rng: &mut R) -> Result<RecordOutcome> {
    if threshold == 0 {
        return Err(Error::InvalidParameter("record threshold must be at least 1".into()));
    }
    let mut jumps = Vec::new();
    let mut residences = Vec::new();
    let mut log_record = 0.0f64;
    let mut s_tilde = 0u64;
    loop {
        // uniform on (0, 1]; a zero factor would end the chain at record 0
        let w = 1.0 - rng.gen::<f64>();
        log_record += w.ln();
        let y = log_record.exp();
        jumps.push(y);
        let tau = sample_geometric_capped(y, threshold, rng);
        residences.push(tau);
        s_tilde += tau;
        if tau >= threshold {
            break;
        }
    }
    Ok(RecordOutcome {
        s_tilde,
        v_tilde: jumps.len() as u64,
        jumps,
        residences,
    })
}

/// Concentration interval `(e^{j(1-δ)}, e^{j(1+δ)})` for the j-th residence,
/// kept in log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauBounds {
    pub log_lower: f64,
    pub log_upper: f64,
}

impl TauBounds {
    /// `m_j`; `+∞` if not representable.
    pub fn lower(&self) -> f64 {
        self.log_lower.exp()
    }

    /// `M_j`; `+∞` if not representable.
    pub fn upper(&self) -> f64 {
        self.log_upper.exp()
    }

    pub fn is_finite(&self) -> bool {
        self.upper().is_finite()
    }

    /// Strictly inside the open interval.
    pub fn contains(&self, tau: u64) -> bool {
        let lt = (tau as f64).ln();
        lt > self.log_lower && lt < self.log_upper
    }
}

pub fn tau_bounds(j: u64, delta: f64) -> Result<TauBounds> {
    if j == 0 {
        return Err(Error::Range("j must be at least 1".into()));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Range(format!("delta must be positive, got {delta}")));
    }
    let j = j as f64;
    Ok(TauBounds { log_lower: j * (1.0 - delta), log_upper: j * (1.0 + delta) })
}
