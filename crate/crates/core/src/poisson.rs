//! Marked unit-rate Poisson representation of the record stopping time.
//!
//! Points `T_j` of a unit-rate process carry a residence class: class `i < A`
//! with probability `λ_i(t) = (1-e^{-t})^{i-1} e^{-t}`, class `A` with the
//! remaining mass `(1-e^{-t})^{A-1}`. Marking one base process is equivalent
//! to the family of independent thinnings `N^{(i)}`.

use rand::Rng;

use crate::error::{Error, Result};

/// Points simulated before the representation sampler gives up.
pub const SAFETY_CAP: u64 = 10_000_000;

/// Thinning intensity of class `i` at time `t` for threshold `a`.
pub fn intensity_class(i: u64, a: u64, t: f64) -> Result<f64> {
    if i == 0 || i > a || !(t >= 0.0) {
        return Err(Error::Range(format!("intensity_class needs 1 <= i <= A and t >= 0, got i={i}, A={a}, t={t}")));
    }
    Ok(intensity_unchecked(i, a, t))
}

#[inline]
pub(crate) fn intensity_unchecked(i: u64, a: u64, t: f64) -> f64 {
    let log_q = (-(-t).exp()).ln_1p(); // ln(1 - e^{-t})
    if i < a {
        let k = (i - 1) as f64;
        if k == 0.0 {
            (-t).exp()
        } else {
            (k * log_q - t).exp()
        }
    } else if a == 1 {
        1.0
    } else {
        ((a - 1) as f64 * log_q).exp()
    }
}

/// Exp(1) draw by inversion.
pub fn sample_exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    exponential_from_uniform(rng.gen::<f64>())
}

/// `-ln(1-u)` for `u ∈ [0,1)`.
#[inline]
pub fn exponential_from_uniform(u: f64) -> f64 {
    -(-u).ln_1p()
}

/// Class of a point at time `t`: categorical search over [`intensity_class`].
pub fn sample_class<R: Rng + ?Sized>(a: u64, t: f64, rng: &mut R) -> u64 {
    let u = rng.gen::<f64>();
    let mut cum = 0.0;
    for i in 1..a {
        cum += intensity_unchecked(i, a, t);
        if u < cum {
            return i;
        }
    }
    a
}

/// `(S̃, Ṽ)` from one path of the marked process, stopped at the first class-`A` point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Representation {
    pub s_tilde: u64,
    pub v_tilde: u64,
}

pub fn simulate_representation<R: Rng + ?Sized>(a: u64, rng: &mut R) -> Result<Representation> {
    if a < 2 {
        return Err(Error::InvalidParameter(format!("representation needs A >= 2, got {a}")));
    }
    let mut t = 0.0;
    let mut weighted = 0u64;
    let mut count = 0u64;
    for _ in 0..SAFETY_CAP {
        t += sample_exponential(rng);
        let class = sample_class(a, t, rng);
        if class == a {
            return Ok(Representation { s_tilde: a + weighted, v_tilde: 1 + count });
        }
        weighted += class;
        count += 1;
    }
    Err(Error::SafetyCap(SAFETY_CAP))
}

/// Counts of class `1..=max_class` points on `[0, horizon]`, without stopping.
/// Index `i-1` holds class `i`; all larger residences are lumped and dropped.
pub fn class_counts_until<R: Rng + ?Sized>(max_class: u64, horizon: f64, rng: &mut R) -> Vec<u64> {
    let mut counts = vec![0u64; max_class as usize];
    let lump = max_class + 1;
    let mut t = sample_exponential(rng);
    while t <= horizon {
        let c = sample_class(lump, t, rng);
        if c <= max_class {
            counts[(c - 1) as usize] += 1;
        }
        t += sample_exponential(rng);
    }
    counts
}

/// Every base point up to `horizon` with its class (threshold `a`).
pub fn marked_points<R: Rng + ?Sized>(a: u64, horizon: f64, rng: &mut R) -> Vec<(f64, u64)> {
    let mut out = Vec::new();
    let mut t = sample_exponential(rng);
    while t <= horizon {
        out.push((t, sample_class(a, t, rng)));
        t += sample_exponential(rng);
    }
    out
}
