//! Adaptive Gauss–Kronrod (7/15) quadrature.

use std::collections::BinaryHeap;
use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 2000 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) || self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter(format!("bad quadrature spec {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Estimate {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = 0.0;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    gauss += WG[3] * fc;
    Estimate { value: kron * h, error: ((kron - gauss) * h).abs() }
}

struct Piece {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Integrates `f` over `[a, b]`, bisecting the worst piece until the total
/// error estimate meets the tolerance.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let mut heap = BinaryHeap::new();
    let first = gk15(&mut f, a, b);
    let (mut total, mut err) = (first.value, first.error);
    heap.push(Piece { a, b, est: first });
    let mut pieces = 1;
    while err > spec.abs_tol.max(spec.rel_tol * total.abs()) {
        if pieces >= spec.max_subdivisions {
            return Err(Error::Quadrature { estimate: total, error: err, subdivisions: pieces });
        }
        let worst = heap.pop().expect("non-empty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // cannot split further in floating point
            return Err(Error::Quadrature { estimate: total, error: err, subdivisions: pieces });
        }
        let l = gk15(&mut f, worst.a, m);
        let r = gk15(&mut f, m, worst.b);
        total += l.value + r.value - worst.est.value;
        err += l.error + r.error - worst.est.error;
        heap.push(Piece { a: worst.a, b: m, est: l });
        heap.push(Piece { a: m, b: worst.b, est: r });
        pieces += 1;
    }
    // recompute sums to shed accumulated drift
    let value = heap.iter().map(|p| p.est.value).sum();
    let error = heap.iter().map(|p| p.est.error).sum();
    Ok(Estimate { value, error })
}

/// Integrates over `[0, ∞)`: `[0, knee]` directly, the tail through
/// `t = knee - ln(1-u)`, `u ∈ [0, 1)`.
pub fn integrate_half_line<F: FnMut(f64) -> f64>(mut f: F, knee: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    let knee = knee.max(0.0);
    let head = integrate(&mut f, 0.0, knee, spec)?;
    let tail = integrate(
        |u: f64| {
            let s = 1.0 - u;
            if s <= 0.0 {
                return 0.0;
            }
            let v = f(knee - s.ln()) / s;
            if v.is_finite() { v } else { 0.0 }
        },
        0.0,
        1.0,
        spec,
    )?;
    Ok(Estimate { value: head.value + tail.value, error: head.error + tail.error })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_exponential() {
        let spec = QuadratureSpec::default();
        let e = integrate(|x| x * x, 0.0, 3.0, &spec).unwrap();
        assert!((e.value - 9.0).abs() < 1e-12);
        let e = integrate_half_line(|t| (-t).exp(), 1.0, &spec).unwrap();
        assert!((e.value - 1.0).abs() < 1e-11);
        let e = integrate_half_line(|t| t.powi(3) * (-t).exp(), 2.0, &spec).unwrap();
        assert!((e.value - 6.0).abs() < 1e-10);
    }

    #[test]
    fn non_convergence_reported() {
        let spec = QuadratureSpec { max_subdivisions: 3, ..Default::default() };
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &spec);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
