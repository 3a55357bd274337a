//! Order-stable summaries, pooled standard errors and empirical CDFs.

use serde::{Deserialize, Serialize};

/// Neumaier-compensated sum.
pub fn stable_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Sample mean, unbiased variance and 95% normal CI half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: u64,
    pub mean: f64,
    pub variance: f64,
    pub ci_halfwidth: f64,
}

impl Summary {
    pub fn from_slice(xs: &[f64]) -> Self {
        let count = xs.len() as u64;
        if count == 0 {
            return Summary { count, mean: f64::NAN, variance: f64::NAN, ci_halfwidth: f64::NAN };
        }
        let n = count as f64;
        let mean = stable_sum(xs.iter().copied()) / n;
        let variance = if count > 1 {
            stable_sum(xs.iter().map(|x| (x - mean) * (x - mean))) / (n - 1.0)
        } else {
            0.0
        };
        Summary { count, mean, variance, ci_halfwidth: 1.96 * variance.sqrt() / n.sqrt() }
    }

    pub fn std_error(&self) -> f64 {
        (self.variance / self.count as f64).sqrt()
    }
}

/// `sqrt(var_a/n_a + var_b/n_b)`.
pub fn pooled_se(a: &Summary, b: &Summary) -> f64 {
    (a.variance / a.count as f64 + b.variance / b.count as f64).sqrt()
}

/// Empirical CDF over a sorted sample.
#[derive(Debug, Clone)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(mut xs: Vec<f64>) -> Self {
        xs.sort_by(f64::total_cmp);
        Ecdf { sorted: xs }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// `F(x) = #{x_i <= x} / n`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    /// Lower empirical quantile, `q ∈ [0, 1]`.
    pub fn quantile(&self, q: f64) -> f64 {
        let n = self.sorted.len();
        let idx = ((q * n as f64).ceil() as usize).clamp(1, n) - 1;
        self.sorted[idx]
    }

    /// `sup_x (other(x) - self(x))`: how far `self` sits above `other`
    /// in the stochastic order.
    pub fn one_sided_ks(&self, other: &Ecdf) -> f64 {
        self.sorted
            .iter()
            .chain(other.sorted.iter())
            .map(|&x| other.cdf(x) - self.cdf(x))
            .fold(0.0, f64::max)
    }
}
