//! Empirical loss distributions backed by a sorted sample.

use crate::error::{Error, Result};

/// A loss sample stored in nondecreasing order.
///
/// The quantile function is the right-continuous step inverse
/// `F^{-1}(v) = x_[ceil(v n)]` with `F^{-1}(0) = x_[1]`. This convention
/// makes the order-statistics pricing weights exact: the i-th sorted value
/// carries the probability cell ((i-1)/n, i/n].
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalDistribution {
    values: Vec<f64>,
}

impl EmpiricalDistribution {
    /// Build from an arbitrary sample; the values are sorted internally.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("empirical distribution needs at least one value"));
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("empirical distribution values must be finite"));
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(EmpiricalDistribution { values })
    }

    /// Build from a sample that is already nondecreasing.
    pub fn from_sorted(values: Vec<f64>) -> Result<Self> {
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::domain("values are not nondecreasing"));
        }
        Self::new(values)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Sorted sample, ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Step inverse x_[ceil(v n)]. A one-billionth cell guard keeps grid
    /// points computed in floating point as i/n inside cell i.
    pub fn quantile(&self, v: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::domain(format!("quantile level must be in [0,1], got {v}")));
        }
        let n = self.values.len();
        let k = (v * n as f64 - 1e-9).ceil() as i64;
        let k = k.clamp(1, n as i64) as usize;
        Ok(self.values[k - 1])
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Exact upper quantile integral: int_alpha^1 F^{-1}(v) dv.
    pub fn tail_integral(&self, alpha: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::domain(format!("tail level must be in [0,1], got {alpha}")));
        }
        if alpha == 1.0 {
            return Ok(0.0);
        }
        let n = self.values.len();
        let nf = n as f64;
        // first cell index whose interior intersects (alpha, 1]
        let j = ((alpha * nf - 1e-9).ceil() as i64).clamp(1, n as i64) as usize;
        let mut total = self.values[j - 1] * (j as f64 / nf - alpha);
        for i in (j + 1)..=n {
            total += self.values[i - 1] / nf;
        }
        Ok(total)
    }

    /// p-th moment norm of the quantile function, (mean |x_i|^p)^{1/p}.
    pub fn moment_norm(&self, p: f64) -> f64 {
        let n = self.values.len() as f64;
        let s: f64 = self.values.iter().map(|x| x.abs().powf(p)).sum();
        (s / n).powf(1.0 / p)
    }
}
