//! A distribution is either an observed sample or a parametric model; every
//! pricing and distance routine accepts both through this enum.

use crate::empirical::EmpiricalDistribution;
use crate::error::Result;
use crate::parametric::ParametricModel;

#[derive(Clone, Debug, PartialEq)]
pub enum Distribution {
    Empirical(EmpiricalDistribution),
    Parametric(ParametricModel),
}

impl Distribution {
    pub fn quantile(&self, v: f64) -> Result<f64> {
        match self {
            Distribution::Empirical(d) => d.quantile(v),
            Distribution::Parametric(m) => m.quantile(v),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Distribution::Empirical(d) => d.mean(),
            Distribution::Parametric(m) => m.mean(),
        }
    }

    /// int_alpha^1 F^{-1}(v) dv, exact in both representations.
    pub fn tail_integral(&self, alpha: f64) -> Result<f64> {
        match self {
            Distribution::Empirical(d) => d.tail_integral(alpha),
            Distribution::Parametric(m) => m.tail_integral(alpha),
        }
    }

    /// Average value at risk at level alpha, the mean of the top (1 - alpha)
    /// quantiles.
    pub fn avar(&self, alpha: f64) -> Result<f64> {
        Ok(self.tail_integral(alpha)? / (1.0 - alpha))
    }

    /// ||F^{-1}||_p.
    pub fn moment_norm(&self, p: f64) -> Result<f64> {
        match self {
            Distribution::Empirical(d) => Ok(d.moment_norm(p)),
            Distribution::Parametric(m) => m.moment_norm(p),
        }
    }

    /// True iff the support is contained in [0, inf).
    pub fn nonnegative(&self) -> bool {
        match self {
            Distribution::Empirical(d) => d.min() >= 0.0,
            Distribution::Parametric(m) => m.nonnegative(),
        }
    }

    /// Levels at which the quantile function jumps (empirical grid points);
    /// used to split quadrature.
    pub fn quantile_breakpoints(&self) -> Vec<f64> {
        match self {
            Distribution::Empirical(d) => {
                let n = d.n();
                (1..n).map(|i| i as f64 / n as f64).collect()
            }
            Distribution::Parametric(ParametricModel::Bernoulli { a }) => vec![*a],
            Distribution::Parametric(_) => Vec::new(),
        }
    }
}

impl From<EmpiricalDistribution> for Distribution {
    fn from(d: EmpiricalDistribution) -> Self {
        Distribution::Empirical(d)
    }
}

impl From<ParametricModel> for Distribution {
    fn from(m: ParametricModel) -> Self {
        Distribution::Parametric(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn avar_dispatch_agrees() {
        let sample =
            EmpiricalDistribution::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let d: Distribution = sample.into();
        assert!((d.avar(0.5).unwrap() - 3.5).abs() < 1e-12);
        let g: Distribution = ParametricModel::gamma(2.0, 1.0).unwrap().into();
        assert!((g.avar(0.9).unwrap() - 5.09423085049133).abs() < 1e-8);
    }
}
