//! Parametric loss models for the simulation harness and analytic pricing.

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::special::{gamma_p, gamma_p_inv, ln_gamma};

/// Parametric families on the half line.
///
/// `Bernoulli { a }` takes the value 0 with probability `a` and 1 with
/// probability `1 - a`; it is the family whose prices trace out the
/// distortion distribution, since the premium is exactly `1 - H(a)`.
#[derive(Clone, Debug, PartialEq)]
pub enum ParametricModel {
    Gamma { shape: f64, scale: f64 },
    Exponential { rate: f64 },
    Uniform { a: f64, b: f64 },
    Bernoulli { a: f64 },
}

impl ParametricModel {
    pub fn gamma(shape: f64, scale: f64) -> Result<Self> {
        if shape > 0.0 && scale > 0.0 {
            Ok(ParametricModel::Gamma { shape, scale })
        } else {
            Err(Error::domain("gamma requires shape > 0 and scale > 0"))
        }
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        if rate > 0.0 {
            Ok(ParametricModel::Exponential { rate })
        } else {
            Err(Error::domain("exponential requires rate > 0"))
        }
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(ParametricModel::Uniform { a, b })
        } else {
            Err(Error::domain("uniform requires finite a < b"))
        }
    }

    pub fn bernoulli(a: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&a) {
            Ok(ParametricModel::Bernoulli { a })
        } else {
            Err(Error::domain("bernoulli requires a in [0,1]"))
        }
    }

    /// Quantile function. Levels 0 and 1 are allowed only when the matching
    /// support endpoint is finite.
    pub fn quantile(&self, v: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::domain(format!("quantile level must be in [0,1], got {v}")));
        }
        match *self {
            ParametricModel::Gamma { shape, scale } => {
                if v == 1.0 {
                    return Err(Error::domain("gamma quantile at level 1 is infinite"));
                }
                Ok(scale * gamma_p_inv(shape, v)?)
            }
            ParametricModel::Exponential { rate } => {
                if v == 1.0 {
                    return Err(Error::domain("exponential quantile at level 1 is infinite"));
                }
                Ok(-(1.0 - v).ln() / rate)
            }
            ParametricModel::Uniform { a, b } => Ok(a + (b - a) * v),
            ParametricModel::Bernoulli { a } => Ok(if v <= a { 0.0 } else { 1.0 }),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            ParametricModel::Gamma { shape, scale } => shape * scale,
            ParametricModel::Exponential { rate } => 1.0 / rate,
            ParametricModel::Uniform { a, b } => 0.5 * (a + b),
            ParametricModel::Bernoulli { a } => 1.0 - a,
        }
    }

    /// Exact upper quantile integral int_alpha^1 F^{-1}(v) dv.
    ///
    /// For the gamma family this is the partial expectation
    /// `shape * scale * (1 - P(shape + 1, x_alpha / scale))`.
    pub fn tail_integral(&self, alpha: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::domain(format!("tail level must be in [0,1], got {alpha}")));
        }
        if alpha == 1.0 {
            return Ok(0.0);
        }
        match *self {
            ParametricModel::Gamma { shape, scale } => {
                let x = gamma_p_inv(shape, alpha)?;
                Ok(shape * scale * (1.0 - gamma_p(shape + 1.0, x)))
            }
            ParametricModel::Exponential { rate } => {
                Ok((1.0 - alpha) * (1.0 - (1.0 - alpha).ln()) / rate)
            }
            ParametricModel::Uniform { a, b } => {
                Ok(a * (1.0 - alpha) + 0.5 * (b - a) * (1.0 - alpha * alpha))
            }
            ParametricModel::Bernoulli { a } => Ok(1.0 - alpha.max(a)),
        }
    }

    /// p-th moment norm of the quantile function, (E X^p)^{1/p}.
    pub fn moment_norm(&self, p: f64) -> Result<f64> {
        if p < 1.0 {
            return Err(Error::domain("moment order must be >= 1"));
        }
        match *self {
            ParametricModel::Gamma { shape, scale } => {
                // E X^p = scale^p Gamma(shape + p) / Gamma(shape)
                let log_moment = p * scale.ln() + ln_gamma(shape + p) - ln_gamma(shape);
                Ok((log_moment / p).exp())
            }
            ParametricModel::Exponential { rate } => {
                Ok((ln_gamma(1.0 + p) / p).exp() / rate)
            }
            ParametricModel::Uniform { a, b } => {
                if a < 0.0 {
                    return Err(Error::domain(
                        "moment norm for uniform requires nonnegative support",
                    ));
                }
                let num = b.powf(p + 1.0) - a.powf(p + 1.0);
                Ok((num / ((p + 1.0) * (b - a))).powf(1.0 / p))
            }
            ParametricModel::Bernoulli { a } => Ok((1.0 - a).powf(1.0 / p)),
        }
    }

    /// True iff the support is contained in [0, inf).
    pub fn nonnegative(&self) -> bool {
        match *self {
            ParametricModel::Uniform { a, .. } => a >= 0.0,
            _ => true,
        }
    }

    /// Draw `n` values by inverse transform; bit-for-bit reproducible for a
    /// fixed seed.
    pub fn sample(&self, rng: &mut SplitMix64, n: usize) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let u = rng.next_f64();
            out.push(self.quantile(u)?);
        }
        Ok(out)
    }
}
