//! Monotone payoff transforms: excess-of-loss layers, proportional cover,
//! and user-supplied piecewise-linear payment functions.

use crate::empirical::EmpiricalDistribution;
use crate::error::{Error, Result};

/// A nondecreasing payment function applied pointwise to losses.
///
/// All supported kinds are Lipschitz, so the Hoelder exponent is 1 and the
/// Hoelder constant is the maximal slope. That constant is what enters the
/// partial-coverage premium bounds.
#[derive(Clone, Debug, PartialEq)]
pub enum PayoffTransform {
    /// Excess-of-loss layer: min(max(x - attachment, 0), exit - attachment).
    Xl { attachment: f64, exit: f64 },
    /// Proportional cover c * x with c >= 0.
    Proportional { c: f64 },
    /// Monotone piecewise-linear payoff through the given (x, y) points,
    /// constant beyond the first and last x.
    Custom { points: Vec<(f64, f64)> },
}

impl PayoffTransform {
    /// XL layer with 0 <= attachment < exit, exit finite.
    pub fn xl(attachment: f64, exit: f64) -> Result<Self> {
        if !attachment.is_finite() || !exit.is_finite() {
            return Err(Error::domain("xl layer bounds must be finite"));
        }
        if !(0.0 <= attachment && attachment < exit) {
            return Err(Error::domain("xl layer requires 0 <= attachment < exit"));
        }
        Ok(PayoffTransform::Xl { attachment, exit })
    }

    pub fn proportional(c: f64) -> Result<Self> {
        if c.is_finite() && c >= 0.0 {
            Ok(PayoffTransform::Proportional { c })
        } else {
            Err(Error::domain("proportional cover requires c >= 0"))
        }
    }

    pub fn custom(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::domain("custom payoff needs at least two points"));
        }
        let xs_increasing = points.windows(2).all(|w| w[0].0 < w[1].0);
        let ys_monotone = points.windows(2).all(|w| w[0].1 <= w[1].1);
        if !xs_increasing || !ys_monotone {
            return Err(Error::domain(
                "custom payoff points must have increasing x and nondecreasing y",
            ));
        }
        Ok(PayoffTransform::Custom { points })
    }

    pub fn apply(&self, x: f64) -> f64 {
        match self {
            PayoffTransform::Xl { attachment, exit } => {
                (x - attachment).max(0.0).min(exit - attachment)
            }
            PayoffTransform::Proportional { c } => c * x,
            PayoffTransform::Custom { points } => {
                if x <= points[0].0 {
                    return points[0].1;
                }
                if x >= points[points.len() - 1].0 {
                    return points[points.len() - 1].1;
                }
                let i = points.partition_point(|p| p.0 <= x);
                let (x0, y0) = points[i - 1];
                let (x1, y1) = points[i];
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }

    pub fn hoelder_exponent(&self) -> f64 {
        1.0
    }

    /// Lipschitz constant of the payoff.
    pub fn hoelder_constant(&self) -> f64 {
        match self {
            PayoffTransform::Xl { .. } => 1.0,
            PayoffTransform::Proportional { c } => *c,
            PayoffTransform::Custom { points } => points
                .windows(2)
                .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
                .fold(0.0, f64::max),
        }
    }
}

/// Image of an empirical distribution under a monotone payoff; the sorted
/// transformed sample is the transform of the sorted sample.
pub fn apply_transform(
    t: &PayoffTransform,
    dist: &EmpiricalDistribution,
) -> EmpiricalDistribution {
    let values: Vec<f64> = dist.values().iter().map(|&x| t.apply(x)).collect();
    // monotone map of a sorted slice stays sorted
    EmpiricalDistribution::from_sorted(values).expect("monotone image of sorted sample")
}
