//! Disutility functions for certainty-equivalence pricing.
//!
//! A disutility V is convex and strictly increasing; the certainty
//! equivalent of a priced risk is V^{-1} of the V-transformed premium.
//! Convexity gives the Jensen loading: the certainty equivalent is at
//! least the plain premium.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Disutility {
    /// V(x) = x.
    Identity,
    /// V(x) = x^s on x >= 0 with s >= 1.
    Power { s: f64 },
    /// V(x) = (e^{gamma x} - 1) / gamma with gamma > 0.
    Exponential { gamma: f64 },
}

impl Disutility {
    pub fn identity() -> Self {
        Disutility::Identity
    }

    pub fn power(s: f64) -> Result<Self> {
        if !s.is_finite() || s < 1.0 {
            return Err(Error::config(format!(
                "power disutility needs an exponent >= 1, got {s}"
            )));
        }
        Ok(Disutility::Power { s })
    }

    pub fn exponential(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::config(format!(
                "exponential disutility needs a positive coefficient, got {gamma}"
            )));
        }
        Ok(Disutility::Exponential { gamma })
    }

    /// Forward map V(x).
    pub fn value(&self, x: f64) -> Result<f64> {
        match self {
            Disutility::Identity => Ok(x),
            Disutility::Power { s } => {
                if x < 0.0 {
                    Err(Error::domain(format!(
                        "power disutility is defined on nonnegative losses, got {x}"
                    )))
                } else {
                    Ok(x.powf(*s))
                }
            }
            Disutility::Exponential { gamma } => {
                let t = gamma * x;
                if t > 700.0 {
                    Err(Error::Overflow(format!(
                        "exponential disutility overflows at loss {x}"
                    )))
                } else {
                    Ok((t.exp() - 1.0) / gamma)
                }
            }
        }
    }

    /// Inverse map V^{-1}(y).
    pub fn inverse(&self, y: f64) -> Result<f64> {
        match self {
            Disutility::Identity => Ok(y),
            Disutility::Power { s } => {
                if y < 0.0 {
                    Err(Error::domain(format!(
                        "power disutility values are nonnegative, got {y}"
                    )))
                } else {
                    Ok(y.powf(1.0 / s))
                }
            }
            Disutility::Exponential { gamma } => {
                let t = 1.0 + gamma * y;
                if t <= 0.0 {
                    Err(Error::domain(format!(
                        "exponential disutility values exceed -1/gamma, got {y}"
                    )))
                } else {
                    Ok(t.ln() / gamma)
                }
            }
        }
    }
}
