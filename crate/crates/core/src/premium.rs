//! Premium computation: order-statistics sums on samples, closed forms and
//! adaptive quadrature on parametric models, certainty equivalents and the
//! generalized tail-mixture functional.

use std::cell::RefCell;

use serde::Serialize;

use crate::distortion::Distortion;
use crate::distribution::Distribution;
use crate::disutility::Disutility;
use crate::empirical::EmpiricalDistribution;
use crate::error::{Error, Result};
use crate::parametric::ParametricModel;
use crate::quad::{integrate_unit_with_tail, TailIntegral};

/// Largest evaluation point used inside [0, 1) quadrature; keeps quantile
/// and density evaluations away from the right endpoint.
const V_SUP: f64 = 1.0 - f64::EPSILON / 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuoteMethod {
    Empirical,
    ClosedForm,
    Quadrature,
}

/// A premium value together with how it was obtained.
#[derive(Clone, Debug, Serialize)]
pub struct PremiumQuote {
    pub value: f64,
    pub method: QuoteMethod,
    pub distortion: Distortion,
}

/// Exact premium of a sample: the h-measure of each probability cell
/// weights the matching order statistic.
pub fn distortion_premium(sample: &EmpiricalDistribution, h: &Distortion) -> PremiumQuote {
    let n = sample.n();
    let mut value = 0.0;
    let mut lower = 0.0;
    for (i, &x) in sample.values().iter().enumerate() {
        let upper = h.cdf((i + 1) as f64 / n as f64);
        value += x * (upper - lower);
        lower = upper;
    }
    PremiumQuote {
        value,
        method: QuoteMethod::Empirical,
        distortion: h.clone(),
    }
}

/// Premium of a parametric model: closed forms where the family admits
/// them, otherwise adaptive quadrature of the h-weighted quantile function
/// (absolute error at most 1e-6 on the built-in families).
pub fn distortion_premium_analytic(model: &ParametricModel, h: &Distortion) -> Result<PremiumQuote> {
    if !model.nonnegative() {
        return Err(Error::domain(
            "parametric pricing requires a nonnegative support; use a sample for real-valued losses",
        ));
    }
    let closed = |value: f64| PremiumQuote {
        value,
        method: QuoteMethod::ClosedForm,
        distortion: h.clone(),
    };
    // a two-point loss at {0, 1} prices to the h-mass above the zero level
    if let ParametricModel::Bernoulli { a } = model {
        return Ok(closed(1.0 - h.cdf(*a)));
    }
    match h {
        Distortion::Identity => Ok(closed(model.mean())),
        Distortion::AVaR { alpha } => {
            Ok(closed(model.tail_integral(*alpha)? / (1.0 - alpha)))
        }
        Distortion::Piecewise { breaks, values } => {
            // sum of density values times the quantile mass of each piece
            let mut value = 0.0;
            for (k, &level) in values.iter().enumerate() {
                let lo = model.tail_integral(breaks[k])?;
                let hi = if k + 1 == values.len() {
                    0.0
                } else {
                    model.tail_integral(breaks[k + 1])?
                };
                value += level * (lo - hi);
            }
            Ok(closed(value))
        }
        _ => {
            let tol = 1e-10 * model.mean().abs().max(1.0);
            let captured: RefCell<Option<Error>> = RefCell::new(None);
            let outcome = {
                let f = |v: f64| {
                    let vc = v.min(V_SUP);
                    match model.quantile(vc) {
                        Ok(x) => x * h.density(vc),
                        Err(e) => {
                            captured.borrow_mut().get_or_insert(e);
                            f64::NAN
                        }
                    }
                };
                integrate_unit_with_tail(&f, &h.breakpoints(), tol)
            };
            if let Some(e) = captured.into_inner() {
                return Err(e);
            }
            match outcome {
                TailIntegral::Converged(value) => Ok(PremiumQuote {
                    value,
                    method: QuoteMethod::Quadrature,
                    distortion: h.clone(),
                }),
                TailIntegral::Diverged => Err(Error::Unbounded(
                    "premium integral diverges: the distortion density is not integrable \
                     against the quantile function"
                        .into(),
                )),
            }
        }
    }
}

/// Premium of any distribution under a distortion density.
pub fn premium(dist: &Distribution, h: &Distortion) -> Result<PremiumQuote> {
    match dist {
        Distribution::Empirical(sample) => Ok(distortion_premium(sample, h)),
        Distribution::Parametric(model) => distortion_premium_analytic(model, h),
    }
}

/// Certainty-equivalence premium: V^{-1} of the h-weighted average of
/// V-transformed quantiles. With the identity disutility this is the plain
/// premium.
pub fn ceq_premium(dist: &Distribution, v: &Disutility, h: &Distortion) -> Result<f64> {
    if *v == Disutility::Identity {
        return Ok(premium(dist, h)?.value);
    }
    match dist {
        Distribution::Empirical(sample) => {
            let n = sample.n();
            let mut acc = 0.0;
            let mut lower = 0.0;
            for (i, &x) in sample.values().iter().enumerate() {
                let upper = h.cdf((i + 1) as f64 / n as f64);
                acc += v.value(x)? * (upper - lower);
                lower = upper;
            }
            v.inverse(acc)
        }
        Distribution::Parametric(model) => {
            if !model.nonnegative() {
                return Err(Error::domain(
                    "parametric pricing requires a nonnegative support",
                ));
            }
            let tol = 1e-10 * model.mean().abs().max(1.0);
            let captured: RefCell<Option<Error>> = RefCell::new(None);
            let outcome = {
                let f = |u: f64| {
                    let vc = u.min(V_SUP);
                    let evaluated = model.quantile(vc).and_then(|x| v.value(x));
                    match evaluated {
                        Ok(y) => y * h.density(vc),
                        Err(e) => {
                            captured.borrow_mut().get_or_insert(e);
                            f64::NAN
                        }
                    }
                };
                integrate_unit_with_tail(&f, &h.breakpoints(), tol)
            };
            if let Some(e) = captured.into_inner() {
                return Err(e);
            }
            match outcome {
                TailIntegral::Converged(acc) => v.inverse(acc),
                TailIntegral::Diverged => Err(Error::Unbounded(
                    "disutility-weighted premium integral diverges".into(),
                )),
            }
        }
    }
}

/// Generalized premium: integrate nu(tail-expectation at level alpha)
/// against the weight function k over alpha in [0, 1). `weight_breaks`
/// lists known kinks of k so the quadrature can split there. Divergence
/// near alpha = 1 is detected and reported instead of truncated.
pub fn generalized_premium(
    dist: &Distribution,
    nu: &Disutility,
    weight: &dyn Fn(f64) -> f64,
    weight_breaks: &[f64],
) -> Result<f64> {
    let mut breaks = dist.quantile_breakpoints();
    breaks.extend_from_slice(weight_breaks);
    let tol = 1e-10 * dist.mean().abs().max(1.0);
    let captured: RefCell<Option<Error>> = RefCell::new(None);
    let outcome = {
        let f = |alpha: f64| {
            let a = alpha.min(V_SUP);
            let evaluated = dist.avar(a).and_then(|t| nu.value(t));
            match evaluated {
                Ok(y) => y * weight(a),
                Err(e) => {
                    captured.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            }
        };
        integrate_unit_with_tail(&f, &breaks, tol)
    };
    if let Some(e) = captured.into_inner() {
        return Err(e);
    }
    match outcome {
        TailIntegral::Converged(value) => Ok(value),
        TailIntegral::Diverged => Err(Error::Unbounded(
            "generalized premium diverges: the weight accumulates too much mass near the tail"
                .into(),
        )),
    }
}
