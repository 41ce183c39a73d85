//! Robust pricing over Wasserstein neighborhoods of a baseline loss
//! model, boundedness diagnosis, and premium continuity bounds.
//!
//! The worst case over a ball of radius epsilon admits a closed form:
//! under the order-1 metric the loading is epsilon times the sup of the
//! density, attained exactly when the density is flat near 1 (shift the
//! top slab); under order p > 1 the loading is epsilon times the
//! conjugate-exponent norm and the maximizer shifts quantiles by a power
//! of the density. Densities with infinite norms make the worst case
//! infinite, which is reported as a status, never as a silent truncation.

use serde::{Deserialize, Serialize};

use crate::distortion::Distortion;
use crate::distribution::Distribution;
use crate::disutility::Disutility;
use crate::empirical::EmpiricalDistribution;
use crate::error::{Error, Result};
use crate::premium::premium;
use crate::quad::{integrate_unit_with_tail, TailIntegral};
use crate::transform::PayoffTransform;
use crate::wasserstein::wasserstein;

/// Largest density/quantile evaluation point inside [0, 1).
const V_SUP: f64 = 1.0 - f64::EPSILON / 2.0;

/// Hoelder conjugate; 1 and infinity pair up.
fn conjugate(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else if p <= 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

/// Ground metric for the transport distance on loss distributions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroundMetric {
    /// Absolute difference of losses.
    D1,
    /// Absolute difference of p-th powers.
    Dp { p: f64 },
}

/// Ambiguity-set description: transport order `r` and radius `epsilon`
/// around the baseline, measured in `metric`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmbiguitySpec {
    pub epsilon: f64,
    pub r: f64,
    pub metric: GroundMetric,
}

impl AmbiguitySpec {
    pub fn validate(&self) -> Result<()> {
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return Err(Error::domain(format!(
                "ambiguity radius must be a finite nonnegative number, got {}",
                self.epsilon
            )));
        }
        if !self.r.is_finite() || self.r < 1.0 {
            return Err(Error::domain(format!(
                "transport order must be at least 1, got {}",
                self.r
            )));
        }
        if let GroundMetric::Dp { p } = self.metric {
            if !p.is_finite() || p < 1.0 {
                return Err(Error::domain(format!(
                    "ground-metric power must be at least 1, got {p}"
                )));
            }
        }
        Ok(())
    }
}

/// How the worst case relates to the ambiguity set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RobustStatus {
    /// A distribution in the ball achieves the value.
    Attained,
    /// The value is a supremum; a family inside the ball approaches it.
    #[serde(rename = "sup")]
    ApproachableNotAttained,
    /// The supremum is infinite.
    Unbounded,
}

/// Quantile shift defining a (candidate) worst-case distribution.
#[derive(Clone, Debug)]
pub enum ShiftFn {
    /// No shift: the baseline itself.
    None,
    /// Add `amount` to every quantile in the top `eta` probability slab.
    TopSlab { eta: f64, amount: f64 },
    /// Shift by epsilon * (h(v)/||h||_q)^(q/p).
    PowerOfDensity {
        epsilon: f64,
        p: f64,
        q: f64,
        qnorm: f64,
        distortion: Distortion,
    },
}

/// Worst-case representation: the baseline plus an additive quantile
/// shift. Can be priced, measured, and materialized as a sample.
#[derive(Clone, Debug)]
pub struct WorstCase {
    pub base: Distribution,
    pub shift: ShiftFn,
}

impl WorstCase {
    pub fn shift_at(&self, v: f64) -> f64 {
        match &self.shift {
            ShiftFn::None => 0.0,
            ShiftFn::TopSlab { eta, amount } => {
                if v >= 1.0 - eta {
                    *amount
                } else {
                    0.0
                }
            }
            ShiftFn::PowerOfDensity {
                epsilon,
                p,
                q,
                qnorm,
                distortion,
            } => {
                let vc = v.clamp(0.0, V_SUP);
                epsilon * (distortion.density(vc) / qnorm).powf(q / p)
            }
        }
    }

    /// Quantile of the shifted distribution.
    pub fn quantile(&self, v: f64) -> Result<f64> {
        Ok(self.base.quantile(v)? + self.shift_at(v))
    }

    /// Price the shifted distribution under a distortion density: the
    /// baseline premium plus the integral of the shift against h.
    pub fn premium(&self, h: &Distortion) -> Result<f64> {
        let base = premium(&self.base, h)?.value;
        let extra = match &self.shift {
            ShiftFn::None => 0.0,
            ShiftFn::TopSlab { eta, amount } => amount * (1.0 - h.cdf(1.0 - eta)),
            ShiftFn::PowerOfDensity { .. } => {
                let f = |v: f64| {
                    let vc = v.min(V_SUP);
                    self.shift_at(vc) * h.density(vc)
                };
                match integrate_unit_with_tail(&f, &h.breakpoints(), 1e-10) {
                    TailIntegral::Converged(x) => x,
                    TailIntegral::Diverged => {
                        return Err(Error::Unbounded(
                            "shift integral diverges under this density".into(),
                        ))
                    }
                }
            }
        };
        Ok(base + extra)
    }

    /// Transport distance of order `r` from the baseline: the L^r norm
    /// of the quantile shift.
    pub fn distance(&self, r: f64) -> Result<f64> {
        if !r.is_finite() || r < 1.0 {
            return Err(Error::domain(format!(
                "transport order must be at least 1, got {r}"
            )));
        }
        match &self.shift {
            ShiftFn::None => Ok(0.0),
            ShiftFn::TopSlab { eta, amount } => Ok(amount * eta.powf(1.0 / r)),
            ShiftFn::PowerOfDensity { epsilon, p, .. } => {
                if (r - p).abs() < 1e-12 {
                    return Ok(*epsilon);
                }
                let f = |v: f64| self.shift_at(v.min(V_SUP)).powf(r);
                match integrate_unit_with_tail(&f, &[], 1e-10) {
                    TailIntegral::Converged(x) => Ok(x.powf(1.0 / r)),
                    TailIntegral::Diverged => Err(Error::Unbounded(format!(
                        "order-{r} distance of this shift is infinite"
                    ))),
                }
            }
        }
    }

    /// Sample the shifted distribution at midpoint quantile levels.
    pub fn materialize(&self, n: usize) -> Result<EmpiricalDistribution> {
        if n == 0 {
            return Err(Error::config("need at least one point to materialize"));
        }
        let mut values = Vec::with_capacity(n);
        for i in 1..=n {
            let v = (i as f64 - 0.5) / n as f64;
            values.push(self.quantile(v)?);
        }
        EmpiricalDistribution::new(values)
    }
}

/// Robust premium outcome.
#[derive(Clone, Debug)]
pub struct RobustResult {
    /// Worst-case premium over the ball; +inf when unbounded.
    pub value: f64,
    pub status: RobustStatus,
    /// Present when a maximizer exists (including the trivial one at
    /// radius zero).
    pub worst_case: Option<WorstCase>,
    /// Loading over the baseline premium: value - baseline, >= 0.
    pub ambiguity_premium: f64,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::domain(format!(
            "ambiguity radius must be a finite nonnegative number, got {epsilon}"
        )));
    }
    Ok(())
}

/// Worst-case premium over the order-1 Wasserstein ball of radius
/// epsilon. The loading is epsilon times the sup of the density;
/// attained exactly when the density has a flat top.
pub fn robust_premium_r1(
    dist: &Distribution,
    h: &Distortion,
    epsilon: f64,
) -> Result<RobustResult> {
    check_epsilon(epsilon)?;
    let base = premium(dist, h)?.value;
    if epsilon == 0.0 {
        return Ok(RobustResult {
            value: base,
            status: RobustStatus::Attained,
            worst_case: Some(WorstCase {
                base: dist.clone(),
                shift: ShiftFn::None,
            }),
            ambiguity_premium: 0.0,
        });
    }
    if !h.is_bounded() {
        return Ok(RobustResult {
            value: f64::INFINITY,
            status: RobustStatus::Unbounded,
            worst_case: None,
            ambiguity_premium: f64::INFINITY,
        });
    }
    let sup = h.sup_norm();
    let value = base + epsilon * sup;
    let eta = h.flat_top_width();
    if eta > 0.0 {
        Ok(RobustResult {
            value,
            status: RobustStatus::Attained,
            worst_case: Some(WorstCase {
                base: dist.clone(),
                shift: ShiftFn::TopSlab {
                    eta,
                    amount: epsilon / eta,
                },
            }),
            ambiguity_premium: epsilon * sup,
        })
    } else {
        Ok(RobustResult {
            value,
            status: RobustStatus::ApproachableNotAttained,
            worst_case: None,
            ambiguity_premium: epsilon * sup,
        })
    }
}

/// Feasible family approaching the order-1 supremum: spread the whole
/// budget over the top 1/n slab. Its premium increases in n toward the
/// supremum (to infinity when the density is unbounded).
pub fn approximating_family(dist: &Distribution, epsilon: f64, n: usize) -> Result<WorstCase> {
    check_epsilon(epsilon)?;
    if n == 0 {
        return Err(Error::config("slab count must be positive"));
    }
    Ok(WorstCase {
        base: dist.clone(),
        shift: ShiftFn::TopSlab {
            eta: 1.0 / n as f64,
            amount: epsilon * n as f64,
        },
    })
}

/// Worst-case premium over the order-p ball, p > 1. With q the conjugate
/// exponent, a finite ||h||_q gives the value base + epsilon * ||h||_q,
/// attained by shifting quantiles proportionally to h^(q/p).
pub fn robust_premium_rp(
    dist: &Distribution,
    h: &Distortion,
    epsilon: f64,
    p: f64,
) -> Result<RobustResult> {
    check_epsilon(epsilon)?;
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::domain(format!(
            "ball order must exceed 1 (use the order-1 form otherwise), got {p}"
        )));
    }
    let base = premium(dist, h)?.value;
    if epsilon == 0.0 {
        return Ok(RobustResult {
            value: base,
            status: RobustStatus::Attained,
            worst_case: Some(WorstCase {
                base: dist.clone(),
                shift: ShiftFn::None,
            }),
            ambiguity_premium: 0.0,
        });
    }
    let q = conjugate(p);
    let qnorm = h.q_norm(q)?;
    if qnorm.is_finite() {
        Ok(RobustResult {
            value: base + epsilon * qnorm,
            status: RobustStatus::Attained,
            worst_case: Some(WorstCase {
                base: dist.clone(),
                shift: ShiftFn::PowerOfDensity {
                    epsilon,
                    p,
                    q,
                    qnorm,
                    distortion: h.clone(),
                },
            }),
            ambiguity_premium: epsilon * qnorm,
        })
    } else {
        match diagnose_boundedness(h, p, p)? {
            Boundedness::Unbounded => Ok(RobustResult {
                value: f64::INFINITY,
                status: RobustStatus::Unbounded,
                worst_case: None,
                ambiguity_premium: f64::INFINITY,
            }),
            _ => Err(Error::Indeterminate(format!(
                "the conjugate norm of the density is infinite at order {q}; \
                 no finite worst case is certified and unboundedness is not established"
            ))),
        }
    }
}

/// Dispatch on an ambiguity description. Only the plain loss metric
/// supports valuation; power ground metrics are diagnosis-only.
pub fn robust_premium(
    dist: &Distribution,
    h: &Distortion,
    spec: &AmbiguitySpec,
) -> Result<RobustResult> {
    spec.validate()?;
    match spec.metric {
        GroundMetric::D1 => {
            if spec.r == 1.0 {
                robust_premium_r1(dist, h, spec.epsilon)
            } else {
                robust_premium_rp(dist, h, spec.epsilon, spec.r)
            }
        }
        GroundMetric::Dp { .. } => Err(Error::config(
            "power ground metrics support boundedness diagnosis only; \
             see the d_p ball check",
        )),
    }
}

/// Whether the robust premium over a ball is provably finite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundedness {
    Bounded,
    Unbounded,
    Undetermined,
}

/// Decide finiteness of the worst case over an order-r ball for losses
/// with finite p-th moment. Sufficient conditions only; the gap between
/// them is reported as undetermined rather than guessed.
pub fn diagnose_boundedness(h: &Distortion, p: f64, r: f64) -> Result<Boundedness> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::domain(format!(
            "moment order must be at least 1, got {p}"
        )));
    }
    if !r.is_finite() || r < 1.0 {
        return Err(Error::domain(format!(
            "ball order must be at least 1, got {r}"
        )));
    }
    if r == 1.0 {
        return Ok(if h.is_bounded() {
            Boundedness::Bounded
        } else {
            Boundedness::Unbounded
        });
    }
    // bounded whenever the norm conjugate to the weaker of the two
    // orders is finite
    let q0 = conjugate(p.min(r));
    if h.q_norm(q0)?.is_finite() {
        return Ok(Boundedness::Bounded);
    }
    // fractional-power densities blow up at a known critical exponent:
    // strictly past it along the ball order, no finite radius tames them
    if let Distortion::Power { s } = h {
        if *s < 1.0 {
            let critical = 1.0 / (1.0 - s);
            let qr = conjugate(r);
            if qr > critical {
                return Ok(Boundedness::Unbounded);
            }
        }
    }
    Ok(Boundedness::Undetermined)
}

/// Finiteness of the worst case over a ball in the order-r transport
/// distance with the p-th-power ground metric. The power changes the
/// value, not whether it is finite, so this delegates to the plain
/// diagnosis at the ball order.
pub fn dp_ball_bounded(h: &Distortion, p: f64, r: f64) -> Result<Boundedness> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::domain(format!(
            "ground-metric power must be at least 1, got {p}"
        )));
    }
    diagnose_boundedness(h, r, r)
}

/// Premium continuity: |pi_h(F) - pi_h(G)| is at most ||h||_q W_p(F, G)
/// with q conjugate to p. Errors when the norm is infinite.
pub fn continuity_bound(
    h: &Distortion,
    f: &Distribution,
    g: &Distribution,
    p: f64,
) -> Result<f64> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::domain(format!(
            "moment order must be at least 1, got {p}"
        )));
    }
    let qnorm = h.q_norm(conjugate(p))?;
    if !qnorm.is_finite() {
        return Err(Error::NoFiniteBound(format!(
            "the density norm at the conjugate order of {p} is infinite"
        )));
    }
    Ok(qnorm * wasserstein(f, g, p)?)
}

/// Continuity bound through a dominating density: if h <= c * s
/// pointwise, then c ||s||_q W_p bounds the premium gap even when h's
/// own norm is infinite. The dominance hypothesis is checked on a fine
/// grid and violations are an error.
pub fn dominated_continuity_bound(
    h: &Distortion,
    c: f64,
    dominating: &Distortion,
    f: &Distribution,
    g: &Distribution,
    p: f64,
) -> Result<f64> {
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::domain(format!(
            "dominance constant must be positive, got {c}"
        )));
    }
    const GRID: usize = 10_001;
    for i in 0..GRID {
        let v = (i as f64 / (GRID - 1) as f64).min(V_SUP);
        let lhs = h.density(v);
        let rhs = c * dominating.density(v);
        if lhs > rhs + 1e-9 * (1.0 + rhs.abs()) {
            return Err(Error::domain(format!(
                "dominance fails at v = {v}: density {lhs} exceeds {rhs}"
            )));
        }
    }
    Ok(c * continuity_bound(dominating, f, g, p)?)
}

/// Continuity of prices of transformed losses: a Hoelder payoff map with
/// exponent beta and constant H turns an order-r distance on the
/// originals into H ||h||_q W_r^beta on the images, with q conjugate to
/// r / beta.
pub fn partial_coverage_bound(
    h: &Distortion,
    transform: &PayoffTransform,
    f: &Distribution,
    g: &Distribution,
    r: f64,
) -> Result<f64> {
    if !r.is_finite() || r < 1.0 {
        return Err(Error::domain(format!(
            "transport order must be at least 1, got {r}"
        )));
    }
    let beta = transform.hoelder_exponent();
    let constant = transform.hoelder_constant();
    let p = r / beta;
    let qnorm = h.q_norm(conjugate(p))?;
    if !qnorm.is_finite() {
        return Err(Error::NoFiniteBound(format!(
            "the density norm at the conjugate order of {p} is infinite"
        )));
    }
    Ok(qnorm * constant * wasserstein(f, g, r)?.powf(beta))
}

/// Evaluate the certainty-equivalence premium of the order-p worst case.
/// The true robust certainty equivalent maximizes over the ball jointly
/// with the disutility, so this is a lower bound, reported as such.
pub fn robust_ceq_lower_bound(
    dist: &Distribution,
    h: &Distortion,
    v: &Disutility,
    epsilon: f64,
    p: f64,
) -> Result<f64> {
    let robust = robust_premium_rp(dist, h, epsilon, p)?;
    let worst = robust.worst_case.ok_or_else(|| {
        Error::NoFiniteBound("the order-p worst case is not attained".into())
    })?;
    if *v == Disutility::Identity {
        return worst.premium(h);
    }
    let tol = 1e-10 * dist.mean().abs().max(1.0);
    let captured: std::cell::RefCell<Option<Error>> = std::cell::RefCell::new(None);
    let mut breaks = h.breakpoints();
    breaks.extend(dist.quantile_breakpoints());
    let outcome = {
        let f = |u: f64| {
            let uc = u.min(V_SUP);
            let evaluated = worst.quantile(uc).and_then(|x| v.value(x));
            match evaluated {
                Ok(y) => y * h.density(uc),
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
        TailIntegral::Converged(acc) => v.inverse(acc),
        TailIntegral::Diverged => Err(Error::Unbounded(
            "disutility-weighted worst-case integral diverges".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::premium::distortion_premium;

    fn four_points() -> Distribution {
        EmpiricalDistribution::new(vec![1.0, 2.0, 3.0, 4.0])
            .unwrap()
            .into()
    }

    #[test]
    fn top_slab_is_exact_for_tail_expectation() {
        let dist = four_points();
        let h = Distortion::avar(0.5).unwrap();
        let r = robust_premium_r1(&dist, &h, 0.1).unwrap();
        assert_eq!(r.status, RobustStatus::Attained);
        assert!((r.value - 3.7).abs() < 1e-12, "value {}", r.value);
        assert!((r.ambiguity_premium - 0.2).abs() < 1e-12);
        let worst = r.worst_case.unwrap();
        assert_eq!(worst.shift_at(0.25), 0.0);
        assert!((worst.shift_at(0.75) - 0.2).abs() < 1e-12);
        assert!((worst.premium(&h).unwrap() - 3.7).abs() < 1e-12);
        assert!((worst.distance(1.0).unwrap() - 0.1).abs() < 1e-12);
        let sample = worst.materialize(4).unwrap();
        assert_eq!(sample.values(), &[1.0, 2.0, 3.2, 4.2]);
    }

    #[test]
    fn zero_radius_returns_the_baseline() {
        let dist = four_points();
        let h = Distortion::power(2.0).unwrap();
        let base = premium(&dist, &h).unwrap().value;
        let r = robust_premium_r1(&dist, &h, 0.0).unwrap();
        assert_eq!(r.status, RobustStatus::Attained);
        assert_eq!(r.value, base);
        assert_eq!(r.ambiguity_premium, 0.0);
        assert_eq!(r.worst_case.unwrap().distance(1.0).unwrap(), 0.0);
    }

    #[test]
    fn strictly_increasing_density_gives_a_supremum() {
        let dist = four_points();
        let h = Distortion::power(2.0).unwrap();
        let base = premium(&dist, &h).unwrap().value;
        let eps = 0.25;
        let r = robust_premium_r1(&dist, &h, eps).unwrap();
        assert_eq!(r.status, RobustStatus::ApproachableNotAttained);
        assert!((r.value - (base + 2.0 * eps)).abs() < 1e-12);
        assert!(r.worst_case.is_none());
        // top-slab family climbs toward the supremum from below
        let mut last = base;
        for n in [2usize, 4, 8, 16] {
            let fam = approximating_family(&dist, eps, n).unwrap();
            let pi = fam.premium(&h).unwrap();
            assert!(pi > last, "n = {n}: {pi} vs {last}");
            assert!(pi <= r.value + 1e-12);
            // budget is exactly spent: distance 1 from the baseline
            assert!((fam.distance(1.0).unwrap() - eps).abs() < 1e-12);
            last = pi;
        }
        // explicit chord value: base + eps(2 - 1/n)
        let fam = approximating_family(&dist, eps, 4).unwrap();
        assert!((fam.premium(&h).unwrap() - (base + eps * (2.0 - 0.25))).abs() < 1e-12);
    }

    #[test]
    fn unbounded_densities_report_unbounded() {
        let dist = four_points();
        for h in [
            Distortion::power(0.8).unwrap(),
            Distortion::wang(0.5).unwrap(),
        ] {
            let r = robust_premium_r1(&dist, &h, 0.1).unwrap();
            assert_eq!(r.status, RobustStatus::Unbounded);
            assert!(r.value.is_infinite());
            assert!(r.worst_case.is_none());
        }
    }

    #[test]
    fn negative_radius_and_low_order_are_rejected() {
        let dist = four_points();
        let h = Distortion::identity();
        assert!(robust_premium_r1(&dist, &h, -0.1).is_err());
        assert!(robust_premium_rp(&dist, &h, 0.1, 1.0).is_err());
        assert!(robust_premium_rp(&dist, &h, 0.1, 0.5).is_err());
    }

    #[test]
    fn order_two_ball_with_square_density() {
        let dist = four_points();
        let h = Distortion::power(2.0).unwrap();
        let base = premium(&dist, &h).unwrap().value;
        let eps = 0.3;
        let r = robust_premium_rp(&dist, &h, eps, 2.0).unwrap();
        assert_eq!(r.status, RobustStatus::Attained);
        let norm = 2.0 / 3.0f64.sqrt();
        assert!((r.value - (base + eps * norm)).abs() < 1e-12);
        let worst = r.worst_case.unwrap();
        // pricing the shifted distribution reproduces the closed form
        assert!((worst.premium(&h).unwrap() - r.value).abs() < 1e-7);
        // and the shift spends exactly the transport budget
        assert!((worst.distance(2.0).unwrap() - eps).abs() < 1e-12);
        // shift is eps * sqrt(3) * v here (q/p = 1)
        assert!((worst.shift_at(0.5) - eps * 3.0f64.sqrt() * 0.5).abs() < 1e-9);
    }

    #[test]
    fn order_two_ball_with_tail_expectation() {
        let dist = four_points();
        let alpha = 0.9;
        let h = Distortion::avar(alpha).unwrap();
        let eps = 0.2;
        let r = robust_premium_rp(&dist, &h, eps, 2.0).unwrap();
        let base = premium(&dist, &h).unwrap().value;
        let expected = base + eps / (1.0 - alpha).sqrt();
        assert!((r.value - expected).abs() < 1e-12, "value {}", r.value);
    }

    #[test]
    fn wang_has_finite_conjugate_norms() {
        let dist = four_points();
        let h = Distortion::wang(0.5).unwrap();
        let r = robust_premium_rp(&dist, &h, 0.1, 2.0).unwrap();
        assert_eq!(r.status, RobustStatus::Attained);
        let norm = (0.25f64 / 2.0).exp(); // exp(lambda^2 (q-1)/2), q = 2
        let base = premium(&dist, &h).unwrap().value;
        assert!((r.value - (base + 0.1 * norm)).abs() < 1e-12);
    }

    #[test]
    fn fractional_power_triggers_diagnosis() {
        let dist = four_points();
        // critical exponent for s = 0.5 is 2; order 1.5 has conjugate 3 > 2
        let h = Distortion::power(0.5).unwrap();
        let r = robust_premium_rp(&dist, &h, 0.1, 1.5).unwrap();
        assert_eq!(r.status, RobustStatus::Unbounded);
        // at the critical order the tools are silent
        match robust_premium_rp(&dist, &h, 0.1, 2.0) {
            Err(Error::Indeterminate(_)) => {}
            other => panic!("expected indeterminate, got {other:?}"),
        }
    }

    #[test]
    fn boundedness_trichotomy() {
        let avar = Distortion::avar(0.9).unwrap();
        let frac = Distortion::power(0.5).unwrap();
        let wang = Distortion::wang(0.5).unwrap();
        assert_eq!(diagnose_boundedness(&avar, 1.0, 1.0).unwrap(), Boundedness::Bounded);
        assert_eq!(diagnose_boundedness(&wang, 1.0, 1.0).unwrap(), Boundedness::Unbounded);
        assert_eq!(diagnose_boundedness(&wang, 2.0, 2.0).unwrap(), Boundedness::Bounded);
        assert_eq!(diagnose_boundedness(&avar, 3.0, 3.0).unwrap(), Boundedness::Bounded);
        assert_eq!(
            diagnose_boundedness(&frac, 1.5, 1.5).unwrap(),
            Boundedness::Unbounded
        );
        assert_eq!(
            diagnose_boundedness(&frac, 2.0, 2.0).unwrap(),
            Boundedness::Undetermined
        );
        // mild fractional power is fine at order 2: conjugate 2 < 1/(1-0.6)
        let mild = Distortion::power(0.6).unwrap();
        assert_eq!(diagnose_boundedness(&mild, 2.0, 2.0).unwrap(), Boundedness::Bounded);
        assert!(diagnose_boundedness(&avar, 0.5, 1.0).is_err());
        // power ground metric: finiteness follows the ball order
        assert_eq!(dp_ball_bounded(&avar, 2.0, 2.0).unwrap(), Boundedness::Bounded);
        assert_eq!(
            dp_ball_bounded(&frac, 2.0, 1.5).unwrap(),
            Boundedness::Unbounded
        );
    }

    #[test]
    fn continuity_bounds_cover_premium_gaps() {
        let f: Distribution = EmpiricalDistribution::new(vec![1.0, 2.0, 3.0, 4.0])
            .unwrap()
            .into();
        let g: Distribution = EmpiricalDistribution::new(vec![1.5, 2.5, 2.5, 5.0])
            .unwrap()
            .into();
        for (h, p) in [
            (Distortion::avar(0.9).unwrap(), 1.0),
            (Distortion::power(3.0).unwrap(), 1.0),
            (Distortion::power(0.8).unwrap(), 2.0),
        ] {
            let bound = continuity_bound(&h, &f, &g, p).unwrap();
            let gap = match (&f, &g) {
                (Distribution::Empirical(ef), Distribution::Empirical(eg)) => {
                    (distortion_premium(ef, &h).value - distortion_premium(eg, &h).value).abs()
                }
                _ => unreachable!(),
            };
            assert!(gap <= bound + 1e-9, "{h:?}: gap {gap} bound {bound}");
        }
        // sup-norm bound with the tail expectation: (1 - alpha)^{-1} W_1
        let h = Distortion::avar(0.9).unwrap();
        let w1 = wasserstein(&f, &g, 1.0).unwrap();
        assert!((continuity_bound(&h, &f, &g, 1.0).unwrap() - 10.0 * w1).abs() < 1e-12);
        // unbounded density at order 1 has no finite bound
        assert!(matches!(
            continuity_bound(&Distortion::wang(0.5).unwrap(), &f, &g, 1.0),
            Err(Error::NoFiniteBound(_))
        ));
    }

    #[test]
    fn dominated_bound_accepts_true_dominance_only() {
        let f: Distribution = EmpiricalDistribution::new(vec![1.0, 2.0, 3.0, 4.0])
            .unwrap()
            .into();
        let g: Distribution = EmpiricalDistribution::new(vec![0.5, 2.0, 3.5, 4.0])
            .unwrap()
            .into();
        let h = Distortion::power(0.5).unwrap();
        // 0.5 (1-v)^{-1/2} <= 1.2 * 0.45 (1-v)^{-0.55} on [0, 1)
        let dominating = Distortion::power(0.45).unwrap();
        let bound = dominated_continuity_bound(&h, 1.2, &dominating, &f, &g, 2.5).unwrap();
        assert!(bound.is_finite() && bound > 0.0);
        // a density that decays faster cannot dominate
        let wrong = Distortion::power(0.6).unwrap();
        assert!(dominated_continuity_bound(&h, 1.0, &wrong, &f, &g, 2.5).is_err());
    }

    #[test]
    fn transformed_contract_bound() {
        let f: Distribution = EmpiricalDistribution::new(vec![0.0, 2.0, 4.0, 8.0])
            .unwrap()
            .into();
        let g: Distribution = EmpiricalDistribution::new(vec![1.0, 2.0, 5.0, 7.0])
            .unwrap()
            .into();
        let layer = PayoffTransform::xl(1.0, 5.0).unwrap();
        let h = Distortion::avar(0.9).unwrap();
        let bound = partial_coverage_bound(&h, &layer, &f, &g, 1.0).unwrap();
        let w1 = wasserstein(&f, &g, 1.0).unwrap();
        assert!((bound - 10.0 * w1).abs() < 1e-12);
    }

    #[test]
    fn ceq_lower_bound_reduces_and_orders() {
        let dist = four_points();
        let h = Distortion::power(2.0).unwrap();
        let eps = 0.2;
        let robust = robust_premium_rp(&dist, &h, eps, 2.0).unwrap();
        let ident = robust_ceq_lower_bound(&dist, &h, &Disutility::identity(), eps, 2.0).unwrap();
        assert!((ident - robust.value).abs() < 1e-7, "{ident} vs {}", robust.value);
        // convex disutility can only raise the certainty equivalent
        let square = Disutility::power(2.0).unwrap();
        let ceq = robust_ceq_lower_bound(&dist, &h, &square, eps, 2.0).unwrap();
        assert!(ceq >= ident - 1e-9, "{ceq} vs {ident}");
        // not available when nothing is attained
        let frac = Distortion::power(0.5).unwrap();
        assert!(robust_ceq_lower_bound(&dist, &frac, &square, eps, 1.5).is_err());
    }
}
