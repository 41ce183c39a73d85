//! Distortion functions and their densities.
//!
//! A distortion is described here by the density h of its measure on [0, 1]:
//! h is nonnegative, nondecreasing and integrates to one, and the premium of
//! a risk is the h-weighted average of its quantile function. The associated
//! distortion function is g(v) = 1 - H(1 - v) where H is the running
//! integral of h; concavity of g corresponds exactly to h nondecreasing.
//!
//! Besides the classic parametric families (dual power, normal transform,
//! tail expectation) the type carries piecewise constant densities, smooth
//! spline densities produced by the estimation routines, and mixtures of
//! tail expectations with a diffuse component.

use serde::{Deserialize, Serialize};

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::poly::PiecewisePoly;
use crate::quad::{integrate_unit_with_tail, integrate_with_breakpoints, TailIntegral};
use crate::special::{normal_cdf, normal_quantile};

const MASS_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawDistortion", into = "RawDistortion")]
pub enum Distortion {
    /// h = 1: the premium is the plain expectation.
    Identity,
    /// Power-law density. For s >= 1, h(v) = s v^{s-1} (bounded); for
    /// 0 < s < 1, h(v) = s (1-v)^{s-1} (unbounded), the proportional-hazard
    /// transform g(v) = v^s.
    Power { s: f64 },
    /// Normal transform g(v) = Phi(Phi^{-1}(v) + lambda).
    Wang { lambda: f64 },
    /// Average value at risk at level alpha: h = 1/(1-alpha) above alpha.
    AVaR { alpha: f64 },
    /// Nondecreasing step density; piece k takes `values[k]` on
    /// `[breaks[k], breaks[k+1])`.
    Piecewise { breaks: Vec<f64>, values: Vec<f64> },
    /// Smooth nondecreasing density from the monotone spline cone.
    Spline {
        subintervals: usize,
        coefficients: Vec<f64>,
        density: PiecewisePoly,
        antiderivative: PiecewisePoly,
    },
    /// Mixture of tail expectations with a diffuse part: atoms (alpha_i, w_i)
    /// contribute w_i/(1-alpha_i) above alpha_i and the diffuse mass
    /// contributes -ln(1-v). Always has `lebesgue > 0`; pure atom mixtures
    /// collapse to `Piecewise`.
    Kusuoka { atoms: Vec<(f64, f64)>, lebesgue: f64 },
}

impl Distortion {
    pub fn identity() -> Self {
        Distortion::Identity
    }

    pub fn power(s: f64) -> Result<Self> {
        if !s.is_finite() || s <= 0.0 {
            return Err(Error::InvalidDistortion(format!(
                "power exponent must be positive and finite, got {s}"
            )));
        }
        Ok(Distortion::Power { s })
    }

    pub fn wang(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidDistortion(format!(
                "normal transform shift must be nonnegative and finite, got {lambda}"
            )));
        }
        Ok(Distortion::Wang { lambda })
    }

    pub fn avar(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || !(0.0..1.0).contains(&alpha) {
            return Err(Error::InvalidDistortion(format!(
                "tail level must lie in [0, 1), got {alpha}"
            )));
        }
        Ok(Distortion::AVaR { alpha })
    }

    pub fn piecewise(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::piecewise_inner(breaks, values, true)
    }

    fn piecewise_inner(mut breaks: Vec<f64>, mut values: Vec<f64>, check_mass: bool) -> Result<Self> {
        if breaks.len() < 2 || values.len() + 1 != breaks.len() {
            return Err(Error::InvalidDistortion(
                "piecewise density needs k+1 breaks for k values".into(),
            ));
        }
        if breaks.iter().chain(values.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidDistortion(
                "piecewise density entries must be finite".into(),
            ));
        }
        if breaks[0].abs() > 1e-12 || (breaks[breaks.len() - 1] - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistortion(
                "piecewise breaks must start at 0 and end at 1".into(),
            ));
        }
        breaks[0] = 0.0;
        *breaks.last_mut().unwrap() = 1.0;
        // drop zero-width pieces, keep order validity
        let mut k = 0;
        while k + 1 < breaks.len() {
            if breaks[k + 1] < breaks[k] {
                return Err(Error::InvalidDistortion(
                    "piecewise breaks must be nondecreasing".into(),
                ));
            }
            if breaks[k + 1] == breaks[k] {
                if k + 1 == breaks.len() - 1 {
                    breaks.remove(k);
                    values.remove(k);
                } else {
                    breaks.remove(k + 1);
                    values.remove(k);
                }
            } else {
                k += 1;
            }
        }
        if values.iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidDistortion(
                "piecewise density values must be nonnegative".into(),
            ));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidDistortion(
                "piecewise density values must be nondecreasing".into(),
            ));
        }
        if check_mass {
            let mass: f64 = values
                .iter()
                .zip(breaks.windows(2))
                .map(|(&v, w)| v * (w[1] - w[0]))
                .sum();
            if (mass - 1.0).abs() > MASS_TOL {
                return Err(Error::InvalidDistortion(format!(
                    "piecewise density must integrate to 1, got {mass}"
                )));
            }
        }
        Ok(Distortion::Piecewise { breaks, values })
    }

    /// Rebuild a smooth density from spline-cone coefficients (the constant
    /// member is the last coefficient).
    pub fn spline_fit(subintervals: usize, coefficients: Vec<f64>) -> Result<Self> {
        let basis = Basis::spline(subintervals)?;
        if coefficients.len() != basis.size() {
            return Err(Error::InvalidDistortion(format!(
                "spline density on {subintervals} subintervals needs {} coefficients, got {}",
                basis.size(),
                coefficients.len()
            )));
        }
        if coefficients.iter().any(|c| !c.is_finite() || *c < -1e-9) {
            return Err(Error::InvalidDistortion(
                "spline coefficients must be nonnegative".into(),
            ));
        }
        let coefficients: Vec<f64> = coefficients.iter().map(|c| c.max(0.0)).collect();
        let mass: f64 = coefficients
            .iter()
            .zip(basis.integrals())
            .map(|(c, a)| c * a)
            .sum();
        if (mass - 1.0).abs() > 1e-7 {
            return Err(Error::InvalidDistortion(format!(
                "spline density must integrate to 1, got {mass}"
            )));
        }
        let mut density = PiecewisePoly::zero(basis.members()[0].breaks().to_vec());
        for (m, &c) in basis.members().iter().zip(&coefficients) {
            if c != 0.0 {
                density = density.add(&m.scale(c));
            }
        }
        let antiderivative = density.antiderivative();
        Ok(Distortion::Spline {
            subintervals,
            coefficients,
            density,
            antiderivative,
        })
    }

    /// Step density read off a published reinsurance pricing table. The raw
    /// table mass slightly exceeds one; by default it is renormalized into a
    /// proper density, with `renormalize = false` keeping the table verbatim
    /// (premiums then carry the table's loading).
    pub fn reinsurer_table(renormalize: bool) -> Self {
        let breaks = vec![
            0.0, 0.85, 0.947, 0.965, 0.975, 0.988, 0.992, 0.993, 0.996, 0.996, 1.0,
        ];
        let values = vec![
            0.8443, 1.1731, 1.4121, 1.7335, 2.4806, 3.6462, 4.0572, 6.5378, 12.702, 14.9436,
        ];
        if renormalize {
            let mass: f64 = values
                .iter()
                .zip(breaks.windows(2))
                .map(|(&v, w)| v * (w[1] - w[0]))
                .sum();
            let scaled = values.iter().map(|v| v / mass).collect();
            Self::piecewise_inner(breaks, scaled, true).expect("table is a valid density")
        } else {
            Self::piecewise_inner(breaks, values, false).expect("table is a valid step function")
        }
    }

    /// Density h(v) of the distortion measure at v in [0, 1]. Unbounded
    /// families return infinity at v = 1.
    pub fn density(&self, v: f64) -> f64 {
        match self {
            Distortion::Identity => 1.0,
            Distortion::Power { s } => {
                if *s >= 1.0 {
                    s * v.powf(s - 1.0)
                } else {
                    s * (1.0 - v).powf(s - 1.0)
                }
            }
            Distortion::Wang { lambda } => {
                if *lambda == 0.0 {
                    1.0
                } else {
                    let z = normal_quantile(1.0 - v.clamp(0.0, 1.0)).expect("level in [0,1]");
                    (-lambda * z - 0.5 * lambda * lambda).exp()
                }
            }
            Distortion::AVaR { alpha } => {
                if v >= *alpha {
                    1.0 / (1.0 - alpha)
                } else {
                    0.0
                }
            }
            Distortion::Piecewise { breaks, values } => {
                let idx = breaks[1..breaks.len() - 1].partition_point(|&b| b <= v);
                values[idx]
            }
            Distortion::Spline { density, .. } => density.eval(v),
            Distortion::Kusuoka { atoms, lebesgue } => {
                let atom_part: f64 = atoms
                    .iter()
                    .filter(|(a, _)| *a <= v)
                    .map(|(a, w)| w / (1.0 - a))
                    .sum();
                atom_part - lebesgue * (1.0 - v).ln()
            }
        }
    }

    /// Running integral H(u) of the density; H(0) = 0 and H(1) = 1 for a
    /// proper density.
    pub fn cdf(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match self {
            Distortion::Identity => u,
            Distortion::Power { s } => {
                if *s >= 1.0 {
                    u.powf(*s)
                } else {
                    1.0 - (1.0 - u).powf(*s)
                }
            }
            Distortion::Wang { lambda } => {
                if u == 0.0 {
                    0.0
                } else if u == 1.0 {
                    1.0
                } else {
                    let z = normal_quantile(1.0 - u).expect("level in (0,1)");
                    1.0 - normal_cdf(z + lambda)
                }
            }
            Distortion::AVaR { alpha } => ((u - alpha) / (1.0 - alpha)).max(0.0),
            Distortion::Piecewise { breaks, values } => {
                let mut acc = 0.0;
                for (k, w) in breaks.windows(2).enumerate() {
                    if u <= w[0] {
                        break;
                    }
                    acc += values[k] * (u.min(w[1]) - w[0]);
                }
                acc
            }
            Distortion::Spline { antiderivative, .. } => antiderivative.eval(u),
            Distortion::Kusuoka { atoms, lebesgue } => {
                let atom_part: f64 = atoms
                    .iter()
                    .filter(|(a, _)| *a <= u)
                    .map(|(a, w)| w * (u - a) / (1.0 - a))
                    .sum();
                let rem = 1.0 - u;
                let diffuse = if rem > 0.0 { rem * rem.ln() + u } else { 1.0 };
                atom_part + lebesgue * diffuse
            }
        }
    }

    /// The distortion function g(v) = 1 - H(1 - v) applied to survival
    /// probabilities.
    pub fn distortion_fn(&self, v: f64) -> f64 {
        1.0 - self.cdf(1.0 - v)
    }

    /// Supremum of the density (its limit at v = 1, by monotonicity).
    pub fn sup_norm(&self) -> f64 {
        match self {
            Distortion::Identity => 1.0,
            Distortion::Power { s } => {
                if *s >= 1.0 {
                    *s
                } else {
                    f64::INFINITY
                }
            }
            Distortion::Wang { lambda } => {
                if *lambda == 0.0 {
                    1.0
                } else {
                    f64::INFINITY
                }
            }
            Distortion::AVaR { alpha } => 1.0 / (1.0 - alpha),
            Distortion::Piecewise { values, .. } => *values.last().unwrap(),
            Distortion::Spline { density, .. } => density.eval(1.0),
            Distortion::Kusuoka { .. } => f64::INFINITY,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.sup_norm().is_finite()
    }

    /// L^q norm of the density for q in [1, infinity]; q = infinity gives
    /// the supremum, and +infinity is a legal return when h is not
    /// q-integrable.
    pub fn q_norm(&self, q: f64) -> Result<f64> {
        if q.is_nan() || q < 1.0 {
            return Err(Error::domain(format!("norm order must be >= 1, got {q}")));
        }
        if q.is_infinite() {
            return Ok(self.sup_norm());
        }
        Ok(match self {
            Distortion::Identity => 1.0,
            Distortion::Power { s } => {
                let t = 1.0 + q * (s - 1.0);
                if t > 0.0 {
                    s / t.powf(1.0 / q)
                } else {
                    f64::INFINITY
                }
            }
            Distortion::Wang { lambda } => (0.5 * lambda * lambda * (q - 1.0)).exp(),
            Distortion::AVaR { alpha } => (1.0 - alpha).powf((1.0 - q) / q),
            Distortion::Piecewise { breaks, values } => values
                .iter()
                .zip(breaks.windows(2))
                .map(|(&v, w)| v.powf(q) * (w[1] - w[0]))
                .sum::<f64>()
                .powf(1.0 / q),
            Distortion::Spline { density, .. } => {
                let interior: Vec<f64> = density.breaks()[1..density.breaks().len() - 1].to_vec();
                let f = |v: f64| density.eval(v).powf(q);
                integrate_with_breakpoints(&f, 0.0, 1.0, &interior, 1e-11).powf(1.0 / q)
            }
            Distortion::Kusuoka { .. } => {
                // the diffuse part grows only logarithmically, so every
                // finite power is integrable
                let f = |v: f64| self.density(v.min(1.0 - f64::EPSILON / 2.0)).powf(q);
                match integrate_unit_with_tail(&f, &self.breakpoints(), 1e-11) {
                    TailIntegral::Converged(x) => x.powf(1.0 / q),
                    TailIntegral::Diverged => f64::INFINITY,
                }
            }
        })
    }

    /// Interior points where the density or its derivative jumps; quadrature
    /// routines split at these.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Distortion::Identity | Distortion::Power { .. } | Distortion::Wang { .. } => vec![],
            Distortion::AVaR { alpha } => {
                if *alpha > 0.0 {
                    vec![*alpha]
                } else {
                    vec![]
                }
            }
            Distortion::Piecewise { breaks, .. } => breaks[1..breaks.len() - 1].to_vec(),
            Distortion::Spline { density, .. } => {
                density.breaks()[1..density.breaks().len() - 1].to_vec()
            }
            Distortion::Kusuoka { atoms, .. } => {
                atoms.iter().map(|(a, _)| *a).filter(|a| *a > 0.0).collect()
            }
        }
    }

    /// Width of the maximal interval [1 - eta, 1] on which the density is
    /// constant at its supremum; zero for strictly increasing densities.
    pub fn flat_top_width(&self) -> f64 {
        match self {
            Distortion::Identity => 1.0,
            Distortion::Power { s } => {
                if *s == 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Distortion::Wang { lambda } => {
                if *lambda == 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Distortion::AVaR { alpha } => 1.0 - alpha,
            Distortion::Piecewise { breaks, values } => {
                let top = *values.last().unwrap();
                let tol = 1e-12 * top.max(1.0);
                let mut start = breaks.len() - 2;
                while start > 0 && (values[start - 1] - top).abs() <= tol {
                    start -= 1;
                }
                1.0 - breaks[start]
            }
            Distortion::Spline { density, .. } => {
                let top = density.eval(1.0);
                let tol = 1e-12 * top.abs().max(1.0);
                let breaks = density.breaks();
                let mut start = density.piece_count();
                while start > 0
                    && density.piece_is_constant(start - 1, tol)
                    && (density.eval(breaks[start - 1]) - top).abs() <= tol
                {
                    start -= 1;
                }
                1.0 - breaks[start]
            }
            Distortion::Kusuoka { .. } => 0.0,
        }
    }
}

/// A mixing measure on tail levels: point masses plus an optional uniform
/// (Lebesgue) component.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct MixtureMeasure {
    /// (level, mass) pairs with levels in [0, 1).
    #[serde(default)]
    pub atoms: Vec<(f64, f64)>,
    /// Mass spread uniformly over [0, 1].
    #[serde(default)]
    pub lebesgue_mass: f64,
}

impl MixtureMeasure {
    pub fn new(atoms: Vec<(f64, f64)>, lebesgue_mass: f64) -> Self {
        MixtureMeasure {
            atoms,
            lebesgue_mass,
        }
    }
}

/// Build a distortion density from a mixture of tail expectations: each atom
/// (alpha_i, w_i) contributes w_i/(1-alpha_i) above alpha_i and a uniform
/// component of mass m spreads as m * (-ln(1 - v)). Masses must sum to one;
/// an atom at level 1 is rejected because it has no density.
pub fn kusuoka_density(measure: &MixtureMeasure) -> Result<Distortion> {
    let atoms = &measure.atoms;
    let lebesgue_mass = measure.lebesgue_mass;
    if !lebesgue_mass.is_finite() || lebesgue_mass < 0.0 {
        return Err(Error::InvalidDistortion(
            "diffuse mass must be nonnegative and finite".into(),
        ));
    }
    let mut total = lebesgue_mass;
    let mut cleaned: Vec<(f64, f64)> = Vec::new();
    for &(a, w) in atoms {
        if !a.is_finite() || !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidDistortion(
                "mixture atoms must have finite levels and nonnegative weights".into(),
            ));
        }
        if !(0.0..1.0).contains(&a) {
            return Err(Error::InvalidDistortion(format!(
                "mixture atom level must lie in [0, 1), got {a}"
            )));
        }
        total += w;
        if w > 0.0 {
            cleaned.push((a, w));
        }
    }
    if (total - 1.0).abs() > MASS_TOL {
        return Err(Error::InvalidDistortion(format!(
            "mixture weights must sum to 1, got {total}"
        )));
    }
    cleaned.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (a, w) in cleaned {
        match merged.last_mut() {
            Some(last) if last.0 == a => last.1 += w,
            _ => merged.push((a, w)),
        }
    }
    if lebesgue_mass == 0.0 {
        // pure atom mixture: the density is an exact step function
        let mut breaks = vec![0.0];
        for &(a, _) in &merged {
            if a > 0.0 {
                breaks.push(a);
            }
        }
        breaks.push(1.0);
        let mut values = Vec::with_capacity(breaks.len() - 1);
        let mut level = 0.0;
        let mut it = merged.iter().peekable();
        for &b in &breaks[..breaks.len() - 1] {
            while let Some(&&(a, w)) = it.peek() {
                if a <= b {
                    level += w / (1.0 - a);
                    it.next();
                } else {
                    break;
                }
            }
            values.push(level);
        }
        Distortion::piecewise(breaks, values)
    } else {
        Ok(Distortion::Kusuoka {
            atoms: merged,
            lebesgue: lebesgue_mass,
        })
    }
}

fn default_true() -> bool {
    true
}

/// Serialization schema: families are tagged by `kind` and carry only their
/// parameters; derived data is rebuilt on load.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawDistortion {
    Identity,
    Power {
        s: f64,
    },
    Wang {
        lambda: f64,
    },
    Avar {
        alpha: f64,
    },
    Piecewise {
        breaks: Vec<f64>,
        values: Vec<f64>,
    },
    Spline {
        subintervals: usize,
        coefficients: Vec<f64>,
    },
    Kusuoka {
        #[serde(default)]
        atoms: Vec<(f64, f64)>,
        #[serde(default)]
        lebesgue: f64,
    },
    ReinsurerTable {
        #[serde(default = "default_true")]
        renormalize: bool,
    },
}

impl TryFrom<RawDistortion> for Distortion {
    type Error = Error;

    fn try_from(raw: RawDistortion) -> Result<Distortion> {
        match raw {
            RawDistortion::Identity => Ok(Distortion::Identity),
            RawDistortion::Power { s } => Distortion::power(s),
            RawDistortion::Wang { lambda } => Distortion::wang(lambda),
            RawDistortion::Avar { alpha } => Distortion::avar(alpha),
            RawDistortion::Piecewise { breaks, values } => Distortion::piecewise(breaks, values),
            RawDistortion::Spline {
                subintervals,
                coefficients,
            } => Distortion::spline_fit(subintervals, coefficients),
            RawDistortion::Kusuoka { atoms, lebesgue } => {
                kusuoka_density(&MixtureMeasure::new(atoms, lebesgue))
            }
            RawDistortion::ReinsurerTable { renormalize } => {
                Ok(Distortion::reinsurer_table(renormalize))
            }
        }
    }
}

impl From<Distortion> for RawDistortion {
    fn from(d: Distortion) -> RawDistortion {
        match d {
            Distortion::Identity => RawDistortion::Identity,
            Distortion::Power { s } => RawDistortion::Power { s },
            Distortion::Wang { lambda } => RawDistortion::Wang { lambda },
            Distortion::AVaR { alpha } => RawDistortion::Avar { alpha },
            Distortion::Piecewise { breaks, values } => {
                RawDistortion::Piecewise { breaks, values }
            }
            Distortion::Spline {
                subintervals,
                coefficients,
                ..
            } => RawDistortion::Spline {
                subintervals,
                coefficients,
            },
            Distortion::Kusuoka { atoms, lebesgue } => {
                RawDistortion::Kusuoka { atoms, lebesgue }
            }
        }
    }
}
