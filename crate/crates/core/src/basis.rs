//! Function bases for estimating a distortion density from observed premiums.
//!
//! Two nondecreasing-density cones are supported:
//!
//! * `step`: indicators of an even partition of [0, 1] into `l` blocks; a
//!   nondecreasing coefficient vector gives a nondecreasing step density.
//! * `spline`: integrated quadratic splines (I-splines) on an even knot grid
//!   with `L` subintervals, plus the constant function. Each member is
//!   nondecreasing, so any nonnegative coefficient vector gives a smooth
//!   nondecreasing density.
//!
//! Members are kept as exact piecewise polynomials so design matrices and
//! premiums of basis elements are computed without quadrature error.

use crate::empirical::EmpiricalDistribution;
use crate::error::{Error, Result};
use crate::poly::PiecewisePoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    Step,
    Spline,
}

/// A density basis on [0, 1].
#[derive(Clone, Debug)]
pub struct Basis {
    kind: BasisKind,
    /// Number of subintervals of the underlying grid (equals `size` for
    /// step bases; `size - 3` for spline bases).
    subintervals: usize,
    members: Vec<PiecewisePoly>,
    integrals: Vec<f64>,
}

impl Basis {
    /// Indicator basis on `l` equal blocks.
    pub fn step(l: usize) -> Result<Basis> {
        if l == 0 {
            return Err(Error::config("step basis needs at least one block"));
        }
        let breaks = even_grid(l);
        let members = (0..l)
            .map(|k| {
                let mut coeffs = vec![vec![0.0]; l];
                coeffs[k] = vec![1.0];
                PiecewisePoly::new(breaks.clone(), coeffs)
            })
            .collect();
        Ok(Basis {
            kind: BasisKind::Step,
            subintervals: l,
            members,
            integrals: vec![1.0 / l as f64; l],
        })
    }

    /// I-spline basis on `big_l` subintervals plus the constant function;
    /// dimension is `big_l + 3`.
    pub fn spline(big_l: usize) -> Result<Basis> {
        if big_l == 0 {
            return Err(Error::config("spline basis needs at least one subinterval"));
        }
        let breaks = even_grid(big_l);
        let bumps = normalized_quadratic_splines(big_l, &breaks);
        let mut members = Vec::with_capacity(big_l + 3);
        let mut integrals = Vec::with_capacity(big_l + 3);
        for m in &bumps {
            // integrate the unit-mass bump, then pin the value at 1 to
            // exactly one so the member is a distribution function
            let ramp = m.antiderivative();
            let member = ramp.scale(1.0 / ramp.eval(1.0));
            integrals.push(member.integral_on(0.0, 1.0));
            members.push(member);
        }
        members.push(PiecewisePoly::constant(breaks, 1.0));
        integrals.push(1.0);
        Ok(Basis {
            kind: BasisKind::Spline,
            subintervals: big_l,
            members,
            integrals,
        })
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn subintervals(&self) -> usize {
        self.subintervals
    }

    pub fn members(&self) -> &[PiecewisePoly] {
        &self.members
    }

    /// Masses of the members: the linear constraint for a probability
    /// density is `integrals . coefficients = 1`.
    pub fn integrals(&self) -> &[f64] {
        &self.integrals
    }

    /// Evaluate the density `sum_k coefficients[k] member_k` at `v`.
    pub fn density_at(&self, coefficients: &[f64], v: f64) -> f64 {
        self.members
            .iter()
            .zip(coefficients)
            .map(|(m, &c)| c * m.eval(v))
            .sum()
    }

    /// Exact cell averages: entry (i, k) is `n int_{(i-1)/n}^{i/n} member_k`.
    /// Rows sum the member masses, so columns of the result against order
    /// statistics reproduce premiums of basis elements exactly.
    pub fn design_matrix(&self, n: usize) -> Vec<Vec<f64>> {
        let antiderivatives: Vec<PiecewisePoly> =
            self.members.iter().map(|m| m.antiderivative()).collect();
        (0..n)
            .map(|i| {
                let lo = i as f64 / n as f64;
                let hi = (i + 1) as f64 / n as f64;
                antiderivatives
                    .iter()
                    .map(|a| a.eval(hi) - a.eval(lo))
                    .collect()
            })
            .collect()
    }

    /// Premiums of the basis members under an empirical distribution: entry
    /// k is `sum_i x_(i) int_{(i-1)/n}^{i/n} member_k`, the price row used
    /// by the estimation problem.
    pub fn price_row(&self, sample: &EmpiricalDistribution) -> Result<Vec<f64>> {
        let n = sample.n();
        if self.kind == BasisKind::Step && n % self.subintervals != 0 {
            return Err(Error::config(format!(
                "step basis with {} blocks needs the sample size to be a multiple of it, got {n}",
                self.subintervals
            )));
        }
        let design = self.design_matrix(n);
        let xs = sample.values();
        let mut row = vec![0.0; self.size()];
        for (i, cells) in design.iter().enumerate() {
            for (k, &a) in cells.iter().enumerate() {
                row[k] += xs[i] * a;
            }
        }
        Ok(row)
    }
}

fn even_grid(l: usize) -> Vec<f64> {
    (0..=l).map(|k| k as f64 / l as f64).collect()
}

/// Quadratic splines of unit mass on the clamped knot grid
/// 0, 0, 0, 1/L, ..., (L-1)/L, 1, 1, 1; there are L + 2 of them and each is
/// nonnegative with a single bump.
fn normalized_quadratic_splines(big_l: usize, breaks: &[f64]) -> Vec<PiecewisePoly> {
    let l = big_l as i64;
    let knot = |k: i64| k.clamp(0, l) as f64 / l as f64;
    // degree 0: indicators of the grid cells, empty spans are zero
    let mut level: Vec<PiecewisePoly> = (-2..=l + 1)
        .map(|k| {
            if (0..l).contains(&k) {
                let mut coeffs = vec![vec![0.0]; big_l];
                coeffs[k as usize] = vec![1.0];
                PiecewisePoly::new(breaks.to_vec(), coeffs)
            } else {
                PiecewisePoly::zero(breaks.to_vec())
            }
        })
        .collect();
    for d in 1..=2i64 {
        let lo = -2;
        let hi = l + 1 - d;
        let mut next = Vec::with_capacity((hi - lo + 1) as usize);
        for k in lo..=hi {
            let left = &level[(k - lo) as usize];
            let right = &level[(k - lo + 1) as usize];
            let mut acc = PiecewisePoly::zero(breaks.to_vec());
            let denom = knot(k + d) - knot(k);
            if denom > 0.0 {
                acc = acc.add(&left.mul_linear(-knot(k) / denom, 1.0 / denom));
            }
            let denom = knot(k + d + 1) - knot(k + 1);
            if denom > 0.0 {
                acc = acc.add(&right.mul_linear(knot(k + d + 1) / denom, -1.0 / denom));
            }
            next.push(acc);
        }
        level = next;
    }
    // scale each bump N_k to unit mass: int N_k = (t_{k+3} - t_k) / 3
    level
        .into_iter()
        .enumerate()
        .map(|(idx, n)| {
            let k = idx as i64 - 2;
            n.scale(3.0 / (knot(k + 3) - knot(k)))
        })
        .collect()
}
