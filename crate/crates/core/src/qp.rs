//! Constrained least-squares fit of basis coefficients to observed
//! prices.
//!
//! Both basis shapes reduce to the same problem: minimize ||Bw - d||^2
//! over the probability simplex {w >= 0, sum w = 1}.
//!
//! * Step basis: the density must be nondecreasing with unit mass.
//!   Writing it through its increments and absorbing the mass constraint
//!   turns the increments into simplex weights; the reduced columns are
//!   rescaled suffix sums of the price columns.
//! * Spline basis: coefficients are nonnegative and the mass constraint
//!   is linear with positive weights (the member masses), so scaling by
//!   those masses lands on the simplex directly.
//!
//! The solver is an active-set method: on the current support it solves
//! the equality-constrained subproblem exactly (null-space basis plus a
//! minimum-norm SVD solve), takes the longest feasible step toward that
//! minimizer, and uses the multiplier estimate to decide which pinned
//! coordinate to release. Termination requires a verified KKT
//! certificate; failing to certify within the iteration budget is an
//! error, never a silent best-effort answer.

use nalgebra::{DMatrix, DVector};

use crate::basis::BasisKind;
use crate::distortion::Distortion;
use crate::error::{Error, Result};
use crate::identify::DesignMatrix;

/// Outcome of a price fit.
#[derive(Clone, Debug)]
pub struct FitResult {
    /// Basis coefficients of the fitted density.
    pub coefficients: Vec<f64>,
    /// The fitted density as a distortion usable for pricing.
    pub fitted_density: Distortion,
    /// Squared residual ||P lambda - pi||^2 against the original rows.
    pub objective: f64,
    /// Simplex coordinates pinned at zero in the reduced problem. For the
    /// step basis index 0 means the density starts at zero and index j
    /// means pieces j-1 and j share a level; for the spline basis index k
    /// means member k is unused.
    pub active_constraints: Vec<usize>,
    /// Active-set iterations used.
    pub iterations: usize,
}

pub fn solve_qp(design: &DesignMatrix, observed: &[f64]) -> Result<FitResult> {
    let m = design.contracts();
    let l = design.members();
    if observed.len() != m {
        return Err(Error::config(format!(
            "got {} observed prices for {} contracts",
            observed.len(),
            m
        )));
    }
    if observed.iter().any(|x| !x.is_finite()) {
        return Err(Error::config("observed prices must be finite"));
    }

    let rows = design.price_rows();
    let (b, start) = match design.basis().kind() {
        BasisKind::Step => {
            let lf = l as f64;
            let mut b = DMatrix::zeros(m, l);
            for i in 0..m {
                let mut suffix = 0.0;
                for j in (0..l).rev() {
                    suffix += rows[i][j];
                    b[(i, j)] = suffix * lf / (l - j) as f64;
                }
            }
            let mut start = vec![0.0; l];
            start[0] = 1.0;
            (b, start)
        }
        BasisKind::Spline => {
            let masses = design.member_masses();
            let mut b = DMatrix::zeros(m, l);
            for i in 0..m {
                for k in 0..l {
                    b[(i, k)] = rows[i][k] / masses[k];
                }
            }
            let total: f64 = masses.iter().sum();
            let start: Vec<f64> = masses.iter().map(|a| a / total).collect();
            (b, start)
        }
    };

    let (w, iterations) = solve_simplex_ls(&b, observed, &start, 50 * l.max(10))?;

    let coefficients: Vec<f64> = match design.basis().kind() {
        BasisKind::Step => {
            let mut acc = 0.0;
            (0..l)
                .map(|j| {
                    acc += w[j] * l as f64 / (l - j) as f64;
                    acc
                })
                .collect()
        }
        BasisKind::Spline => {
            let masses = design.member_masses();
            w.iter().zip(masses).map(|(wi, a)| wi / a).collect()
        }
    };

    let fitted_density = match design.basis().kind() {
        BasisKind::Step => {
            let breaks: Vec<f64> = (0..=l).map(|k| k as f64 / l as f64).collect();
            Distortion::piecewise(breaks, coefficients.clone())?
        }
        BasisKind::Spline => {
            Distortion::spline_fit(design.basis().subintervals(), coefficients.clone())?
        }
    };

    let mut objective = 0.0;
    for (row, &target) in rows.iter().zip(observed) {
        let fitted: f64 = row.iter().zip(&coefficients).map(|(p, c)| p * c).sum();
        objective += (fitted - target) * (fitted - target);
    }

    let active_constraints: Vec<usize> = (0..l).filter(|&j| w[j] == 0.0).collect();

    Ok(FitResult {
        coefficients,
        fitted_density,
        objective,
        active_constraints,
        iterations,
    })
}

/// Minimize ||Bw - d||^2 over the simplex, starting from a feasible
/// point. Returns the weights and the iteration count once the KKT
/// conditions hold to within 1e-8 (scaled by the problem data).
fn solve_simplex_ls(
    b: &DMatrix<f64>,
    d: &[f64],
    start: &[f64],
    max_iter: usize,
) -> Result<(Vec<f64>, usize)> {
    let m = b.nrows();
    let l = b.ncols();
    let mut w = start.to_vec();
    let mut free: Vec<bool> = w.iter().map(|&wi| wi > 0.0).collect();
    if !free.iter().any(|&f| f) {
        free[0] = true;
    }

    let mut scale = 1.0f64;
    for j in 0..l {
        let btd: f64 = (0..m).map(|r| b[(r, j)] * d[r]).sum();
        scale = scale.max(btd.abs());
    }
    let dual_tol = 1e-8 * scale;

    let mut best = f64::INFINITY;
    let mut iterations = 0usize;
    loop {
        iterations += 1;
        if iterations > max_iter {
            return Err(Error::Convergence {
                iterations: iterations - 1,
                best_objective: best,
            });
        }

        let support: Vec<usize> = (0..l).filter(|&j| free[j]).collect();
        let anchor = support[0];

        // minimizer over the support with only the sum constraint kept
        let mut w_hat = vec![0.0; l];
        if support.len() == 1 {
            w_hat[anchor] = 1.0;
        } else {
            let cols = support.len() - 1;
            let rhs = DVector::from_fn(m, |r, _| d[r] - b[(r, anchor)]);
            let null_dirs =
                DMatrix::from_fn(m, cols, |r, c| b[(r, support[c + 1])] - b[(r, anchor)]);
            let svd = null_dirs.svd(true, true);
            let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
            let eps = sigma_max * 1e-12 * m.max(cols) as f64;
            let t = svd
                .solve(&rhs, eps)
                .map_err(Error::config)?;
            let mut moved = 0.0;
            for (c, &j) in support[1..].iter().enumerate() {
                w_hat[j] = t[c];
                moved += t[c];
            }
            w_hat[anchor] = 1.0 - moved;
        }

        if support.iter().all(|&j| w_hat[j] >= -1e-12) {
            for j in 0..l {
                w[j] = if free[j] { w_hat[j].max(0.0) } else { 0.0 };
            }
            renormalize(&mut w);

            // gradient of the squared residual
            let mut resid = vec![0.0; m];
            let mut objective = 0.0;
            for r in 0..m {
                let fitted: f64 = (0..l).map(|j| b[(r, j)] * w[j]).sum();
                resid[r] = fitted - d[r];
                objective += resid[r] * resid[r];
            }
            best = best.min(objective);
            let g: Vec<f64> = (0..l)
                .map(|j| 2.0 * (0..m).map(|r| b[(r, j)] * resid[r]).sum::<f64>())
                .collect();
            let nu: f64 = support.iter().map(|&j| g[j]).sum::<f64>() / support.len() as f64;

            let mut entering = None;
            let mut worst = -dual_tol;
            for j in 0..l {
                if !free[j] && g[j] - nu < worst {
                    worst = g[j] - nu;
                    entering = Some(j);
                }
            }
            match entering {
                Some(j) => free[j] = true,
                None => {
                    // certify stationarity on the support before accepting
                    let drift = support
                        .iter()
                        .map(|&j| (g[j] - nu).abs())
                        .fold(0.0, f64::max);
                    if drift > 10.0 * dual_tol {
                        return Err(Error::Convergence {
                            iterations,
                            best_objective: best,
                        });
                    }
                    return Ok((w, iterations));
                }
            }
        } else {
            // step as far toward the subproblem minimizer as feasibility allows
            let mut theta = 1.0;
            let mut blocker = None;
            for &j in &support {
                if w_hat[j] < 1e-12 && w[j] > w_hat[j] {
                    let t_j = w[j] / (w[j] - w_hat[j]);
                    if t_j < theta {
                        theta = t_j;
                        blocker = Some(j);
                    }
                }
            }
            for &j in &support {
                w[j] += theta * (w_hat[j] - w[j]);
                if w[j] <= 1e-14 {
                    w[j] = 0.0;
                    free[j] = false;
                }
            }
            if let Some(j) = blocker {
                w[j] = 0.0;
                free[j] = false;
            }
            if !free.iter().any(|&f| f) {
                // numerically everything collapsed; keep the largest weight
                let j = (0..l)
                    .max_by(|&a, &b_| w[a].partial_cmp(&w[b_]).unwrap())
                    .unwrap();
                free[j] = true;
                w[j] = 1.0;
            }
            renormalize(&mut w);
        }
    }
}

fn renormalize(w: &mut [f64]) {
    let total: f64 = w.iter().sum();
    if total > 0.0 {
        for wi in w.iter_mut() {
            *wi /= total;
        }
    }
}
