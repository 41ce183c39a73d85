//! Adaptive quadrature on the unit interval.
//!
//! Premium integrals have two awkward features: the integrand can have kinks
//! or jumps at known locations (piecewise distortions, empirical quantiles)
//! and it can blow up at v = 1 (unbounded distortion densities, unbounded
//! quantiles). The strategy is to split at every known breakpoint, run
//! adaptive Simpson on each smooth piece, and treat the last stretch before
//! v = 1 with dyadic windows so that an integrable singularity converges and
//! a non-integrable one is recognized instead of silently truncated.

use std::cell::Cell;

/// Hard cap on integrand evaluations per `adaptive_simpson` call. Rounding
/// noise in an integrand (e.g. quantiles found by iteration) can stall the
/// refinement criterion; without a cap the recursion would grind through the
/// whole depth-50 tree instead of settling for the current estimate.
const EVAL_BUDGET: u32 = 100_000;

/// Adaptive Simpson on [a, b] with absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let budget = Cell::new(EVAL_BUDGET);
    simpson_rec(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 50, &budget)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    budget: &Cell<u32>,
) -> f64 {
    if budget.get() < 2 {
        return whole;
    }
    budget.set(budget.get() - 2);
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, budget)
            + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, budget)
    }
}

/// Integrate f over [a, b], splitting at the supplied interior breakpoints.
pub fn integrate_with_breakpoints(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: f64,
) -> f64 {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let mut lo = a;
    let mut total = 0.0;
    let pieces = cuts.len() + 1;
    for &c in cuts.iter().chain(std::iter::once(&b)) {
        total += adaptive_simpson(f, lo, c, tol / pieces as f64);
        lo = c;
    }
    total
}

/// Outcome of a possibly divergent improper integral over [0, 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TailIntegral {
    Converged(f64),
    Diverged,
}

/// Integrate f on [0, 1) where f may be singular at 1.
///
/// The body [0, 1/2] is split at `breaks`; the tail is summed over dyadic
/// windows [1 - 2^-k, 1 - 2^-(k-1)]. Convergence is declared when window
/// contributions fall below `tol`; divergence when they stop decaying
/// (geometric ratio near or above 1 over several consecutive windows).
pub fn integrate_unit_with_tail(
    f: &dyn Fn(f64) -> f64,
    breaks: &[f64],
    tol: f64,
) -> TailIntegral {
    let body = integrate_with_breakpoints(f, 0.0, 0.5, breaks, tol);
    let mut total = body;
    let mut prev_window = f64::NAN;
    let mut prev_prev = f64::NAN;
    let mut flat_count = 0;
    for k in 1..=60 {
        let lo = 1.0 - 0.5_f64.powi(k);
        let hi = 1.0 - 0.5_f64.powi(k + 1);
        if !(lo < hi && hi < 1.0) {
            // the window endpoints are no longer distinguishable from 1
            break;
        }
        let window = integrate_with_breakpoints(f, lo, hi, breaks, tol * 0.5_f64.powi(k.min(20)));
        if !window.is_finite() {
            return TailIntegral::Diverged;
        }
        total += window;
        if window.abs() < tol {
            return TailIntegral::Converged(total);
        }
        if prev_window.is_finite() && prev_window.abs() > 0.0 {
            if window.abs() >= 0.95 * prev_window.abs() {
                flat_count += 1;
                if flat_count >= 6 {
                    return TailIntegral::Diverged;
                }
            } else {
                flat_count = 0;
            }
        }
        prev_prev = prev_window;
        prev_window = window;
    }
    // ran out of resolvable windows while contributions were still above
    // tol: they decay geometrically per octave (ratio < 0.95, or the flat
    // detector would have fired), so sum the remaining geometric series
    if !prev_window.is_finite() {
        return TailIntegral::Diverged;
    }
    let ratio = if prev_prev.is_finite() && prev_prev.abs() > 0.0 {
        (prev_window / prev_prev).abs()
    } else {
        0.0
    };
    if ratio < 0.95 {
        TailIntegral::Converged(total + prev_window * ratio / (1.0 - ratio))
    } else {
        TailIntegral::Diverged
    }
}
