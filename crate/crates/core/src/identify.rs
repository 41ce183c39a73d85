//! Design-matrix assembly for recovering a distortion density from
//! observed contract prices.
//!
//! Each contract contributes one price row: the row entry for basis
//! member k is the exact integral of that member against the contract's
//! empirical quantile function. Fitting then reduces to constrained
//! least squares on those rows (see `qp`).

use crate::basis::{Basis, BasisKind};
use crate::empirical::EmpiricalDistribution;
use crate::error::{Error, Result};

/// Price rows for a set of contracts over a fixed basis, plus the
/// per-cell member integrals shared by every contract.
#[derive(Clone, Debug)]
pub struct DesignMatrix {
    basis: Basis,
    /// n x l: integral of member k over the i-th probability cell.
    cells: Vec<Vec<f64>>,
    /// Unit-interval mass of each member.
    masses: Vec<f64>,
    /// m x l: exact price of contract j under each basis member.
    prices: Vec<Vec<f64>>,
}

impl DesignMatrix {
    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn cells(&self) -> &[Vec<f64>] {
        &self.cells
    }

    pub fn member_masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn price_rows(&self) -> &[Vec<f64>] {
        &self.prices
    }

    pub fn contracts(&self) -> usize {
        self.prices.len()
    }

    pub fn members(&self) -> usize {
        self.masses.len()
    }
}

fn assemble(samples: &[Vec<f64>], basis: Basis) -> Result<DesignMatrix> {
    if samples.is_empty() {
        return Err(Error::config("need at least one contract to identify"));
    }
    let n = samples[0].len();
    if samples.iter().any(|s| s.len() != n) {
        return Err(Error::config(
            "all contracts must carry the same number of losses",
        ));
    }
    let mut prices = Vec::with_capacity(samples.len());
    for sample in samples {
        let emp = EmpiricalDistribution::new(sample.clone())?;
        prices.push(basis.price_row(&emp)?);
    }
    let cells = basis.design_matrix(n);
    let masses = basis.integrals().to_vec();
    Ok(DesignMatrix {
        basis,
        cells,
        masses,
        prices,
    })
}

/// Step basis on `l` equal subintervals; each sample size must be a
/// multiple of `l` so block averages are exact.
pub fn build_step_design(samples: &[Vec<f64>], l: usize) -> Result<DesignMatrix> {
    assemble(samples, Basis::step(l)?)
}

/// Smooth basis: normalized integrated quadratic splines on `l` equal
/// subintervals, plus the constant member.
pub fn build_spline_basis(l: usize) -> Result<Basis> {
    Basis::spline(l)
}

pub fn build_spline_design(samples: &[Vec<f64>], basis: &Basis) -> Result<DesignMatrix> {
    if basis.kind() != BasisKind::Spline {
        return Err(Error::config("spline design needs a spline basis"));
    }
    assemble(samples, basis.clone())
}

/// One-call identification: build the design for the requested basis and
/// fit the observed prices.
pub fn identify(
    samples: &[Vec<f64>],
    observed_prices: &[f64],
    kind: BasisKind,
    size: usize,
) -> Result<crate::qp::FitResult> {
    let design = match kind {
        BasisKind::Step => build_step_design(samples, size)?,
        BasisKind::Spline => build_spline_design(samples, &build_spline_basis(size)?)?,
    };
    crate::qp::solve_qp(&design, observed_prices)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_rows_are_block_means() {
        let d = build_step_design(&[vec![1.0, 2.0, 3.0, 4.0]], 2).unwrap();
        assert_eq!(d.contracts(), 1);
        assert_eq!(d.members(), 2);
        // mean of {1,2} and of {3,4}, each scaled by the cell width 1/2
        assert_eq!(d.price_rows()[0], vec![0.75, 1.75]);
        assert_eq!(d.member_masses(), &[0.5, 0.5]);
    }

    #[test]
    fn single_block_is_the_scaled_mean() {
        let d = build_step_design(&[vec![2.0, 4.0, 9.0]], 1).unwrap();
        assert!((d.price_rows()[0][0] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn indivisible_sample_size_is_rejected() {
        assert!(build_step_design(&[vec![1.0, 2.0, 3.0, 4.0]], 3).is_err());
    }

    #[test]
    fn no_contracts_is_rejected() {
        assert!(build_step_design(&[], 2).is_err());
        let empty: Vec<Vec<f64>> = vec![];
        let basis = build_spline_basis(5).unwrap();
        assert!(build_spline_design(&empty, &basis).is_err());
    }

    #[test]
    fn mismatched_sample_sizes_are_rejected() {
        let samples = vec![vec![1.0, 2.0], vec![1.0, 2.0, 3.0]];
        let basis = build_spline_basis(2).unwrap();
        assert!(build_spline_design(&samples, &basis).is_err());
    }

    #[test]
    fn spline_design_references() {
        // five samples, five subintervals: member 2 is the first ramp with
        // full-width support (rises as 62.5 v^3 / 3, completes at 0.6), so
        // its first-cell integral is 62.5 * 0.2^4 / 12 = 1/120; member 0 is
        // the edge ramp completing at 0.2, first-cell integral 0.15
        let basis = build_spline_basis(5).unwrap();
        let d = build_spline_design(&[vec![1.0, 1.0, 1.0, 1.0, 1.0]], &basis).unwrap();
        assert!((d.cells()[0][2] - 1.0 / 120.0).abs() < 1e-12);
        assert!((d.cells()[0][0] - 0.15).abs() < 1e-12);
        // constant member spreads 1/n over every cell
        for row in d.cells() {
            let last = *row.last().unwrap();
            assert!((last - 0.2).abs() < 1e-12);
        }
        // cell integrals of each member add up to its mass
        for k in 0..d.members() {
            let total: f64 = d.cells().iter().map(|row| row[k]).sum();
            assert!((total - d.member_masses()[k]).abs() < 1e-12);
        }
        // constant losses price to the member masses
        for k in 0..d.members() {
            assert!((d.price_rows()[0][k] - d.member_masses()[k]).abs() < 1e-12);
        }
    }
}
