//! Distortion-based insurance pricing.
//!
//! A premium principle reweights loss quantiles by a nonnegative,
//! nondecreasing density on the unit interval with total mass one. This
//! crate prices samples and parametric models under such densities,
//! recovers a density from observed contract prices by constrained least
//! squares, and quantifies how premia move when the loss model itself is
//! only known up to a transport-distance ball.
//!
//! Entry points:
//! * [`premium::distortion_premium`] / [`premium::distortion_premium_analytic`]
//!   price a sample or a parametric model under a [`distortion::Distortion`].
//! * [`identify::identify`] fits a density to observed prices over a step
//!   or spline basis; [`qp::solve_qp`] exposes the underlying solver.
//! * [`ambiguity::robust_premium_r1`] / [`ambiguity::robust_premium_rp`]
//!   give worst-case premia over Wasserstein neighborhoods, with explicit
//!   attainment status and worst-case representations.
//! * [`wasserstein::wasserstein`] computes the transport distances used
//!   throughout.
//! * [`cli`] wires everything into the `premia` binary.

pub mod ambiguity;
pub mod basis;
pub mod cli;
pub mod distortion;
pub mod distribution;
pub mod disutility;
pub mod empirical;
pub mod error;
pub mod identify;
pub mod io;
pub mod parametric;
pub mod poly;
pub mod premium;
pub mod qp;
pub mod quad;
pub mod rng;
pub mod simulate;
pub mod special;
pub mod transform;
pub mod wasserstein;

pub use ambiguity::{
    approximating_family, continuity_bound, diagnose_boundedness, dominated_continuity_bound,
    dp_ball_bounded, partial_coverage_bound, robust_ceq_lower_bound, robust_premium,
    robust_premium_r1, robust_premium_rp, AmbiguitySpec, Boundedness, GroundMetric, RobustResult,
    RobustStatus, ShiftFn, WorstCase,
};
pub use basis::{Basis, BasisKind};
pub use distortion::{kusuoka_density, Distortion, MixtureMeasure};
pub use distribution::Distribution;
pub use disutility::Disutility;
pub use empirical::EmpiricalDistribution;
pub use error::{Error, Result};
pub use identify::{
    build_spline_basis, build_spline_design, build_step_design, identify, DesignMatrix,
};
pub use parametric::ParametricModel;
pub use premium::{
    ceq_premium, distortion_premium, distortion_premium_analytic, generalized_premium, premium,
    PremiumQuote, QuoteMethod,
};
pub use qp::{solve_qp, FitResult};
pub use rng::SplitMix64;
pub use simulate::{
    default_bases, run_simulation, LabeledFit, SimulationConfig, SimulationReport, DEFAULT_SEED,
};
pub use transform::{apply_transform, PayoffTransform};
pub use wasserstein::{wasserstein, wasserstein_dp, wasserstein_grid};
