//! Estimation of a multivariate normal mean under a bounded signal-to-noise
//! ratio.
//!
//! For the canonical model X ~ N_p(θ, σ²I_p), S² ~ σ²χ²_k (independent) with
//! ‖θ‖/σ ≤ m and scale-invariant squared error loss ‖d − θ‖²/σ², this crate
//! provides:
//!
//! * [`specfun`] — confluent hypergeometric and modified Bessel kernels, with
//!   overflow-safe ratio evaluation;
//! * [`estimators`] — multiplier rules h(t) for the unbiased, affine, maximum
//!   likelihood, boundary-uniform Bayes and radial-mixture Bayes families,
//!   plus envelope truncation and the two-sample reduction;
//! * [`risk`] — reproducible, chunk-parallel Monte Carlo risk curves, paired
//!   risk differences under common random numbers, and the conditional risk
//!   decomposition cross-check;
//! * [`analysis`] — grid-based verification of the multiplier inequalities,
//!   monotonicity properties and dominance conditions;
//! * [`quad`] — Gauss-Legendre and adaptive Simpson quadrature.
//!
//! The numeric kernels are generic over the scalar type through
//! [`Scalar`]; the aliases below fix `f64`, which is what the CLI and the
//! verification suites use.

// Negated comparisons such as `!(x > 0.0)` are used on purpose: they
// reject NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod estimators;
pub mod quad;
pub mod risk;
pub mod scalar;
pub mod specfun;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// `f64` instantiations of the main domain types.
pub type Problem64 = estimators::Problem<f64>;
pub type EstimatorSpec64 = estimators::EstimatorSpec<f64>;
pub type RadialPrior64 = estimators::RadialPrior<f64>;
pub type RiskPoint64 = risk::RiskPoint<f64>;
pub type RiskCurve64 = risk::RiskCurve<f64>;
pub type PairedDifference64 = risk::PairedDifference<f64>;
pub type VerificationReport64 = analysis::VerificationReport<f64>;
