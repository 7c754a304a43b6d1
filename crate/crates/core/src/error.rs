//! Crate-wide error type.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by series evaluation, estimator configuration and sampling.
///
/// Series errors carry the offending arguments as `f64` so that the error
/// type stays independent of the scalar parameter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the supported domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series did not reach the requested relative tolerance.
    #[error("series F({a}, {b}, {z}) did not converge within {max_terms} terms")]
    SeriesNonConvergence {
        a: f64,
        b: f64,
        z: f64,
        max_terms: usize,
    },

    /// A series sum left the representable range of the scalar type.
    #[error("series F({a}, {b}, {z}) overflowed")]
    SeriesOverflow { a: f64, b: f64, z: f64 },

    /// An estimator, prior or run configuration violates its invariants.
    #[error("invalid configuration: {0}")]
    Config(String),
}
