//! Multiplier functions h(t) for the estimator families.

use crate::error::{Error, Result};
use crate::quad::gauss_legendre_128;
use crate::scalar::Scalar;
use crate::specfun::{kummer_m, kummer_ratio};

use super::{Problem, RadialPrior};

/// Maximum likelihood multiplier.
///
/// Equals 1 exactly for t ≤ m²/(p+k); beyond that,
/// h(t) = m²/(2(p+k)) · (√(1 + 4(k+p)(1+t)/(m²t)) − 1), decreasing to the
/// finite limit (√(1+4γ)−1)/(2γ), γ = (p+k)/m², as t → ∞.
pub fn h_mle<S: Scalar>(t: S, prob: &Problem<S>) -> S {
    let m2 = prob.m() * prob.m();
    let gamma = prob.dof_sum() / m2;
    if t <= m2 / prob.dof_sum() {
        return S::one();
    }
    let growth = if t.is_infinite() {
        S::one()
    } else {
        (S::one() + t) / t
    };
    let root = (S::one() + S::real(4.0) * gamma * growth).sqrt();
    ((root - S::one()) / (S::real(2.0) * gamma)).min(S::one())
}

/// Boundary-uniform Bayes multiplier h(radius, l, t).
///
/// h = (radius²/p) · F((k+p−l)/2 + 1, p/2 + 1, ζ) / F((k+p−l)/2 + 1, p/2, ζ)
/// with ζ = radius²·t/(2(1+t)); t = +∞ gives ζ = radius²/2.
pub fn h_bu<S: Scalar>(t: S, prob: &Problem<S>, l: S, radius: S) -> Result<S> {
    if !(l < prob.dof_sum()) {
        return Err(Error::Config(format!(
            "prior exponent l = {l} is not below k + p = {}; the posterior exists only for l < k + p",
            prob.dof_sum()
        )));
    }
    if !(radius > S::zero() && radius <= prob.m()) {
        return Err(Error::Config(format!(
            "radius must lie in (0, m = {}], got {radius}",
            prob.m()
        )));
    }
    if t.is_nan() || t < S::zero() {
        return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
    }
    let a = (prob.dof_sum() - l) / S::real(2.0) + S::one();
    let half_p = prob.p_s() / S::real(2.0);
    let zeta = zeta_of(t, radius);
    let ratio = kummer_ratio(a, half_p + S::one(), a, half_p, zeta)?;
    Ok(radius * radius / prob.p_s() * ratio)
}

/// The complete-class envelope h(m, 0, t): the boundary-uniform multiplier at
/// the full radius with the right-Haar exponent.
pub fn envelope<S: Scalar>(t: S, prob: &Problem<S>) -> Result<S> {
    h_bu(t, prob, S::zero(), prob.m())
}

fn zeta_of<S: Scalar>(t: S, radius: S) -> S {
    let r2 = radius * radius;
    if t.is_infinite() {
        r2 / S::real(2.0)
    } else {
        r2 * t / (S::real(2.0) * (S::one() + t))
    }
}

/// Multiplier of the Bayes rule for a spherically symmetric prior with
/// radial law `prior` on [0, m]: the posterior mean of h(R, l, t).
///
/// Integrating the scale out of the Bayes ratio leaves the radial weight
/// w(r|t) ∝ e^{−r²/2}·F((k+p−l)/2+1, p/2, ζ_r), and the numerator
/// h(r, l, t)·w(r|t) collapses to (r²/p)·e^{−r²/2}·F((k+p−l)/2+1, p/2+1, ζ_r),
/// with ζ_r = r²t/(2(1+t)). Continuous priors are integrated with the shared
/// 128-node Gauss-Legendre rule.
pub fn h_radial_mixture<S: Scalar>(
    t: S,
    prob: &Problem<S>,
    l: S,
    prior: &RadialPrior<S>,
) -> Result<S> {
    if !(l < prob.dof_sum()) {
        return Err(Error::Config(format!(
            "prior exponent l = {l} is not below k + p = {}; the posterior exists only for l < k + p",
            prob.dof_sum()
        )));
    }
    if t.is_nan() || t < S::zero() {
        return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
    }
    if let RadialPrior::PointMass { r } = prior {
        // Degenerate mixture: exactly the boundary-uniform rule at radius r.
        return h_bu(t, prob, l, *r);
    }
    prior.validate(prob)?;

    let a = (prob.dof_sum() - l) / S::real(2.0) + S::one();
    let half_p = prob.p_s() / S::real(2.0);
    let half = S::real(0.5);
    let rule = gauss_legendre_128::<S>();

    let numerator = rule.try_integrate(S::zero(), prob.m(), |r| {
        let tilt = (-r * r * half).exp();
        Ok(r * r / prob.p_s()
            * tilt
            * kummer_m(a, half_p + S::one(), zeta_of(t, r))?
            * prior.density(r, prob))
    })?;
    let denominator = rule.try_integrate(S::zero(), prob.m(), |r| {
        let tilt = (-r * r * half).exp();
        Ok(tilt * kummer_m(a, half_p, zeta_of(t, r))? * prior.density(r, prob))
    })?;
    if !(denominator > S::zero()) {
        return Err(Error::Config(
            "radial prior places no usable mass on (0, m]".into(),
        ));
    }
    Ok(numerator / denominator)
}
