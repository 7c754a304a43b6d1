//! Modified Bessel function of the first kind, by direct series summation.
//!
//! I_ν(z) = Σ_k (z/2)^{ν+2k} / (k! Γ(ν+k+1)), needed here only for
//! ν ≥ −1/2 and z ≥ 0.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::gamma::ln_gamma;
use super::SeriesParams;

fn check_order<S: Scalar>(nu: S) -> Result<()> {
    if !(nu >= S::real(-0.5)) {
        return Err(Error::Domain(format!(
            "bessel_i requires nu >= -1/2, got {nu}"
        )));
    }
    Ok(())
}

/// I_ν(z) / z^ν — entire in z², finite and positive at z = 0.
///
/// This is the combination the Langevin normalizer needs; dividing out z^ν
/// removes the z = 0 singularity for negative orders.
pub fn bessel_i_scaled<S: Scalar>(nu: S, z: S) -> Result<S> {
    check_order(nu)?;
    if !(z >= S::zero()) {
        return Err(Error::Domain(format!("bessel_i requires z >= 0, got {z}")));
    }
    let params = SeriesParams::<S>::default();
    // Leading term: 2^{-ν}/Γ(ν+1).
    let two = S::real(2.0);
    let mut term = (-nu * two.ln() - ln_gamma(nu + S::one())?).exp();
    let mut sum = term;
    let quarter_z2 = z * z / S::real(4.0);
    if quarter_z2 == S::zero() {
        return Ok(sum);
    }
    for k in 0..params.max_terms {
        let kf = S::real(k as f64);
        term = term * quarter_z2 / ((kf + S::one()) * (nu + kf + S::one()));
        sum += term;
        if !sum.is_finite() {
            return Err(Error::SeriesOverflow {
                a: nu.approx_f64(),
                b: 0.0,
                z: z.approx_f64(),
            });
        }
        if term <= params.rel_tol * sum {
            return Ok(sum);
        }
    }
    Err(Error::SeriesNonConvergence {
        a: nu.approx_f64(),
        b: 0.0,
        z: z.approx_f64(),
        max_terms: params.max_terms,
    })
}

/// I_ν(z) for ν ≥ −1/2, z ≥ 0.
pub fn bessel_i<S: Scalar>(nu: S, z: S) -> Result<S> {
    check_order(nu)?;
    if z == S::zero() {
        // Limit of the series: 1 for ν = 0, 0 for ν > 0, +∞ for ν ∈ [−1/2, 0).
        return Ok(if nu == S::zero() {
            S::one()
        } else if nu > S::zero() {
            S::zero()
        } else {
            S::infinity()
        });
    }
    Ok(bessel_i_scaled(nu, z)? * z.powf(nu))
}

/// ln I_ν(z), switching to the large-argument expansion once the series
/// would overflow. Internal use only (integrand of the σ²-integral checks).
pub(crate) fn ln_bessel_i<S: Scalar>(nu: S, z: S) -> Result<S> {
    check_order(nu)?;
    if !(z > S::zero()) {
        return Err(Error::Domain(format!(
            "ln_bessel_i requires z > 0, got {z}"
        )));
    }
    if z <= S::real(600.0) {
        return Ok(bessel_i_scaled(nu, z)?.ln() + nu * z.ln());
    }
    // I_ν(z) ~ e^z/√(2πz) · (1 − (4ν²−1)/(8z) + (4ν²−1)(4ν²−9)/(128z²)).
    let four_nu2 = S::real(4.0) * nu * nu;
    let c1 = (four_nu2 - S::one()) / (S::real(8.0) * z);
    let c2 = (four_nu2 - S::one()) * (four_nu2 - S::real(9.0))
        / (S::real(128.0) * z * z);
    let two_pi = S::real(2.0) * S::PI();
    Ok(z - (two_pi * z).ln() / S::real(2.0) + (S::one() - c1 + c2).ln())
}
