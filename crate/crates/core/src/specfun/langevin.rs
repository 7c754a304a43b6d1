//! Moment generating function of a uniform law on a sphere.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::bessel::bessel_i_scaled;
use super::gamma::ln_gamma;

/// E[e^{y'U}] for U uniform on the sphere of radius `r` in dimension `p`.
///
/// Closed form: Γ(p/2) · 2^{p/2−1} · I_{p/2−1}(w) / w^{p/2−1} with
/// w = ‖y‖·r, continuous at w = 0 with value 1. The 2^{p/2−1} factor is part
/// of the standard Langevin normalizer; the p = 3 closed form sinh(w)/w and
/// the p = 1 form cosh(w) pin it down.
pub fn langevin_mgf<S: Scalar>(y_norm: S, r: S, p: u32) -> Result<S> {
    if p < 1 {
        return Err(Error::Domain("langevin_mgf requires p >= 1".into()));
    }
    if !(y_norm >= S::zero()) || !(r >= S::zero()) {
        return Err(Error::Domain(format!(
            "langevin_mgf requires y_norm >= 0 and r >= 0, got {y_norm}, {r}"
        )));
    }
    let w = y_norm * r;
    let half_p = S::real(p as f64 / 2.0);
    let nu = half_p - S::one();
    // Γ(p/2)·2^ν·[I_ν(w)/w^ν]; the scaled Bessel keeps w = 0 regular.
    let log_const = ln_gamma(half_p)? + nu * S::real(2.0).ln();
    Ok(log_const.exp() * bessel_i_scaled(nu, w)?)
}
