//! Independent numerical oracles for the integration tests.
//!
//! * exact-rational Kummer and Bessel series (arbitrary precision, ≥ a
//!   caller-chosen number of terms) for moderate arguments;
//! * double-double series for large arguments, with shared rescaling for
//!   ratios;
//! * a brute-force two-dimensional quadrature of the Bayes ratio for
//!   radial-mixture multipliers, built from the Bessel/Langevin kernels
//!   rather than the posterior-weight formula it cross-checks.

#![allow(dead_code)] // shared by several integration-test crates; not all use every oracle

use num::{BigRational, FromPrimitive, ToPrimitive};

use bsnr_core::quad::adaptive_simpson;
use bsnr_core::specfun::{bessel_i, langevin_mgf};

use super::dd::Dd;

pub fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float converts to a rational")
}

fn rat_int(n: i64) -> BigRational {
    BigRational::from_i64(n).unwrap()
}

/// Kummer series Σ (a)_i/(b)_i z^i/i! in exact rational arithmetic.
///
/// Sums at least `min_terms` terms and keeps going until the term drops
/// below 10⁻²⁵ of the partial sum, then rounds once to f64.
pub fn kummer_rational(a: &BigRational, b: &BigRational, z: &BigRational, min_terms: usize) -> f64 {
    let mut term = BigRational::from_i64(1).unwrap();
    let mut sum = term.clone();
    let mut i: i64 = 0;
    loop {
        let idx = rat_int(i);
        term = term * (a + &idx) / (b + &idx) * z / rat_int(i + 1);
        sum += &term;
        i += 1;
        if i as usize >= min_terms {
            let t = term.to_f64().unwrap_or(f64::INFINITY).abs();
            let s = sum.to_f64().unwrap_or(f64::INFINITY).abs();
            if t < 1e-25 * s {
                break;
            }
        }
        assert!(i < 5000, "rational oracle did not converge");
    }
    sum.to_f64().expect("oracle sum fits in f64")
}

/// I_{3/2}(z) through the exact half-integer gamma values:
/// I_{3/2}(z) = z^{3/2} √(2/π) Σ_k (z²/2)^k / (k! (2k+3)!!).
pub fn bessel_i_three_halves_rational(z: f64, min_terms: usize) -> f64 {
    let z2_half = rat(z) * rat(z) / rat_int(2);
    let mut term = BigRational::from_i64(1).unwrap() / rat_int(3); // k = 0: 1/3!!
    let mut sum = term.clone();
    let mut k: i64 = 0;
    loop {
        term = term * &z2_half / rat_int(k + 1) / rat_int(2 * k + 5);
        sum += &term;
        k += 1;
        if k as usize >= min_terms && term.to_f64().unwrap().abs() < 1e-25 * sum.to_f64().unwrap() {
            break;
        }
        assert!(k < 5000, "bessel oracle did not converge");
    }
    z.powf(1.5) * (2.0 / std::f64::consts::PI).sqrt() * sum.to_f64().unwrap()
}

/// F(a1,b1,z)/F(a2,b2,z) summed in double-double with shared power-of-two
/// rescaling, usable far beyond the single-series overflow range.
pub fn kummer_ratio_dd(a1: f64, b1: f64, a2: f64, b2: f64, z: f64) -> f64 {
    let zd = Dd::from_f64(z);
    let mut num_term = Dd::ONE;
    let mut den_term = Dd::ONE;
    let mut num_sum = Dd::ONE;
    let mut den_sum = Dd::ONE;
    for i in 0..50_000u32 {
        let idx = i as f64;
        let inv = Dd::from_f64(1.0 + idx);
        num_term = num_term
            .mul(Dd::from_f64(a1 + idx))
            .div(Dd::from_f64(b1 + idx))
            .mul(zd)
            .div(inv);
        den_term = den_term
            .mul(Dd::from_f64(a2 + idx))
            .div(Dd::from_f64(b2 + idx))
            .mul(zd)
            .div(inv);
        num_sum = num_sum.add(num_term);
        den_sum = den_sum.add(den_term);
        if num_sum.hi > 2f64.powi(600) || den_sum.hi > 2f64.powi(600) {
            num_sum = num_sum.scale_pow2(-600);
            den_sum = den_sum.scale_pow2(-600);
            num_term = num_term.scale_pow2(-600);
            den_term = den_term.scale_pow2(-600);
        }
        if num_term.hi.abs() < 1e-34 * num_sum.hi.abs()
            && den_term.hi.abs() < 1e-34 * den_sum.hi.abs()
        {
            break;
        }
    }
    num_sum.div(den_sum).to_f64()
}

/// Both sides of the ratio inequality in extended precision:
/// (R(z), (z/p)(√(1 + 2(k+p)/z) + 1)).
pub fn r1_sides_dd(p: u32, k: u32, z: f64) -> (f64, f64) {
    let c = (k + p) as f64 / 2.0 + 1.0;
    let half_p = p as f64 / 2.0;
    let lhs = kummer_ratio_dd(c, half_p, c, half_p + 1.0, z);
    let zd = Dd::from_f64(z);
    let pf = Dd::from_f64(p as f64);
    let inner = Dd::ONE.add(Dd::from_f64(2.0 * (k + p) as f64).div(zd));
    let rhs = zd.div(pf).mul(inner.sqrt().add(Dd::ONE)).to_f64();
    (lhs, rhs)
}

/// Brute-force radial-mixture multiplier via the Bayes ratio: posterior mean
/// of the Langevin-tilted sphere mean over (r, σ²), with the σ² integral
/// taken in the B = T/(2σ²) gamma-like coordinates. Depends only on the
/// Bessel/Langevin kernels and quadrature, not on the posterior radial
/// weight formula under test.
pub fn mixture_multiplier_2d_oracle<F>(
    p: u32,
    k: u32,
    m: f64,
    l: f64,
    t: f64,
    prior_density: F,
) -> f64
where
    F: Fn(f64) -> f64,
{
    let x_norm = t.sqrt();
    let t_total = 1.0 + t; // ‖x‖² + s² with s² = 1
    let c = (p + k) as f64 / 2.0 - l / 2.0 + 2.0;
    let nu = p as f64 / 2.0 - 1.0;

    let bessel_mean_ratio = |w: f64| -> f64 {
        // I_{p/2}(w)/I_{p/2-1}(w), with the small-w limit w/p.
        if w < 1e-8 {
            return w / p as f64;
        }
        bessel_i(nu + 1.0, w).unwrap() / bessel_i(nu, w).unwrap()
    };

    let b_hi = c + 60.0 * c.sqrt() + 60.0;
    let den_inner = |r: f64| -> f64 {
        adaptive_simpson(
            &|b: f64| {
                let w = r * x_norm * (2.0 * b / t_total).sqrt();
                b.powf(c - 2.0) * (-b).exp() * langevin_mgf(w, 1.0, p).unwrap()
            },
            1e-12,
            b_hi,
            1e-11,
            1e-300,
            36,
        )
    };
    let num_inner = |r: f64| -> f64 {
        adaptive_simpson(
            &|b: f64| {
                let w = r * x_norm * (2.0 * b / t_total).sqrt();
                b.powf(c - 2.5)
                    * (-b).exp()
                    * langevin_mgf(w, 1.0, p).unwrap()
                    * bessel_mean_ratio(w)
            },
            1e-12,
            b_hi,
            1e-11,
            1e-300,
            36,
        ) * r
            * (t_total / 2.0).sqrt()
    };

    let with_prior = |inner: &dyn Fn(f64) -> f64| -> f64 {
        adaptive_simpson(
            &|r: f64| prior_density(r) * (-r * r / 2.0).exp() * inner(r),
            0.0,
            m,
            1e-11,
            1e-300,
            30,
        )
    };

    let den = with_prior(&|r| den_inner(r));
    let num = with_prior(&|r| num_inner(r));
    num / (den * x_norm)
}
