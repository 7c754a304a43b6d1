//! Grid-based verification of the multiplier inequalities, monotonicity
//! properties and dominance conditions, and construction of dominating
//! estimators by envelope truncation.
//!
//! Reports certify conditions only at the checked grid points; descriptions
//! say "grid-verified" and never claim more.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::{envelope, h_bu, h_mle, multiplier, EstimatorSpec, Problem};
use crate::quad::adaptive_simpson;
use crate::risk::{conditional_decomposition_check, SampleConfig};
use crate::scalar::Scalar;
use crate::specfun::{
    kummer_m, kummer_ratio, kummer_term_expectation, langevin_mgf, ln_bessel_i, ln_gamma,
};

/// Slack applied to strict inequalities at grid points.
fn slack<S: Scalar>() -> S {
    S::real(1e-12)
}

/// One failed comparison: the offending inputs and the two sides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation<S> {
    pub inputs: Vec<S>,
    pub lhs: S,
    pub rhs: S,
}

/// Result of one grid check. `passed` holds iff `violations` is empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport<S> {
    pub name: String,
    #[serde(rename = "grid")]
    pub grid_description: String,
    pub passed: bool,
    pub violations: Vec<Violation<S>>,
}

impl<S> VerificationReport<S> {
    pub fn new(
        name: impl Into<String>,
        grid_description: impl Into<String>,
        violations: Vec<Violation<S>>,
    ) -> Self {
        VerificationReport {
            name: name.into(),
            grid_description: grid_description.into(),
            passed: violations.is_empty(),
            violations,
        }
    }
}

impl<S: Serialize> VerificationReport<S> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// A named bundle of reports; `passed` iff every report passed.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport<S> {
    pub suite: String,
    pub passed: bool,
    pub reports: Vec<VerificationReport<S>>,
}

impl<S> SuiteReport<S> {
    pub fn new(suite: impl Into<String>, reports: Vec<VerificationReport<S>>) -> Self {
        SuiteReport {
            suite: suite.into(),
            passed: reports.iter().all(|r| r.passed),
            reports,
        }
    }
}

impl<S: Serialize> SuiteReport<S> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("suite serialization cannot fail")
    }
}

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

pub fn linspace<S: Scalar>(lo: S, hi: S, n: usize) -> Vec<S> {
    assert!(n >= 2, "linspace needs at least two points");
    let step = (hi - lo) / S::real((n - 1) as f64);
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + step * S::real(i as f64)
            }
        })
        .collect()
}

/// n log-spaced points from lo to hi (both positive).
pub fn logspace<S: Scalar>(lo: S, hi: S, n: usize) -> Vec<S> {
    assert!(lo > S::zero() && hi > lo, "logspace needs 0 < lo < hi");
    linspace(lo.ln(), hi.ln(), n)
        .into_iter()
        .map(|x| x.exp())
        .collect()
}

/// Default multiplier grid: 0, 200 log-spaced points in [1e-4, 1e4], and +∞.
pub fn default_t_grid<S: Scalar>() -> Vec<S> {
    let mut grid = vec![S::zero()];
    grid.extend(logspace(S::real(1e-4), S::real(1e4), 200));
    grid.push(S::infinity());
    grid
}

/// Default argument grid for the series-ratio inequality: 100 log-spaced
/// points in [1e-3, 700].
pub fn default_z_grid<S: Scalar>() -> Vec<S> {
    logspace(S::real(1e-3), S::real(700.0), 100)
}

/// Default risk grid: 21 equispaced values of λ in [0, m].
pub fn default_lambda_grid<S: Scalar>(prob: &Problem<S>) -> Vec<S> {
    linspace(S::zero(), prob.m(), 21)
}

fn describe_t_grid() -> String {
    "grid-verified: t in {0} ∪ 200 log-spaced in [1e-4, 1e4] ∪ {inf}".to_string()
}

// ---------------------------------------------------------------------------
// Monotonicity detector
// ---------------------------------------------------------------------------

/// Records a violation for every adjacent pair of `(coordinate, value)` that
/// breaks strict monotonicity beyond the slack. `context` is prepended to the
/// violation inputs.
fn strict_monotone_violations<S: Scalar>(
    context: &[S],
    pairs: &[(S, S)],
    increasing: bool,
    out: &mut Vec<Violation<S>>,
) {
    let eps = slack::<S>();
    for w in pairs.windows(2) {
        let (x0, v0) = w[0];
        let (x1, v1) = w[1];
        let ok = if increasing {
            v1 > v0 - eps
        } else {
            v1 < v0 + eps
        };
        if !ok {
            let mut inputs = context.to_vec();
            inputs.push(x0);
            inputs.push(x1);
            out.push(Violation {
                inputs,
                lhs: v0,
                rhs: v1,
            });
        }
    }
}

// ---------------------------------------------------------------------------
// Envelope and dominance checks
// ---------------------------------------------------------------------------

/// Grid points where the spec's multiplier exceeds the envelope h(m, 0, ·)
/// by more than 1e-12.
pub fn envelope_violation_set<S: Scalar>(
    spec: &EstimatorSpec<S>,
    prob: &Problem<S>,
    t_grid: &[S],
) -> Result<Vec<S>> {
    spec.validate(prob)?;
    let eps = slack::<S>();
    let mut out = Vec::new();
    for &t in t_grid {
        if t.is_nan() || t < S::zero() {
            return Err(Error::Domain(format!("grid value t = {t} is invalid")));
        }
        let h = multiplier(spec, t, prob)?;
        let env = envelope(t, prob)?;
        if h > env + eps {
            out.push(t);
        }
    }
    Ok(out)
}

/// Sufficient condition for δ_B to dominate δ_A on the grid:
/// h_A(t) ≥ h_B(t) and (h_A(t) + h_B(t))/2 ≥ h(m, 0, t) at every t > 0.
pub fn midpoint_dominance_check<S: Scalar>(
    spec_a: &EstimatorSpec<S>,
    spec_b: &EstimatorSpec<S>,
    prob: &Problem<S>,
    t_grid: &[S],
) -> Result<VerificationReport<S>> {
    spec_a.validate(prob)?;
    spec_b.validate(prob)?;
    let eps = slack::<S>();
    let half = S::real(0.5);
    let mut violations = Vec::new();
    for &t in t_grid {
        if !(t > S::zero()) {
            continue; // the condition concerns t > 0
        }
        let ha = multiplier(spec_a, t, prob)?;
        let hb = multiplier(spec_b, t, prob)?;
        let env = envelope(t, prob)?;
        if ha < hb - eps {
            violations.push(Violation {
                inputs: vec![t],
                lhs: ha,
                rhs: hb,
            });
        }
        let mid = (ha + hb) * half;
        if mid < env - eps {
            violations.push(Violation {
                inputs: vec![t],
                lhs: mid,
                rhs: env,
            });
        }
    }
    Ok(VerificationReport::new(
        format!(
            "midpoint-dominance: {} improved by {}",
            spec_a.label(),
            spec_b.label()
        ),
        describe_t_grid(),
        violations,
    ))
}

/// Envelope truncation of a spec, with the violation set that motivates it.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationResult<S> {
    pub spec: EstimatorSpec<S>,
    pub violations: Vec<S>,
}

impl<S> TruncationResult<S> {
    /// True when the truncation changes nothing on the default grid.
    pub fn is_identity_advisory(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Wraps the spec in an envelope truncation. The returned multiplier equals
/// min(original, envelope) pointwise; when the violation set on the default
/// grid is empty the truncation is an identity and flagged as advisory.
pub fn build_dominating_truncation<S: Scalar>(
    spec: &EstimatorSpec<S>,
    prob: &Problem<S>,
) -> Result<TruncationResult<S>> {
    let violations = envelope_violation_set(spec, prob, &default_t_grid())?;
    Ok(TruncationResult {
        spec: EstimatorSpec::Truncated {
            base: Box::new(spec.clone()),
        },
        violations,
    })
}

// ---------------------------------------------------------------------------
// Series-ratio inequality
// ---------------------------------------------------------------------------

/// Grid check of the ratio lower bound
/// R(z) = F((k+p)/2+1, p/2, z) / F((k+p)/2+1, p/2+1, z)
///      ≥ (z/p)·(√(1 + 2(k+p)/z) + 1),
/// plus the cross-check R(z) = 1 + (2z/p)·β(z) with
/// β(z) = 1 + k·E_z[1/(p + 2J + 2)].
pub fn verify_inequality_r1<S: Scalar>(p: u32, k: u32, z_grid: &[S]) -> Result<VerificationReport<S>> {
    if p < 2 || k < 2 {
        return Err(Error::Config(format!(
            "the ratio inequality is asserted for p >= 2 and k >= 2, got p={p}, k={k}"
        )));
    }
    let pf = S::real(p as f64);
    let kf = S::real(k as f64);
    let c = (kf + pf) / S::real(2.0) + S::one();
    let half_p = pf / S::real(2.0);
    let eps = slack::<S>();
    let two = S::real(2.0);
    let mut violations = Vec::new();
    for &z in z_grid {
        if !(z > S::zero()) {
            return Err(Error::Domain(format!("grid value z = {z} must be positive")));
        }
        let r = kummer_ratio(c, half_p, c, half_p + S::one(), z)?;
        let bound = z / pf * ((S::one() + two * (kf + pf) / z).sqrt() + S::one());
        if r - bound < -eps * S::one().max(bound.abs()) {
            violations.push(Violation {
                inputs: vec![pf, kf, z],
                lhs: r,
                rhs: bound,
            });
        }
        let expectation = kummer_term_expectation(c, half_p + S::one(), z, |j| {
            (pf + S::real(2.0 * j as f64) + two).recip()
        })?;
        let beta = S::one() + kf * expectation;
        let rep = S::one() + two * z / pf * beta;
        if (r - rep).abs() > S::real(1e-10) * r {
            violations.push(Violation {
                inputs: vec![pf, kf, z],
                lhs: r,
                rhs: rep,
            });
        }
    }
    Ok(VerificationReport::new(
        format!("series-ratio-lower-bound p={p} k={k}"),
        format!("grid-verified: {} z points in [{}, {}]", z_grid.len(),
            z_grid.first().map(|v| v.approx_f64()).unwrap_or(f64::NAN),
            z_grid.last().map(|v| v.approx_f64()).unwrap_or(f64::NAN)),
        violations,
    ))
}

// ---------------------------------------------------------------------------
// Multiplier properties
// ---------------------------------------------------------------------------

/// Default exponent grid: a spread of values below k + p.
pub fn default_l_grid<S: Scalar>(prob: &Problem<S>) -> Vec<S> {
    [-4.0, -1.0, 0.0, 1.0, 2.0, 6.0]
        .into_iter()
        .map(S::real)
        .filter(|&l| l < prob.dof_sum())
        .collect()
}

/// Grid check of the boundary-uniform multiplier h(λ, l, t):
/// strictly decreasing in t, strictly increasing in λ and in l, bounded by
/// its value at t = 0 (exactly λ²/p) below and its t → ∞ limit above, and
/// consistent with the recurrence-derived alternative form
/// h = ((1+t)/t)·(1 − F((p+k−l)/2, p/2, ζ)/F((p+k−l)/2+1, p/2, ζ)).
pub fn verify_h_properties<S: Scalar>(
    prob: &Problem<S>,
    l_grid: &[S],
    t_grid: &[S],
    lambda_grid: &[S],
) -> Result<VerificationReport<S>> {
    let lambdas: Vec<S> = lambda_grid
        .iter()
        .copied()
        .filter(|&l| l > S::zero() && l <= prob.m())
        .collect();
    let ls: Vec<S> = l_grid
        .iter()
        .copied()
        .filter(|&l| l < prob.dof_sum())
        .collect();
    if lambdas.is_empty() || ls.is_empty() || t_grid.len() < 2 {
        return Err(Error::Config(
            "h-properties verification needs nonempty grids with positive λ".into(),
        ));
    }

    let mut violations = Vec::new();
    let eps = slack::<S>();
    let two = S::real(2.0);

    // Full table h[λ][l][t].
    let mut table = vec![vec![vec![S::zero(); t_grid.len()]; ls.len()]; lambdas.len()];
    for (i, &lam) in lambdas.iter().enumerate() {
        for (j, &l) in ls.iter().enumerate() {
            for (q, &t) in t_grid.iter().enumerate() {
                table[i][j][q] = h_bu(t, prob, l, lam)?;
            }
        }
    }

    for (i, &lam) in lambdas.iter().enumerate() {
        for (j, &l) in ls.iter().enumerate() {
            let row = &table[i][j];
            // Decreasing in t.
            let pairs: Vec<(S, S)> = t_grid.iter().copied().zip(row.iter().copied()).collect();
            strict_monotone_violations(&[lam, l], &pairs, false, &mut violations);
            // Supremum at t = 0 equals λ²/p exactly.
            let sup = lam * lam / prob.p_s();
            if (row[0] - sup).abs() > S::real(1e-12) * sup.max(S::one()) {
                violations.push(Violation {
                    inputs: vec![lam, l, S::zero()],
                    lhs: row[0],
                    rhs: sup,
                });
            }
            // All values inside [limit at ∞, value at 0].
            let inf_value = h_bu(S::infinity(), prob, l, lam)?;
            for (q, &t) in t_grid.iter().enumerate() {
                if row[q] > row[0] + eps || row[q] < inf_value - eps {
                    violations.push(Violation {
                        inputs: vec![lam, l, t],
                        lhs: row[q],
                        rhs: inf_value,
                    });
                }
            }
            // Alternative form at finite positive t.
            let a_minus = (prob.dof_sum() - l) / two;
            let half_p = prob.p_s() / two;
            for (&t, &h) in t_grid.iter().zip(row.iter()) {
                if !(t > S::zero()) || t.is_infinite() {
                    continue;
                }
                let zeta = lam * lam * t / (two * (S::one() + t));
                let ratio = kummer_ratio(a_minus, half_p, a_minus + S::one(), half_p, zeta)?;
                let alt = (S::one() + t) / t * (S::one() - ratio);
                if (h - alt).abs() > S::real(1e-10) * h.max(S::one()) {
                    violations.push(Violation {
                        inputs: vec![lam, l, t],
                        lhs: h,
                        rhs: alt,
                    });
                }
            }
        }
    }

    // Increasing in λ at fixed (l, t), t > 0.
    for (j, &l) in ls.iter().enumerate() {
        for (q, &t) in t_grid.iter().enumerate() {
            if !(t > S::zero()) {
                continue;
            }
            let pairs: Vec<(S, S)> = lambdas
                .iter()
                .copied()
                .zip(lambdas.iter().enumerate().map(|(i, _)| table[i][j][q]))
                .collect();
            strict_monotone_violations(&[l, t], &pairs, true, &mut violations);
        }
    }

    // Increasing in l at fixed (λ, t), t > 0.
    for (i, &lam) in lambdas.iter().enumerate() {
        for (q, &t) in t_grid.iter().enumerate() {
            if !(t > S::zero()) {
                continue;
            }
            let pairs: Vec<(S, S)> = ls
                .iter()
                .copied()
                .zip(ls.iter().enumerate().map(|(j, _)| table[i][j][q]))
                .collect();
            strict_monotone_violations(&[lam, t], &pairs, true, &mut violations);
        }
    }

    Ok(VerificationReport::new(
        "h-multiplier-properties",
        format!(
            "grid-verified: {} λ × {} l × {} t points",
            lambdas.len(),
            ls.len(),
            t_grid.len()
        ),
        violations,
    ))
}

// ---------------------------------------------------------------------------
// Special-function checks
// ---------------------------------------------------------------------------

/// Series sanity: F ≥ 1 and strictly increasing in z on a grid.
pub fn verify_kummer_monotone_in_z<S: Scalar>() -> Result<VerificationReport<S>> {
    let mut violations = Vec::new();
    let z_grid = linspace(S::zero(), S::real(50.0), 101);
    for (a, b) in [(1.0, 1.5), (5.0, 2.5), (12.5, 1.5)] {
        let (a, b) = (S::real(a), S::real(b));
        let mut pairs = Vec::with_capacity(z_grid.len());
        for &z in &z_grid {
            let f = kummer_m(a, b, z)?;
            if f < S::one() {
                violations.push(Violation {
                    inputs: vec![a, b, z],
                    lhs: f,
                    rhs: S::one(),
                });
            }
            pairs.push((z, f));
        }
        strict_monotone_violations(&[a, b], &pairs, true, &mut violations);
    }
    Ok(VerificationReport::new(
        "kummer-positive-and-increasing-in-z",
        "grid-verified: (a,b) in {(1,1.5),(5,2.5),(12.5,1.5)}, 101 z in [0,50]",
        violations,
    ))
}

/// Contiguous recurrence: z·F(a+1, b+1, z) = b·(F(a+1, b, z) − F(a, b, z))
/// to relative 1e-10.
pub fn verify_kummer_recurrence<S: Scalar>() -> Result<VerificationReport<S>> {
    let mut violations = Vec::new();
    for a in [1.0, 5.0, 12.5] {
        for b in [1.5, 2.5] {
            for z in [0.1, 1.0, 10.0, 100.0] {
                let (a, b, z) = (S::real(a), S::real(b), S::real(z));
                let lhs = z * kummer_m(a + S::one(), b + S::one(), z)?;
                let rhs = b * (kummer_m(a + S::one(), b, z)? - kummer_m(a, b, z)?);
                if (lhs - rhs).abs() > S::real(1e-10) * lhs.abs().max(rhs.abs()) {
                    violations.push(Violation {
                        inputs: vec![a, b, z],
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    Ok(VerificationReport::new(
        "kummer-contiguous-recurrence",
        "grid-verified: (a,b,z) in {1,5,12.5}×{1.5,2.5}×{0.1,1,10,100}",
        violations,
    ))
}

/// Ratio monotonicity: K(z) = F(a−c+1, b−c+1, z)/F(a+1, b, z) strictly
/// decreasing in z for c ∈ {0, 1}, with K → 0; and
/// H(a) = F(a, b+1, z)/F(a, b, z) strictly decreasing in a.
pub fn verify_ratio_monotonicity<S: Scalar>() -> Result<VerificationReport<S>> {
    let mut violations = Vec::new();
    let (a, b) = (S::real(12.5), S::real(2.5));
    for c in [0.0, 1.0] {
        let c_s = S::real(c);
        let mut pairs = Vec::new();
        let mut z = S::zero();
        while z <= S::real(50.0) {
            let ratio = kummer_ratio(
                a - c_s + S::one(),
                b - c_s + S::one(),
                a + S::one(),
                b,
                z,
            )?;
            pairs.push((z, ratio));
            z += S::real(0.5);
        }
        strict_monotone_violations(&[a, b, c_s], &pairs, false, &mut violations);
    }
    // Vanishing tail: K_{a,b,0}(700) is already below 0.05 (the asymptotic
    // rate is b/z).
    let tail = kummer_ratio(a + S::one(), b + S::one(), a + S::one(), b, S::real(700.0))?;
    if tail >= S::real(0.05) {
        violations.push(Violation {
            inputs: vec![a, b, S::real(700.0)],
            lhs: tail,
            rhs: S::real(0.05),
        });
    }
    // H decreasing in its first parameter.
    for b in [1.5, 2.5] {
        for z in [1.0, 10.0, 100.0] {
            let (b, z) = (S::real(b), S::real(z));
            let a_grid = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0];
            let mut pairs = Vec::new();
            for av in a_grid {
                let av = S::real(av);
                pairs.push((av, kummer_ratio(av, b + S::one(), av, b, z)?));
            }
            strict_monotone_violations(&[b, z], &pairs, false, &mut violations);
        }
    }
    Ok(VerificationReport::new(
        "kummer-ratio-monotonicity",
        "grid-verified: K on z in {0,0.5,…,50} with tail at 700; H on a in {0.5,…,32}",
        violations,
    ))
}

/// Monte Carlo check of the sphere moment generating function: the closed
/// form must sit within 4 standard errors of the sample mean of e^{y'U} over
/// `n` uniform sphere draws, for (p, w) ∈ {2,3,5} × {0.5, 2, 5}.
pub fn verify_langevin_mc<S>(seed: u64, n: u64) -> Result<VerificationReport<S>>
where
    S: Scalar,
    StandardNormal: Distribution<S>,
{
    let mut violations = Vec::new();
    for (combo, &p) in [2u32, 3, 5].iter().enumerate() {
        for (widx, &w) in [0.5, 2.0, 5.0].iter().enumerate() {
            let w_s = S::real(w);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((combo * 3 + widx) as u64);
            let mut sum = S::zero();
            let mut sum_sq = S::zero();
            for _ in 0..n {
                let mut norm2 = S::zero();
                let mut first = S::zero();
                for i in 0..p {
                    let z: S = StandardNormal.sample(&mut rng);
                    if i == 0 {
                        first = z;
                    }
                    norm2 += z * z;
                }
                let u1 = first / norm2.sqrt();
                let v = (w_s * u1).exp();
                sum += v;
                sum_sq += v * v;
            }
            let nf = S::real(n as f64);
            let mean = sum / nf;
            let var = ((sum_sq - nf * mean * mean) / (nf - S::one())).max(S::zero());
            let se = (var / nf).sqrt();
            let closed = langevin_mgf(w_s, S::one(), p)?;
            if (closed - mean).abs() > S::real(4.0) * se {
                violations.push(Violation {
                    inputs: vec![S::real(p as f64), w_s],
                    lhs: mean,
                    rhs: closed,
                });
            }
        }
    }
    Ok(VerificationReport::new(
        "langevin-mgf-vs-sphere-monte-carlo",
        format!("grid-verified: (p,w) in {{2,3,5}}×{{0.5,2,5}}, {n} draws each, 4 SE"),
        violations,
    ))
}

/// Quadrature check of the scale-mixture identity
/// ∫₀^∞ A^{−α} e^{−T/2A} I_ν(μ/√A) dA =
/// (Γ(α+ν/2−1)/Γ(ν+1)) (μ²/2T)^{ν/2} (2/T)^{α−1} F(α+ν/2−1, ν+1, μ²/2T)
/// to relative 1e-6, on three positive parameter tuples.
pub fn verify_scale_mixture_identity<S: Scalar>() -> Result<VerificationReport<S>> {
    let tuples = [
        (5.0, 1.5, 2.0, 3.0),
        (3.5, 0.5, 1.0, 2.0),
        (6.0, 2.5, 3.0, 1.5),
    ];
    let mut violations = Vec::new();
    for (alpha, nu, mu, t_cap) in tuples {
        let (alpha, nu, mu, t_cap) = (S::real(alpha), S::real(nu), S::real(mu), S::real(t_cap));
        let lhs = scale_mixture_integral(alpha, nu, mu, t_cap);
        let two = S::real(2.0);
        let shape = alpha + nu / two - S::one();
        let log_front = ln_gamma(shape)? - ln_gamma(nu + S::one())?
            + nu / two * (mu * mu / (two * t_cap)).ln()
            + (alpha - S::one()) * (two / t_cap).ln();
        let rhs = log_front.exp() * kummer_m(shape, nu + S::one(), mu * mu / (two * t_cap))?;
        if !lhs.is_finite() || (lhs - rhs).abs() > S::real(1e-6) * rhs.abs() {
            violations.push(Violation {
                inputs: vec![alpha, nu, mu, t_cap],
                lhs,
                rhs,
            });
        }
    }
    Ok(VerificationReport::new(
        "bessel-scale-mixture-identity",
        "adaptive quadrature on ln A in [ln 1e-7, ln 1e9], relative 1e-6, 3 tuples",
        violations,
    ))
}

/// ∫ A^{−α} e^{−T/2A} I_ν(μ/√A) dA via the substitution A = e^y, evaluated in
/// log space so the Bessel growth and the essential singularity at A → 0
/// cancel without overflow.
fn scale_mixture_integral<S: Scalar>(alpha: S, nu: S, mu: S, t_cap: S) -> S {
    let two = S::real(2.0);
    let integrand = |y: S| -> S {
        let a_var = y.exp();
        let w = mu / a_var.sqrt();
        let ln_bessel = match ln_bessel_i(nu, w) {
            Ok(v) => v,
            Err(_) => return S::nan(),
        };
        let exponent = (S::one() - alpha) * y - t_cap / (two * a_var) + ln_bessel;
        if exponent < S::real(-700.0) {
            S::zero()
        } else {
            exponent.exp()
        }
    };
    adaptive_simpson(
        &integrand,
        S::real(1e-7).ln(),
        S::real(1e9).ln(),
        S::real(1e-9),
        S::real(1e-290),
        48,
    )
}

/// All special-function checks bundled for the `specfun` verification suite.
pub fn specfun_suite<S>(seed: u64, langevin_draws: u64) -> Result<SuiteReport<S>>
where
    S: Scalar,
    StandardNormal: Distribution<S>,
{
    let reports = vec![
        verify_kummer_monotone_in_z()?,
        verify_kummer_recurrence()?,
        verify_ratio_monotonicity()?,
        verify_langevin_mc(seed, langevin_draws)?,
        verify_scale_mixture_identity()?,
    ];
    Ok(SuiteReport::new("specfun", reports))
}

/// h-properties verification on the default grids.
pub fn h_properties_suite<S: Scalar>(prob: &Problem<S>) -> Result<SuiteReport<S>> {
    let report = verify_h_properties(
        prob,
        &default_l_grid(prob),
        &default_t_grid(),
        &linspace(prob.m() / S::real(8.0), prob.m(), 8),
    )?;
    Ok(SuiteReport::new("h-properties", vec![report]))
}

/// Ratio-inequality verification over a rectangle of (p, k) values.
pub fn r1_suite<S: Scalar>(
    p_range: std::ops::RangeInclusive<u32>,
    k_range: std::ops::RangeInclusive<u32>,
) -> Result<SuiteReport<S>> {
    let z_grid = default_z_grid::<S>();
    let mut reports = Vec::new();
    for p in p_range {
        for k in k_range.clone() {
            reports.push(verify_inequality_r1(p, k, &z_grid)?);
        }
    }
    Ok(SuiteReport::new("r1-inequality", reports))
}

/// Decomposition cross-check for the unbiased, maximum likelihood and
/// boundary-uniform rules at λ ∈ {0, m/2, m}.
pub fn decomposition_suite<S>(prob: &Problem<S>, cfg: &SampleConfig) -> Result<SuiteReport<S>>
where
    S: Scalar,
    StandardNormal: Distribution<S>,
{
    let specs: [EstimatorSpec<S>; 3] = [
        EstimatorSpec::Unbiased,
        EstimatorSpec::Mle,
        EstimatorSpec::boundary_uniform(S::zero(), prob),
    ];
    let lambdas = [S::zero(), prob.m() / S::real(2.0), prob.m()];
    let mut reports = Vec::new();
    for spec in &specs {
        let mut violations = Vec::new();
        for &lambda in &lambdas {
            let chk = conditional_decomposition_check(spec, lambda, prob, cfg)?;
            if !chk.passed() {
                violations.push(Violation {
                    inputs: vec![lambda],
                    lhs: chk.lhs,
                    rhs: chk.rhs,
                });
            }
        }
        reports.push(VerificationReport::new(
            format!("risk-decomposition: {}", spec.label()),
            format!(
                "λ in {{0, m/2, m}}, {} replicates, tolerance 4 paired SE",
                cfg.replicates
            ),
            violations,
        ));
    }
    Ok(SuiteReport::new("decomposition", reports))
}

/// Dominance suite output: the asserted grid checks, exploratory reports
/// (computed and listed but excluded from the pass verdict), and the
/// envelope truncation of the maximum likelihood rule (nonempty violations
/// mean the truncation is a strict improvement).
#[derive(Debug, Clone)]
pub struct DominanceSuite<S> {
    pub report: SuiteReport<S>,
    pub exploratory: Vec<VerificationReport<S>>,
    pub mle_truncation: TruncationResult<S>,
}

/// Grid checks behind the dominance results:
///
/// * the envelope stays below the MLE multiplier for t ≥ m²/(p+k)
///   (certifies that the MLE improves on the unbiased estimator) — asserted
///   for p ≥ 2, k ≥ 2 and for k = 1 with m ≤ √p; for other configurations
///   (notably p = 1 with k ≥ 2, where the ordering is conjectured) the check
///   runs in exploratory mode and is reported without being asserted;
/// * raising the prior exponent lifts the multiplier above the envelope
///   (certifies that the l = 0 rule improves on l > 0);
/// * when m ≤ √p and p ≥ 2, the envelope stays below the MLE multiplier
///   everywhere and the midpoint conditions hold.
pub fn dominance_suite<S: Scalar>(prob: &Problem<S>) -> Result<DominanceSuite<S>> {
    let t_grid = default_t_grid::<S>();
    let eps = slack::<S>();
    let mut reports = Vec::new();
    let mut exploratory = Vec::new();

    let radius_ok = prob.m() * prob.m() <= prob.p_s();
    let mle_ordering_established = (prob.p() >= 2 && prob.k() >= 2) || (prob.k() == 1 && radius_ok);

    // Envelope below h_mle on t >= m²/(p+k).
    let threshold = prob.m() * prob.m() / prob.dof_sum();
    let mut violations = Vec::new();
    for &t in &t_grid {
        if t < threshold {
            continue;
        }
        let env = envelope(t, prob)?;
        let mle = h_mle(t, prob);
        if env > mle + eps {
            violations.push(Violation {
                inputs: vec![t],
                lhs: env,
                rhs: mle,
            });
        }
    }
    let beyond = VerificationReport::new(
        if mle_ordering_established {
            "envelope-below-mle-beyond-threshold".to_string()
        } else {
            "envelope-below-mle-beyond-threshold (exploratory, not asserted)".to_string()
        },
        format!(
            "grid-verified: default t grid restricted to t ≥ {}",
            threshold.approx_f64()
        ),
        violations,
    );
    if mle_ordering_established {
        reports.push(beyond);
    } else {
        exploratory.push(beyond);
    }

    // Exponent ordering: h(m, 2, t) ≥ h(m, 0, t).
    let l_high = S::real(2.0).min(prob.dof_sum() - S::one());
    let mut violations = Vec::new();
    for &t in &t_grid {
        if !(t > S::zero()) {
            continue;
        }
        let lifted = h_bu(t, prob, l_high, prob.m())?;
        let env = envelope(t, prob)?;
        if lifted < env - eps {
            violations.push(Violation {
                inputs: vec![t],
                lhs: lifted,
                rhs: env,
            });
        }
    }
    reports.push(VerificationReport::new(
        "raised-exponent-above-envelope",
        describe_t_grid(),
        violations,
    ));

    // Sub-critical radius cases.
    if radius_ok && mle_ordering_established {
        let mut violations = Vec::new();
        for &t in &t_grid {
            let env = envelope(t, prob)?;
            let mle = h_mle(t, prob);
            if env > mle + eps {
                violations.push(Violation {
                    inputs: vec![t],
                    lhs: env,
                    rhs: mle,
                });
            }
        }
        reports.push(VerificationReport::new(
            "envelope-below-mle-everywhere",
            describe_t_grid(),
            violations,
        ));
        reports.push(midpoint_dominance_check(
            &EstimatorSpec::Unbiased,
            &EstimatorSpec::Mle,
            prob,
            &t_grid,
        )?);
        reports.push(midpoint_dominance_check(
            &EstimatorSpec::boundary_uniform(l_high, prob),
            &EstimatorSpec::boundary_uniform(S::zero(), prob),
            prob,
            &t_grid,
        )?);
    }

    let mle_truncation = build_dominating_truncation(&EstimatorSpec::Mle, prob)?;
    Ok(DominanceSuite {
        report: SuiteReport::new("dominance", reports),
        exploratory,
        mle_truncation,
    })
}

// ---------------------------------------------------------------------------
