//! Equivariant estimators δ_h(x, s²) = h(‖x‖²/s²)·x: the problem description,
//! the multiplier rules for every estimator family, and the two-sample
//! reduction.

mod rules;

pub use rules::{envelope, h_bu, h_mle, h_radial_mixture};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::gauss_legendre_128;
use crate::scalar::Scalar;

/// Model dimensions and the signal-to-noise bound: X is p-variate, S² has k
/// degrees of freedom, and ‖θ‖/σ ≤ m. Construction goes through [`Problem::new`]
/// so the invariants p ≥ 1, k ≥ 1, m > 0 always hold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Problem<S> {
    p: u32,
    k: u32,
    m: S,
}

impl<S: Scalar> Problem<S> {
    pub fn new(p: u32, k: u32, m: S) -> Result<Self> {
        if p < 1 {
            return Err(Error::Config("dimension p must be at least 1".into()));
        }
        if k < 1 {
            return Err(Error::Config(
                "degrees of freedom k must be at least 1".into(),
            ));
        }
        if !(m > S::zero()) || !m.is_finite() {
            return Err(Error::Config(format!(
                "signal-to-noise bound m must be positive and finite, got {m}"
            )));
        }
        Ok(Problem { p, k, m })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> S {
        self.m
    }

    /// p as a scalar.
    pub fn p_s(&self) -> S {
        S::real(self.p as f64)
    }

    /// k + p as a scalar: the prior exponent must stay below this bound for
    /// the posterior to exist.
    pub fn dof_sum(&self) -> S {
        S::real((self.k + self.p) as f64)
    }
}

/// Radial law of ‖θ‖/σ on [0, m].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialPrior<S> {
    /// All mass at a single radius in (0, m].
    PointMass { r: S },
    /// Radial density p·r^{p−1}/m^p of the uniform law on the ball.
    BallUniform,
    /// Density values on an equispaced grid over [0, m], linearly
    /// interpolated; must integrate to one.
    Tabulated { density: Vec<S> },
}

impl<S: Scalar> RadialPrior<S> {
    /// Density at radius r for the continuous variants.
    pub(crate) fn density(&self, r: S, prob: &Problem<S>) -> S {
        match self {
            RadialPrior::PointMass { .. } => S::zero(),
            RadialPrior::BallUniform => {
                let p = prob.p_s();
                p * r.powf(p - S::one()) / prob.m().powf(p)
            }
            RadialPrior::Tabulated { density } => interp_equispaced(density, r, prob.m()),
        }
    }

    pub fn validate(&self, prob: &Problem<S>) -> Result<()> {
        match self {
            RadialPrior::PointMass { r } => {
                if !(*r > S::zero() && *r <= prob.m()) {
                    return Err(Error::Config(format!(
                        "point-mass radius must lie in (0, m = {}], got {r}",
                        prob.m()
                    )));
                }
            }
            RadialPrior::BallUniform => {}
            RadialPrior::Tabulated { density } => {
                if density.len() < 2 {
                    return Err(Error::Config(
                        "tabulated radial density needs at least two grid values".into(),
                    ));
                }
                if density.iter().any(|d| !(*d >= S::zero()) || !d.is_finite()) {
                    return Err(Error::Config(
                        "tabulated radial density values must be finite and nonnegative".into(),
                    ));
                }
                let rule = gauss_legendre_128::<S>();
                let mass = rule.integrate(S::zero(), prob.m(), |r| {
                    interp_equispaced(density, r, prob.m())
                });
                let tol = S::real(1e-8).max(S::epsilon() * S::real(128.0));
                if (mass - S::one()).abs() > tol {
                    return Err(Error::Config(format!(
                        "tabulated radial density integrates to {mass}, not 1, over [0, m]"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Description of an equivariant estimator by its multiplier rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EstimatorSpec<S> {
    /// δ(x, s²) = x.
    Unbiased,
    /// δ(x, s²) = a·x.
    Affine { a: S },
    /// Maximum likelihood under the constraint.
    Mle,
    /// Bayes rule for θ|σ uniform on the sphere of radius `radius`·σ with
    /// prior exponent `l` on σ².
    BoundaryUniform { l: S, radius: S },
    /// Bayes rule for a spherically symmetric prior with radial law `prior`.
    RadialMixture { l: S, prior: RadialPrior<S> },
    /// Base estimator projected under the boundary-uniform envelope
    /// h(m, 0, ·).
    Truncated { base: Box<EstimatorSpec<S>> },
    /// Piecewise-linear multiplier through (t, h) nodes, constant beyond the
    /// grid.
    TabulatedMultiplier { grid: Vec<(S, S)> },
}

impl<S: Scalar> EstimatorSpec<S> {
    /// Boundary-uniform rule at the full radius m with exponent l.
    pub fn boundary_uniform(l: S, prob: &Problem<S>) -> Self {
        EstimatorSpec::BoundaryUniform {
            l,
            radius: prob.m(),
        }
    }

    /// The minimax affine rule a = m²/(m²+p).
    pub fn minimax_affine(prob: &Problem<S>) -> Self {
        let m2 = prob.m() * prob.m();
        EstimatorSpec::Affine {
            a: m2 / (m2 + prob.p_s()),
        }
    }

    /// Checks every invariant of the spec against the problem.
    pub fn validate(&self, prob: &Problem<S>) -> Result<()> {
        match self {
            EstimatorSpec::Unbiased | EstimatorSpec::Mle => Ok(()),
            EstimatorSpec::Affine { a } => {
                if !a.is_finite() {
                    return Err(Error::Config("affine coefficient must be finite".into()));
                }
                Ok(())
            }
            EstimatorSpec::BoundaryUniform { l, radius } => {
                check_exponent(*l, prob)?;
                if !(*radius > S::zero() && *radius <= prob.m()) {
                    return Err(Error::Config(format!(
                        "boundary-uniform radius must lie in (0, m = {}], got {radius}",
                        prob.m()
                    )));
                }
                Ok(())
            }
            EstimatorSpec::RadialMixture { l, prior } => {
                check_exponent(*l, prob)?;
                prior.validate(prob)
            }
            EstimatorSpec::Truncated { base } => base.validate(prob),
            EstimatorSpec::TabulatedMultiplier { grid } => {
                if grid.is_empty() {
                    return Err(Error::Config("tabulated multiplier grid is empty".into()));
                }
                for window in grid.windows(2) {
                    if !(window[0].0 < window[1].0) {
                        return Err(Error::Config(
                            "tabulated multiplier grid must have strictly increasing t".into(),
                        ));
                    }
                }
                for (t, h) in grid {
                    if !(*t >= S::zero()) || !t.is_finite() {
                        return Err(Error::Config(format!(
                            "tabulated multiplier abscissa must be finite and nonnegative, got {t}"
                        )));
                    }
                    if !(*h >= S::zero()) || !h.is_finite() {
                        return Err(Error::Config(format!(
                            "tabulated multiplier values must be finite and nonnegative, got {h}"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Short label for file names and table headers.
    pub fn label(&self) -> String {
        match self {
            EstimatorSpec::Unbiased => "unbiased".into(),
            EstimatorSpec::Affine { a } => format!("affine_{a:.4}"),
            EstimatorSpec::Mle => "mle".into(),
            EstimatorSpec::BoundaryUniform { l, radius } => format!("bu_l{l}_r{radius}"),
            EstimatorSpec::RadialMixture { l, prior } => {
                let tag = match prior {
                    RadialPrior::PointMass { r } => format!("point{r}"),
                    RadialPrior::BallUniform => "ball".into(),
                    RadialPrior::Tabulated { .. } => "tabulated".into(),
                };
                format!("mix_l{l}_{tag}")
            }
            EstimatorSpec::Truncated { base } => format!("trunc_{}", base.label()),
            EstimatorSpec::TabulatedMultiplier { .. } => "tabulated".into(),
        }
    }
}

fn check_exponent<S: Scalar>(l: S, prob: &Problem<S>) -> Result<()> {
    if !(l < prob.dof_sum()) {
        return Err(Error::Config(format!(
            "prior exponent l = {l} is not below k + p = {}; the posterior exists only for l < k + p",
            prob.dof_sum()
        )));
    }
    Ok(())
}

/// Multiplier h(t) of the estimator described by `spec`.
///
/// `t` may be `+∞`; the limiting multiplier is returned. The spec is assumed
/// valid for the problem (see [`EstimatorSpec::validate`]).
pub fn multiplier<S: Scalar>(spec: &EstimatorSpec<S>, t: S, prob: &Problem<S>) -> Result<S> {
    if t.is_nan() || t < S::zero() {
        return Err(Error::Domain(format!(
            "multiplier argument t must be nonnegative, got {t}"
        )));
    }
    match spec {
        EstimatorSpec::Unbiased => Ok(S::one()),
        EstimatorSpec::Affine { a } => Ok(*a),
        EstimatorSpec::Mle => Ok(h_mle(t, prob)),
        EstimatorSpec::BoundaryUniform { l, radius } => h_bu(t, prob, *l, *radius),
        EstimatorSpec::RadialMixture { l, prior } => h_radial_mixture(t, prob, *l, prior),
        EstimatorSpec::Truncated { base } => {
            let inner = multiplier(base, t, prob)?;
            Ok(inner.min(envelope(t, prob)?))
        }
        EstimatorSpec::TabulatedMultiplier { grid } => Ok(interp_grid(grid, t)),
    }
}

/// Applies the estimator: h(‖x‖²/s²)·x.
pub fn estimate<S: Scalar>(
    spec: &EstimatorSpec<S>,
    x: &[S],
    s2: S,
    prob: &Problem<S>,
) -> Result<Vec<S>> {
    if x.len() != prob.p() as usize {
        return Err(Error::Config(format!(
            "observation has length {}, problem dimension is {}",
            x.len(),
            prob.p()
        )));
    }
    if !(s2 > S::zero()) {
        return Err(Error::Domain(format!("s2 must be positive, got {s2}")));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("observation vector must be finite".into()));
    }
    let t = x.iter().map(|&v| v * v).fold(S::zero(), |acc, v| acc + v) / s2;
    let h = multiplier(spec, t, prob)?;
    Ok(x.iter().map(|&v| h * v).collect())
}

/// Output of the two-sample change of coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSampleReduction<S> {
    /// x = (x1 − x2)/2, the observation for the canonical problem.
    pub x: Vec<S>,
    /// w = (x1 + x2)/2, carried along to recover the θ₁ estimate.
    pub w: Vec<S>,
    /// s² = s'²/2.
    pub s2: S,
    /// m = m'/√2.
    pub m: S,
}

impl<S: Scalar> TwoSampleReduction<S> {
    /// Converts an estimate ψ of θ = (θ₁ − θ₂)/2 back to an estimate of θ₁.
    pub fn recombine(&self, psi: &[S]) -> Vec<S> {
        self.w
            .iter()
            .zip(psi)
            .map(|(&wi, &pi)| wi + pi)
            .collect()
    }
}

/// Rotates the two-sample problem (X₁, X₂, S'²) with ‖θ₁−θ₂‖/σ' ≤ m' into the
/// canonical one-sample problem.
pub fn two_sample_map<S: Scalar>(
    x1: &[S],
    x2: &[S],
    s2_prime: S,
    m_prime: S,
) -> Result<TwoSampleReduction<S>> {
    if x1.len() != x2.len() {
        return Err(Error::Domain(format!(
            "two-sample observations differ in length: {} vs {}",
            x1.len(),
            x2.len()
        )));
    }
    if !(s2_prime > S::zero()) {
        return Err(Error::Domain(format!(
            "s2_prime must be positive, got {s2_prime}"
        )));
    }
    if !(m_prime > S::zero()) {
        return Err(Error::Domain(format!(
            "m_prime must be positive, got {m_prime}"
        )));
    }
    let half = S::real(0.5);
    let x = x1.iter().zip(x2).map(|(&a, &b)| (a - b) * half).collect();
    let w = x1.iter().zip(x2).map(|(&a, &b)| (a + b) * half).collect();
    Ok(TwoSampleReduction {
        x,
        w,
        s2: s2_prime * half,
        m: m_prime / S::real(2.0).sqrt(),
    })
}

/// Linear interpolation on an explicit (t, h) grid, constant outside.
fn interp_grid<S: Scalar>(grid: &[(S, S)], t: S) -> S {
    let first = grid[0];
    let last = grid[grid.len() - 1];
    if t <= first.0 {
        return first.1;
    }
    if t >= last.0 {
        return last.1;
    }
    let mut lo = 0usize;
    let mut hi = grid.len() - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if grid[mid].0 <= t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (t0, h0) = grid[lo];
    let (t1, h1) = grid[hi];
    let frac = (t - t0) / (t1 - t0);
    h0 + frac * (h1 - h0)
}

/// Linear interpolation of values placed on the equispaced grid over [0, m].
fn interp_equispaced<S: Scalar>(values: &[S], r: S, m: S) -> S {
    let n = values.len();
    if r <= S::zero() {
        return values[0];
    }
    if r >= m {
        return values[n - 1];
    }
    let pos = r / m * S::real((n - 1) as f64);
    let idx = pos.floor().approx_f64() as usize;
    let idx = idx.min(n - 2);
    let frac = pos - S::real(idx as f64);
    values[idx] + frac * (values[idx + 1] - values[idx])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn prob523() -> Problem<f64> {
        Problem::new(5, 20, 2.0).unwrap()
    }

    #[test]
    fn problem_validation() {
        assert!(Problem::new(0, 20, 2.0).is_err());
        assert!(Problem::new(5, 0, 2.0).is_err());
        assert!(Problem::new(5, 20, 0.0).is_err());
        assert!(Problem::new(5, 20, -1.0).is_err());
        assert!(Problem::new(5, 20, f64::INFINITY).is_err());
    }

    #[test]
    fn exponent_bound_enforced() {
        let prob = prob523();
        let spec = EstimatorSpec::BoundaryUniform { l: 25.0, radius: 2.0 };
        let err = spec.validate(&prob).unwrap_err();
        assert!(err.to_string().contains("l < k + p"), "{err}");
        assert!(EstimatorSpec::BoundaryUniform { l: 24.9, radius: 2.0 }
            .validate(&prob)
            .is_ok());
    }

    #[test]
    fn unbiased_multiplier_is_one() {
        let prob = prob523();
        for &t in &[0.0, 0.3, 7.0, f64::INFINITY] {
            assert_eq!(multiplier(&EstimatorSpec::Unbiased, t, &prob).unwrap(), 1.0);
        }
    }

    #[test]
    fn minimax_affine_coefficient() {
        // a = m²/(m²+p) = 4/9 for (p, m) = (5, 2).
        let prob = prob523();
        let spec = EstimatorSpec::minimax_affine(&prob);
        assert_relative_eq!(
            multiplier(&spec, 1.0, &prob).unwrap(),
            4.0 / 9.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn truncated_caps_at_envelope() {
        let prob = Problem::new(5, 20, 3.0).unwrap();
        let trunc = EstimatorSpec::Truncated {
            base: Box::new(EstimatorSpec::Mle),
        };
        for &t in &[0.0, 0.1, 0.36, 1.0, 10.0, f64::INFINITY] {
            let want = h_mle(t, &prob).min(envelope(t, &prob).unwrap());
            assert_relative_eq!(
                multiplier(&trunc, t, &prob).unwrap(),
                want,
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn estimate_applies_multiplier() {
        let prob = prob523();
        let x = vec![0.4, -0.2, 0.1, 0.0, 0.3];
        let got = estimate(&EstimatorSpec::Unbiased, &x, 1.7, &prob).unwrap();
        assert_eq!(got, x);

        // MLE returns x untouched when t <= m²/(p+k).
        let t_small: f64 = x.iter().map(|v| v * v).sum::<f64>() / 10.0;
        assert!(t_small <= 4.0 / 25.0);
        let got = estimate(&EstimatorSpec::Mle, &x, 10.0, &prob).unwrap();
        assert_eq!(got, x);

        // Zero observation stays zero for the boundary-uniform rule.
        let zero = vec![0.0; 5];
        let spec = EstimatorSpec::boundary_uniform(0.0, &prob);
        assert_eq!(estimate(&spec, &zero, 1.0, &prob).unwrap(), zero);
    }

    #[test]
    fn estimate_rejects_bad_inputs() {
        let prob = prob523();
        let x = vec![1.0; 5];
        assert!(estimate(&EstimatorSpec::Unbiased, &x, 0.0, &prob).is_err());
        assert!(estimate(&EstimatorSpec::Unbiased, &x, -1.0, &prob).is_err());
        assert!(estimate(&EstimatorSpec::Unbiased, &[1.0; 4], 1.0, &prob).is_err());
        assert!(estimate(&EstimatorSpec::Unbiased, &[f64::NAN; 5], 1.0, &prob).is_err());
    }

    #[test]
    fn two_sample_reduction() {
        let x1 = vec![1.0, 2.0, 3.0];
        let x2 = vec![0.5, -1.0, 3.0];
        let red = two_sample_map(&x1, &x2, 4.0, 2.0).unwrap();
        assert_eq!(red.x, vec![0.25, 1.5, 0.0]);
        assert_eq!(red.w, vec![0.75, 0.5, 3.0]);
        assert_eq!(red.s2, 2.0);
        assert_relative_eq!(red.m, std::f64::consts::SQRT_2, max_relative = 1e-15);

        // Identity multiplier round-trips to x1.
        let back = red.recombine(&red.x.clone());
        for (b, a) in back.iter().zip(&x1) {
            assert_relative_eq!(b, a, max_relative = 1e-15);
        }

        // x1 = x2 collapses the difference coordinate.
        let same = two_sample_map(&x1, &x1, 4.0, 2.0).unwrap();
        assert!(same.x.iter().all(|&v| v == 0.0));

        assert!(two_sample_map(&x1, &x2[..2], 4.0, 2.0).is_err());
        assert!(two_sample_map(&x1, &x2, 0.0, 2.0).is_err());
    }

    #[test]
    fn tabulated_multiplier_interpolates() {
        let prob = prob523();
        let spec = EstimatorSpec::TabulatedMultiplier {
            grid: vec![(0.0, 1.0), (1.0, 0.5), (2.0, 0.5)],
        };
        spec.validate(&prob).unwrap();
        assert_eq!(multiplier(&spec, 0.5, &prob).unwrap(), 0.75);
        assert_eq!(multiplier(&spec, 5.0, &prob).unwrap(), 0.5); // constant extrapolation
        assert_eq!(multiplier(&spec, f64::INFINITY, &prob).unwrap(), 0.5);
    }

    #[test]
    fn tabulated_multiplier_validation() {
        let prob = prob523();
        let bad_order = EstimatorSpec::TabulatedMultiplier {
            grid: vec![(1.0, 1.0), (0.5, 0.5)],
        };
        assert!(bad_order.validate(&prob).is_err());
        let negative = EstimatorSpec::TabulatedMultiplier {
            grid: vec![(0.0, 1.0), (1.0, -0.5)],
        };
        assert!(negative.validate(&prob).is_err());
    }

    #[test]
    fn tabulated_prior_normalization_checked() {
        let prob = prob523();
        let ok = EstimatorSpec::RadialMixture {
            l: 0.0,
            // Constant density 1/m on [0, m] integrates to one.
            prior: RadialPrior::Tabulated {
                density: vec![0.5; 16],
            },
        };
        ok.validate(&prob).unwrap();
        let bad = EstimatorSpec::RadialMixture {
            l: 0.0,
            prior: RadialPrior::Tabulated {
                density: vec![0.7; 16],
            },
        };
        assert!(bad.validate(&prob).is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        let spec: EstimatorSpec<f64> = EstimatorSpec::Truncated {
            base: Box::new(EstimatorSpec::RadialMixture {
                l: -2.0,
                prior: RadialPrior::BallUniform,
            }),
        };
        let json = serde_json::to_string(&spec).unwrap();
        let back: EstimatorSpec<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);

        let literal = r#"{"kind":"boundary_uniform","l":0.0,"radius":2.0}"#;
        let parsed: EstimatorSpec<f64> = serde_json::from_str(literal).unwrap();
        assert_eq!(
            parsed,
            EstimatorSpec::BoundaryUniform { l: 0.0, radius: 2.0 }
        );
    }
}
