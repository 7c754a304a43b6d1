//! Monte Carlo evaluation of the scale-invariant risk R(λ, δ_h), paired risk
//! differences under common random numbers, and the conditional-decomposition
//! cross-check.
//!
//! Replicates are partitioned into chunks; chunk c draws from an independent
//! ChaCha stream derived from (seed, c). Chunks may run in parallel, but
//! partial sums are merged in chunk order, so results are bit-identical for a
//! fixed seed regardless of the worker count.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::{h_bu, multiplier, EstimatorSpec, Problem};
use crate::scalar::Scalar;

/// Replication count, base seed and chunking for one Monte Carlo estimate.
///
/// Fields are public so callers can rebuild configs with update syntax (the
/// risk-curve pairing does); every sampling entry point revalidates them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SampleConfig {
    pub replicates: u64,
    pub seed: u64,
    pub chunk_size: u64,
}

impl SampleConfig {
    pub const DEFAULT_CHUNK: u64 = 32_768;

    pub fn new(replicates: u64, seed: u64) -> Result<Self> {
        if replicates < 1 {
            return Err(Error::Config("replicate count must be at least 1".into()));
        }
        Ok(SampleConfig {
            replicates,
            seed,
            chunk_size: Self::DEFAULT_CHUNK.min(replicates),
        })
    }

    pub fn with_chunk_size(mut self, chunk_size: u64) -> Result<Self> {
        if chunk_size < 1 || chunk_size > self.replicates {
            return Err(Error::Config(format!(
                "chunk size must lie in [1, replicates = {}], got {chunk_size}",
                self.replicates
            )));
        }
        self.chunk_size = chunk_size;
        Ok(self)
    }

    fn n_chunks(&self) -> u64 {
        self.replicates.div_ceil(self.chunk_size)
    }

    fn chunk_len(&self, chunk: u64) -> u64 {
        let start = chunk * self.chunk_size;
        self.chunk_size.min(self.replicates - start)
    }
}

/// Monte Carlo risk estimate at one value of λ = ‖θ‖/σ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiskPoint<S> {
    pub lambda: S,
    pub estimate: S,
    pub std_error: S,
    pub replicates: u64,
}

/// Risk estimates over a λ grid for one estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskCurve<S> {
    pub problem: Problem<S>,
    pub spec: EstimatorSpec<S>,
    pub points: Vec<RiskPoint<S>>,
}

/// Paired risk difference R(λ, δ_A) − R(λ, δ_B) on common random numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairedDifference<S> {
    pub estimate: S,
    pub std_error: S,
    pub replicates: u64,
}

/// The two routes of the conditional risk decomposition evaluated on common
/// draws: `lhs` the direct loss average, `rhs` the decomposition form, and
/// `tolerance` four standard errors of the paired difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionCheck<S> {
    pub lhs: S,
    pub rhs: S,
    pub tolerance: S,
    pub replicates: u64,
}

impl<S: Scalar> DecompositionCheck<S> {
    pub fn passed(&self) -> bool {
        (self.lhs - self.rhs).abs() <= self.tolerance
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed for grid point `index`, derived from the base seed only. Different
/// estimators evaluated at the same grid point share draws, which is what
/// makes curve-level comparisons paired.
pub fn point_seed(seed: u64, index: usize) -> u64 {
    splitmix64(seed ^ (index as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One canonical draw: x ~ N_p(λe₁, I_p) and s² ~ χ²_k at σ = 1.
///
/// Exactly p normal variates are consumed for x, then k for s², so the
/// stream position is a pure function of the replicate index.
pub fn sample_canonical<S, R>(lambda: S, prob: &Problem<S>, rng: &mut R) -> (Vec<S>, S)
where
    S: Scalar,
    R: Rng,
    StandardNormal: Distribution<S>,
{
    let mut x = Vec::with_capacity(prob.p() as usize);
    for i in 0..prob.p() {
        let z: S = StandardNormal.sample(rng);
        x.push(if i == 0 { lambda + z } else { z });
    }
    let mut s2 = S::zero();
    for _ in 0..prob.k() {
        let z: S = StandardNormal.sample(rng);
        s2 += z * z;
    }
    (x, s2)
}

/// Summary of one draw sufficient for equivariant losses: the first
/// coordinate of x, ‖x‖², and s². Consumes the stream exactly like
/// [`sample_canonical`].
#[inline]
fn draw_summary<S, R>(lambda: S, prob: &Problem<S>, rng: &mut R) -> (S, S, S)
where
    S: Scalar,
    R: Rng,
    StandardNormal: Distribution<S>,
{
    let mut x1 = S::zero();
    let mut xx = S::zero();
    for i in 0..prob.p() {
        let z: S = StandardNormal.sample(rng);
        let xi = if i == 0 { lambda + z } else { z };
        if i == 0 {
            x1 = xi;
        }
        xx += xi * xi;
    }
    let mut s2 = S::zero();
    for _ in 0..prob.k() {
        let z: S = StandardNormal.sample(rng);
        s2 += z * z;
    }
    (x1, xx, s2)
}

/// Scale-invariant loss of the multiplier rule on one draw (σ = 1):
/// ‖h·x − λe₁‖² = h²‖x‖² − 2hλx₁ + λ².
#[inline]
fn equivariant_loss<S: Scalar>(h: S, lambda: S, x1: S, xx: S) -> S {
    h * h * xx - S::real(2.0) * h * lambda * x1 + lambda * lambda
}

fn check_lambda<S: Scalar>(lambda: S, prob: &Problem<S>) -> Result<()> {
    if !(lambda >= S::zero() && lambda <= prob.m()) {
        return Err(Error::Config(format!(
            "lambda must lie in [0, m = {}], got {lambda}",
            prob.m()
        )));
    }
    Ok(())
}

/// Runs chunk bodies in parallel and merges their outputs in chunk order.
fn run_chunks<T, F>(cfg: &SampleConfig, body: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(ChaCha8Rng, u64) -> Result<T> + Sync,
{
    if cfg.replicates < 1 || cfg.chunk_size < 1 || cfg.chunk_size > cfg.replicates {
        return Err(Error::Config(format!(
            "sample config must satisfy 1 <= chunk_size <= replicates, got chunk_size={}, replicates={}",
            cfg.chunk_size, cfg.replicates
        )));
    }
    (0..cfg.n_chunks())
        .into_par_iter()
        .map(|c| body(stream_rng(cfg.seed, c), cfg.chunk_len(c)))
        .collect()
}

fn mean_and_se<S: Scalar>(sum: S, sum_sq: S, n: u64) -> (S, S) {
    let nf = S::real(n as f64);
    let mean = sum / nf;
    if n < 2 {
        return (mean, S::zero());
    }
    let var = ((sum_sq - nf * mean * mean) / (nf - S::one())).max(S::zero());
    (mean, (var / nf).sqrt())
}

/// Monte Carlo estimate of R(λ, δ) with its standard error.
pub fn mc_risk<S>(
    spec: &EstimatorSpec<S>,
    lambda: S,
    prob: &Problem<S>,
    cfg: &SampleConfig,
) -> Result<RiskPoint<S>>
where
    S: Scalar,
    StandardNormal: Distribution<S>,
{
    check_lambda(lambda, prob)?;
    spec.validate(prob)?;
    let partials: Vec<(S, S)> = run_chunks(cfg, |mut rng, len| {
        let mut sum = S::zero();
        let mut sum_sq = S::zero();
        for _ in 0..len {
            let (x1, xx, s2) = draw_summary(lambda, prob, &mut rng);
            let h = multiplier(spec, xx / s2, prob)?;
            let loss = equivariant_loss(h, lambda, x1, xx);
            sum += loss;
            sum_sq += loss * loss;
        }
        Ok((sum, sum_sq))
    })?;
    let (sum, sum_sq) = partials
        .into_iter()
        .fold((S::zero(), S::zero()), |(a, b), (s, q)| (a + s, b + q));
    let (estimate, std_error) = mean_and_se(sum, sum_sq, cfg.replicates);
    Ok(RiskPoint {
        lambda,
        estimate,
        std_error,
        replicates: cfg.replicates,
    })
}

/// Paired estimate of R(λ, δ_A) − R(λ, δ_B): both losses are evaluated on the
/// same draws and the standard error comes from the per-replicate differences.
pub fn mc_risk_difference<S>(
    spec_a: &EstimatorSpec<S>,
    spec_b: &EstimatorSpec<S>,
    lambda: S,
    prob: &Problem<S>,
    cfg: &SampleConfig,
) -> Result<PairedDifference<S>>
where
    S: Scalar,
    StandardNormal: Distribution<S>,
{
    check_lambda(lambda, prob)?;
    spec_a.validate(prob)?;
    spec_b.validate(prob)?;
    let partials: Vec<(S, S)> = run_chunks(cfg, |mut rng, len| {
        let mut sum = S::zero();
        let mut sum_sq = S::zero();
        for _ in 0..len {
            let (x1, xx, s2) = draw_summary(lambda, prob, &mut rng);
            let t = xx / s2;
            let ha = multiplier(spec_a, t, prob)?;
            let hb = multiplier(spec_b, t, prob)?;
            let d = equivariant_loss(ha, lambda, x1, xx) - equivariant_loss(hb, lambda, x1, xx);
            sum += d;
            sum_sq += d * d;
        }
        Ok((sum, sum_sq))
    })?;
    let (sum, sum_sq) = partials
        .into_iter()
        .fold((S::zero(), S::zero()), |(a, b), (s, q)| (a + s, b + q));
    let (estimate, std_error) = mean_and_se(sum, sum_sq, cfg.replicates);
    Ok(PairedDifference {
        estimate,
        std_error,
        replicates: cfg.replicates,
    })
}

/// Evaluates both sides of the conditional risk decomposition
/// R(λ, δ_h) = λ² + E[a(T){(h(T) − h_λ(T))² − h_λ²(T)}] on common draws.
///
/// The direct loss average is `lhs`; `rhs` replaces a(T) by X'X/σ² (tower
/// property) and uses h_λ(·) = h(λ, 0, ·), the boundary-uniform multiplier at
/// radius λ; λ = 0 gives h_λ ≡ 0.
pub fn conditional_decomposition_check<S>(
    spec: &EstimatorSpec<S>,
    lambda: S,
    prob: &Problem<S>,
    cfg: &SampleConfig,
) -> Result<DecompositionCheck<S>>
where
    S: Scalar,
    StandardNormal: Distribution<S>,
{
    check_lambda(lambda, prob)?;
    spec.validate(prob)?;
    let lam2 = lambda * lambda;
    let partials: Vec<(S, S, S, S)> = run_chunks(cfg, |mut rng, len| {
        let mut lhs_sum = S::zero();
        let mut rhs_sum = S::zero();
        let mut d_sum = S::zero();
        let mut d_sum_sq = S::zero();
        for _ in 0..len {
            let (x1, xx, s2) = draw_summary(lambda, prob, &mut rng);
            let t = xx / s2;
            let h = multiplier(spec, t, prob)?;
            let h_lam = if lambda > S::zero() {
                h_bu(t, prob, S::zero(), lambda)?
            } else {
                S::zero()
            };
            let lhs = equivariant_loss(h, lambda, x1, xx);
            let dev = h - h_lam;
            let rhs = lam2 + xx * (dev * dev - h_lam * h_lam);
            let d = lhs - rhs;
            lhs_sum += lhs;
            rhs_sum += rhs;
            d_sum += d;
            d_sum_sq += d * d;
        }
        Ok((lhs_sum, rhs_sum, d_sum, d_sum_sq))
    })?;
    let (lhs_sum, rhs_sum, d_sum, d_sum_sq) = partials.into_iter().fold(
        (S::zero(), S::zero(), S::zero(), S::zero()),
        |(a, b, c, d), (s, t, u, v)| (a + s, b + t, c + u, d + v),
    );
    let n = cfg.replicates;
    let nf = S::real(n as f64);
    let (_, d_se) = mean_and_se(d_sum, d_sum_sq, n);
    Ok(DecompositionCheck {
        lhs: lhs_sum / nf,
        rhs: rhs_sum / nf,
        tolerance: S::real(4.0) * d_se,
        replicates: n,
    })
}

/// Risk curve over a strictly increasing λ grid inside [0, m].
///
/// Each grid point uses a seed derived from (base seed, point index) only, so
/// curves for different estimators under the same config are paired.
pub fn risk_curve<S>(
    spec: &EstimatorSpec<S>,
    prob: &Problem<S>,
    lambda_grid: &[S],
    cfg: &SampleConfig,
) -> Result<RiskCurve<S>>
where
    S: Scalar,
    StandardNormal: Distribution<S>,
{
    if lambda_grid.is_empty() {
        return Err(Error::Config("lambda grid is empty".into()));
    }
    for pair in lambda_grid.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(Error::Config(
                "lambda grid must be strictly increasing".into(),
            ));
        }
    }
    let mut points = Vec::with_capacity(lambda_grid.len());
    for (i, &lambda) in lambda_grid.iter().enumerate() {
        let point_cfg = SampleConfig {
            seed: point_seed(cfg.seed, i),
            ..*cfg
        };
        points.push(mc_risk(spec, lambda, prob, &point_cfg)?);
    }
    Ok(RiskCurve {
        problem: *prob,
        spec: spec.clone(),
        points,
    })
}

/// Formats a value with 12 significant digits for CSV output.
pub fn format_sig12<S: Scalar>(v: S) -> String {
    format!("{:.11e}", v.approx_f64())
}

impl<S: Scalar> RiskCurve<S> {
    /// Writes the curve as CSV: `#`-prefixed comment lines, a header row, and
    /// one row per grid point with 12 significant digits.
    pub fn write_csv<W: Write>(&self, out: &mut W, comments: &[String]) -> io::Result<()> {
        for line in comments {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "lambda,estimate,std_error,replicates")?;
        for pt in &self.points {
            writeln!(
                out,
                "{},{},{},{}",
                format_sig12(pt.lambda),
                format_sig12(pt.estimate),
                format_sig12(pt.std_error),
                pt.replicates
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self, comments: &[String]) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, comments)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is UTF-8")
    }
}
