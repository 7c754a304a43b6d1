//! Quadrature rules: fixed Gauss-Legendre nodes for the radial integrals and
//! an adaptive Simpson scheme for the integral-identity checks.

use std::any::Any;
use std::ops::Deref;
use std::sync::OnceLock;

use crate::scalar::Scalar;

/// Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre<S> {
    nodes: Vec<S>,
    weights: Vec<S>,
}

impl<S: Scalar> GaussLegendre<S> {
    /// Computes nodes and weights by Newton iteration on the Legendre
    /// polynomial, seeded with the Chebyshev-angle approximation.
    pub fn new(degree: usize) -> Self {
        assert!(degree >= 2, "quadrature degree must be at least 2");
        let n = degree;
        let mut nodes = vec![S::zero(); n];
        let mut weights = vec![S::zero(); n];
        let nf = S::real(n as f64);
        let tol = S::epsilon() * S::real(4.0);
        // Roots come in ± pairs; compute the upper half and mirror.
        for i in 0..n.div_ceil(2) {
            let theta = S::PI() * (S::real(i as f64) + S::real(0.75)) / (nf + S::real(0.5));
            let mut x = theta.cos();
            let mut dp;
            loop {
                // Legendre recurrence: (j+1)P_{j+1} = (2j+1)xP_j − jP_{j-1}.
                let mut p0 = S::one();
                let mut p1 = x;
                for j in 1..n {
                    let jf = S::real(j as f64);
                    let p2 = ((S::real(2.0) * jf + S::one()) * x * p1 - jf * p0)
                        / (jf + S::one());
                    p0 = p1;
                    p1 = p2;
                }
                // Derivative from P_n and P_{n-1}.
                dp = nf * (x * p1 - p0) / (x * x - S::one());
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() <= tol {
                    break;
                }
            }
            let w = S::real(2.0) / ((S::one() - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn degree(&self) -> usize {
        self.nodes.len()
    }

    /// ∫_a^b f(x) dx by affine mapping of the reference nodes.
    pub fn integrate<F: FnMut(S) -> S>(&self, a: S, b: S, mut f: F) -> S {
        let half = S::real(0.5);
        let mid = (a + b) * half;
        let scale = (b - a) * half;
        let mut acc = S::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + scale * x);
        }
        acc * scale
    }

    /// Like [`Self::integrate`], but short-circuits on the first error from
    /// the integrand.
    pub fn try_integrate<F, E>(&self, a: S, b: S, mut f: F) -> std::result::Result<S, E>
    where
        F: FnMut(S) -> std::result::Result<S, E>,
    {
        let half = S::real(0.5);
        let mid = (a + b) * half;
        let scale = (b - a) * half;
        let mut acc = S::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + scale * x)?;
        }
        Ok(acc * scale)
    }
}

/// Either a shared static rule (f32/f64) or a freshly built one.
pub enum RuleRef<S: Scalar> {
    Shared(&'static GaussLegendre<S>),
    Owned(Box<GaussLegendre<S>>),
}

impl<S: Scalar> Deref for RuleRef<S> {
    type Target = GaussLegendre<S>;
    fn deref(&self) -> &GaussLegendre<S> {
        match self {
            RuleRef::Shared(r) => r,
            RuleRef::Owned(r) => r,
        }
    }
}

/// The 128-node rule used for radial-prior integrals. Cached per process for
/// the two primitive float types so hot paths do not rebuild it.
pub fn gauss_legendre_128<S: Scalar>() -> RuleRef<S> {
    static RULE_F64: OnceLock<GaussLegendre<f64>> = OnceLock::new();
    static RULE_F32: OnceLock<GaussLegendre<f32>> = OnceLock::new();
    let shared: Option<&'static dyn Any> =
        if std::any::TypeId::of::<S>() == std::any::TypeId::of::<f64>() {
            Some(RULE_F64.get_or_init(|| GaussLegendre::new(128)))
        } else if std::any::TypeId::of::<S>() == std::any::TypeId::of::<f32>() {
            Some(RULE_F32.get_or_init(|| GaussLegendre::new(128)))
        } else {
            None
        };
    match shared.and_then(|r| r.downcast_ref::<GaussLegendre<S>>()) {
        Some(r) => RuleRef::Shared(r),
        None => RuleRef::Owned(Box::new(GaussLegendre::new(128))),
    }
}

/// Adaptive Simpson integration to a relative tolerance.
///
/// A 64-panel composite prescan fixes the absolute error budget
/// `rel_tol · max(|prescan integral|, abs_floor)`, which the adaptive
/// refinement then spends proportionally to panel width. The prescan keeps
/// budget allocation sane for integrands spanning many orders of magnitude,
/// where a pointwise-relative criterion wastes work on negligible tails.
pub fn adaptive_simpson<S, F>(f: &F, a: S, b: S, rel_tol: S, abs_floor: S, max_depth: u32) -> S
where
    S: Scalar,
    F: Fn(S) -> S,
{
    const PANELS: usize = 64;
    let n = 2 * PANELS;
    let width = (b - a) / S::real(n as f64);
    let values: Vec<S> = (0..=n)
        .map(|i| {
            if i == n {
                f(b)
            } else {
                f(a + width * S::real(i as f64))
            }
        })
        .collect();
    let mut prescan = S::zero();
    for i in 0..PANELS {
        let lo = a + width * S::real((2 * i) as f64);
        let hi = lo + width * S::real(2.0);
        prescan += simpson_panel(lo, hi, values[2 * i], values[2 * i + 1], values[2 * i + 2]);
    }
    let budget = rel_tol * prescan.abs().max(abs_floor);
    let per_panel = budget / S::real(PANELS as f64);

    let mut total = S::zero();
    for i in 0..PANELS {
        let lo = a + width * S::real((2 * i) as f64);
        let hi = lo + width * S::real(2.0);
        let (fa, fm, fb) = (values[2 * i], values[2 * i + 1], values[2 * i + 2]);
        let whole = simpson_panel(lo, hi, fa, fm, fb);
        total += simpson_recurse(f, lo, hi, fa, fm, fb, whole, per_panel, max_depth);
    }
    total
}

fn simpson_panel<S: Scalar>(a: S, b: S, fa: S, fm: S, fb: S) -> S {
    (b - a) / S::real(6.0) * (fa + S::real(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse<S, F>(
    f: &F,
    a: S,
    b: S,
    fa: S,
    fm: S,
    fb: S,
    whole: S,
    abs_tol: S,
    depth: u32,
) -> S
where
    S: Scalar,
    F: Fn(S) -> S,
{
    let m = (a + b) * S::real(0.5);
    let lm = (a + m) * S::real(0.5);
    let rm = (m + b) * S::real(0.5);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_panel(a, m, fa, flm, fm);
    let right = simpson_panel(m, b, fm, frm, fb);
    let refined = left + right;
    let err = (refined - whole).abs();
    if depth == 0 || err <= S::real(15.0) * abs_tol {
        // Richardson extrapolation of the two estimates.
        return refined + (refined - whole) / S::real(15.0);
    }
    let half_tol = abs_tol * S::real(0.5);
    simpson_recurse(f, a, m, fa, flm, fm, left, half_tol, depth - 1)
        + simpson_recurse(f, m, b, fm, frm, fb, right, half_tol, depth - 1)
}
