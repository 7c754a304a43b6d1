//! Shared helpers for the integration tests: extended-precision and
//! exact-rational oracles, independent of the library code paths they check.

pub mod dd;
pub mod oracle;

/// Relative-difference assertion with a readable failure message.
#[macro_export]
macro_rules! assert_rel {
    ($got:expr, $want:expr, $tol:expr) => {{
        let got: f64 = $got;
        let want: f64 = $want;
        let tol: f64 = $tol;
        let denom = want.abs().max(1e-300);
        assert!(
            ((got - want) / denom).abs() <= tol,
            "relative difference {:.3e} exceeds {:.1e}: got {got:.17e}, want {want:.17e}",
            ((got - want) / denom).abs(),
            tol
        );
    }};
}
