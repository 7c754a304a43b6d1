//! Scalar abstraction for the numerical kernels.
//!
//! All core math is generic over the floating-point type through [`Scalar`],
//! which bundles the `num-traits` bounds the kernels need. Concrete aliases
//! for the `f64` instantiation live at the crate root.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar: `f32` or `f64` (or any type satisfying the bounds).
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant into this scalar type.
    fn real(v: f64) -> Self {
        Self::from_f64(v).expect("f64 constant must be representable")
    }

    /// Lossy view as `f64`, for formatting and error reporting.
    fn approx_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
