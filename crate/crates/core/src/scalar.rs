//! Floating-point abstraction shared by the numerical routines.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar type accepted by the numerical core: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Relative tolerance used to stop iterative expansions.
    const EPS: Self;

    /// Converts an `f64` literal. Literal constants always fit.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts an integer count.
    #[inline]
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable")
    }
}

impl Scalar for f32 {
    const EPS: Self = f32::EPSILON;
}

impl Scalar for f64 {
    const EPS: Self = f64::EPSILON;
}
