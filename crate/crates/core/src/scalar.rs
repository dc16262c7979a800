//! Scalar abstractions.
//!
//! Floating-point code is written against [`Real`] (implemented for `f32`
//! and `f64`). Code that only needs field arithmetic, such as the
//! characteristic polynomial and tridiagonal determinants, is written against
//! [`Field`] so it can also run on exact rationals.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, MulAssign, Neg, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, Num};

/// floating point: f32 or f64
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossless-enough conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Exact or approximate field arithmetic (f64, f32, `BigRational`, ...).
pub trait Field: Clone + Num + Neg<Output = Self> + FromPrimitive {
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("integer representable")
            / Self::from_i64(den).expect("integer representable")
    }
}

impl<T: Clone + Num + Neg<Output = T> + FromPrimitive> Field for T {}

/// Neumaier-compensated sum, reduced in iteration order.
pub fn compensated_sum<T: Real>(values: impl IntoIterator<Item = T>) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
