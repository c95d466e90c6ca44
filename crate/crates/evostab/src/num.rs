//! Scalar abstraction for the numeric core.
//!
//! Everything that does floating-point work is generic over [`Real`], a
//! trait alias over the num-traits float machinery plus the ndarray bounds
//! needed for dense products. `f32` and `f64` implement it; the crate-root
//! aliases and the CLI pin `f64`.

use ndarray::{LinalgScalar, ScalarOperand};
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + LinalgScalar
    + ScalarOperand
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for pulling literals into the generic scalar type.
#[inline]
pub fn r<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal must convert into the scalar type")
}

/// `usize` index into the scalar type (horizon offsets, exponents).
#[inline]
pub fn ri<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("usize must convert into the scalar type")
}

/// Stable log-sum-exp of two log-domain values; `-inf` behaves as log(0).
pub fn ln_add_exp<T: Real>(a: T, b: T) -> T {
    if a == T::neg_infinity() {
        return b;
    }
    if b == T::neg_infinity() {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}
