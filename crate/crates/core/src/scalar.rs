//! Scalar abstraction: the numerical core is generic over the floating-point
//! type through [`Real`], with `f64` aliases exported at the crate root.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the library is generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + core::iter::Sum
    + core::fmt::Debug
    + core::fmt::Display
    + core::fmt::LowerExp
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + core::iter::Sum
        + core::fmt::Debug
        + core::fmt::Display
        + core::fmt::LowerExp
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` constant into the working scalar type.
#[inline]
pub fn cst<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("finite f64 constant must be representable")
}

/// Converts a `usize` (quantum number, grid size) into the working scalar.
#[inline]
pub fn cst_usize<T: Real>(v: usize) -> T {
    T::from_usize(v).expect("usize must be representable")
}

/// Euler-Mascheroni constant.
#[inline]
pub fn euler_gamma<T: Real>() -> T {
    cst(0.577_215_664_901_532_9)
}

/// `1 + ln(pi)`, the information entropy of a unit-frequency 1D Gaussian pair
/// and the per-dimension term of the BBM bound.
#[inline]
pub fn one_plus_ln_pi<T: Real>() -> T {
    T::one() + T::PI().ln()
}

/// The BBM lower bound `D (1 + ln pi)` for `D = 2`.
#[inline]
pub fn bbm_bound_2d<T: Real>() -> T {
    let two = T::one() + T::one();
    two * one_plus_ln_pi()
}
