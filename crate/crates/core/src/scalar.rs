//! Floating-point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar used throughout the crate. Implemented for `f32` and `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Every literal used by the crate is representable.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    /// Converts an index.
    #[inline]
    fn from_index(n: usize) -> Self {
        Self::from_usize(n).expect("index representable in scalar type")
    }

    /// Lossy view as `f64`, used for error messages and reports.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Absolute tolerance used by quadrature and root finding: `1e-12`, or a
    /// small multiple of machine epsilon when the type cannot resolve that.
    fn abs_tol() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(16.0))
    }

    /// Positive part `[u]^+`.
    #[inline]
    fn pos_part(self) -> Self {
        if self > Self::zero() {
            self
        } else {
            Self::zero()
        }
    }

    /// Negative part `[u]^-`, kept with its sign (so it is `<= 0`).
    #[inline]
    fn neg_part(self) -> Self {
        if self < Self::zero() {
            self
        } else {
            Self::zero()
        }
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `ln(e^a + e^b)` without overflow.
pub fn log_add_exp<T: Scalar>(a: T, b: T) -> T {
    if a == T::neg_infinity() {
        return b;
    }
    if b == T::neg_infinity() {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parts() {
        assert_eq!(2.0f64.pos_part(), 2.0);
        assert_eq!((-2.0f64).pos_part(), 0.0);
        assert_eq!((-2.0f64).neg_part(), -2.0);
        assert_eq!(3.0f32.neg_part(), 0.0);
    }

    #[test]
    fn log_add_exp_matches_direct() {
        let v = log_add_exp(1.0f64.ln(), 3.0f64.ln());
        assert!((v - 4.0f64.ln()).abs() < 1e-15);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 2.0), 2.0);
        // far outside exp range
        let big = log_add_exp(1000.0f64, 1000.0);
        assert!((big - (1000.0 + 2.0f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn tolerance_tracks_precision() {
        assert_eq!(f64::abs_tol(), 1e-12);
        assert!(f32::abs_tol() > 1e-7);
    }
}
