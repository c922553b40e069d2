//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All distance, path-length and depth computations are written against
//! [`Scalar`], which is implemented for `f32` and `f64`. The matrix
//! functions on the SPD cone need [`nalgebra::RealField`], so that is the
//! backbone of the trait; `num-traits` supplies the primitive conversions.

use std::fmt::{Debug, Display, LowerExp};

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating-point type usable for distances, path lengths and depths.
pub trait Scalar:
    RealField
    + Copy
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Positive infinity.
    fn infinity() -> Self;

    fn nan() -> Self;

    /// Lossless for `f64`, rounding for `f32`.
    fn from_f64_lossy(x: f64) -> Self;

    fn as_f64(self) -> f64;

    /// Bit pattern widened to 64 bits; used for hashing samples.
    fn to_bits_u64(self) -> u64;
}

impl Scalar for f64 {
    #[inline]
    fn infinity() -> Self {
        f64::INFINITY
    }
    #[inline]
    fn nan() -> Self {
        f64::NAN
    }
    #[inline]
    fn from_f64_lossy(x: f64) -> Self {
        x
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
    #[inline]
    fn to_bits_u64(self) -> u64 {
        self.to_bits()
    }
}

impl Scalar for f32 {
    #[inline]
    fn infinity() -> Self {
        f32::INFINITY
    }
    #[inline]
    fn nan() -> Self {
        f32::NAN
    }
    #[inline]
    fn from_f64_lossy(x: f64) -> Self {
        x as f32
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
    #[inline]
    fn to_bits_u64(self) -> u64 {
        self.to_bits() as u64
    }
}

/// Shorthand for converting an `f64` literal into any [`Scalar`].
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64_lossy(x)
}

/// `x^p` with the `p == 1` case returned unchanged.
#[inline]
pub fn pow<T: Scalar>(x: T, p: T) -> T {
    if p == T::one() {
        x
    } else {
        x.powf(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_roundtrip() {
        assert_eq!(lit::<f64>(0.1), 0.1);
        assert_eq!(lit::<f32>(0.5), 0.5f32);
        assert_eq!(2.5f32.as_f64(), 2.5);
        assert!(<f64 as Scalar>::infinity().is_infinite());
    }

    #[test]
    fn pow_unit_exponent_is_identity() {
        let x = 0.123_456_789_f64;
        assert_eq!(pow(x, 1.0), x);
        assert_eq!(pow(3.0f64, 2.0), 9.0);
    }
}
