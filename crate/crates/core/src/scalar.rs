//! Scalar abstraction for hypercomplex coefficients.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real coefficient type: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Raw IEEE bit pattern, widened to 64 bits. Used to hash states exactly.
    fn bit_pattern(self) -> u64;

    /// Converts an `f64` literal. Values are always representable up to rounding.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal is representable")
    }

    /// Converts a count or index.
    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    #[inline]
    fn bit_pattern(self) -> u64 {
        // -0.0 and 0.0 hash alike
        if self == 0.0 {
            0
        } else {
            u64::from(self.to_bits())
        }
    }
}

impl Scalar for f64 {
    #[inline]
    fn bit_pattern(self) -> u64 {
        if self == 0.0 {
            0
        } else {
            self.to_bits()
        }
    }
}
