//! Scalar abstraction shared by the exact and floating-point code paths.
//!
//! The simplex solver, the elimination routines and the intrinsic-volume
//! containers are written once against [`Scalar`] and instantiated with
//! `f64`/`f32` (tolerance-based sign tests) or [`BigRational`] (exact sign
//! tests).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A field element with a sign test.
///
/// Floating-point implementations treat values within [`Scalar::EPS`] of
/// zero as zero; the rational implementation is exact.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Signed
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + Send
    + Sync
{
    /// Absolute zero tolerance; `0` for exact scalars.
    const EPS: f64;
    /// Whether sign tests are exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    fn from_f64(v: f64) -> Self;
    fn from_ratio(r: &BigRational) -> Self;
    fn to_f64(&self) -> f64;

    fn is_pos(&self) -> bool {
        self.to_f64_for_sign() > Self::EPS
    }
    fn is_neg(&self) -> bool {
        self.to_f64_for_sign() < -Self::EPS
    }
    fn is_negligible(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }

    #[doc(hidden)]
    fn to_f64_for_sign(&self) -> f64 {
        self.to_f64()
    }
}

macro_rules! impl_float_scalar {
    ($f:ty, $eps:expr) => {
        impl Scalar for $f {
            const EPS: f64 = $eps;
            const EXACT: bool = false;

            fn from_i64(v: i64) -> Self {
                v as $f
            }
            fn from_bigint(v: &BigInt) -> Self {
                v.to_f64().unwrap_or(f64::NAN) as $f
            }
            fn from_f64(v: f64) -> Self {
                v as $f
            }
            fn from_ratio(r: &BigRational) -> Self {
                ratio_to_f64(r) as $f
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }
    };
}

impl_float_scalar!(f64, 1e-11);
impl_float_scalar!(f32, 1e-5);

impl Scalar for BigRational {
    const EPS: f64 = 0.0;
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
    /// Exact binary expansion of `v`; panics on non-finite input.
    fn from_f64(v: f64) -> Self {
        <BigRational as num_traits::FromPrimitive>::from_f64(v).expect("finite float")
    }
    fn from_ratio(r: &BigRational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

/// Correctly scaled float rendering of a big rational, including values whose
/// numerator and denominator individually overflow `f64`.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Shift both to ~64 significant bits before dividing.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 64).max(0);
    let shift_d = (db - 64).max(0);
    let n = (r.numer() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    let e = (shift_n - shift_d) as i32;
    (n / d) * 2f64.powi(e)
}
