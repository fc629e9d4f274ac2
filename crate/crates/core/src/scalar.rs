//! Scalar abstraction shared by every numerical routine in the crate.

use core::fmt::{Debug, Display};
use core::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar the library is generic over.
///
/// Implemented for `f32` and `f64`. Default tolerances in [`crate::Config`]
/// are calibrated for `f64`; running the `f32` instantiation usually needs a
/// looser configuration.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal or tolerance into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Lossy widening used for serialization and reporting.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `1 / d-th root of |x|` with the exact-rounding routes used for `d = 2`
/// (`sqrt`) and `d = 3` (`cbrt`), so that scaling the input by a power of two
/// scales the result by the matching power of two bit-for-bit.
pub(crate) fn inverse_root<S: Real>(x: S, d: usize) -> S {
    let x = x.abs();
    match d {
        1 => x.recip(),
        2 => x.sqrt().recip(),
        3 => x.cbrt().recip(),
        _ => x.powf(-S::one() / S::from_usize(d).unwrap()),
    }
}
