//! Scalar abstraction underlying all matrices and measures.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps, ToPrimitive};

/// Real floating-point scalar the library is generic over.
///
/// This is a closed abstraction over the machine floats; the crate implements
/// it for `f32` and `f64` and the concrete aliases at the crate root fix
/// `f64`. The default tolerances in [`crate::tolerances::Tolerances`] assume
/// `f64` precision and must be loosened for `f32` work.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssignOps
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant (tolerances, grid factors, test values).
    /// Exact for `f64`, rounded for `f32`.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant must convert")
    }

    /// Converts a count into the scalar type.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize must convert")
    }

    /// Lossy view as `f64`, used for diagnostics and error payloads.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over [`Real`].
pub type C<T> = Complex<T>;

/// Complex zero.
pub fn c_zero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

/// Complex one.
pub fn c_one<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

/// Real number promoted to complex.
pub fn c_re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// The imaginary unit.
pub fn c_i<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::one())
}
