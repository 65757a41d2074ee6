use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar accepted by the formula kernels: `f32` or `f64`.
pub trait Scalar: Float + FromPrimitive + ToPrimitive + Debug + Default + Send + Sync + 'static {
    /// Converts an `f64` literal into this scalar.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    fn from_micros(us: u64) -> Self {
        Self::from_u64(us).expect("microsecond count representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Rounds a non-negative duration expressed in microseconds to the nearest
/// integer microsecond. Negative and NaN inputs map to zero.
pub fn round_micros<S: Scalar>(us: S) -> u64 {
    if us.is_nan() || us <= S::zero() {
        return 0;
    }
    us.round().to_u64().unwrap_or(u64::MAX)
}
