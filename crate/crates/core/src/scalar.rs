//! Scalar abstraction: every computation in this crate is generic over the
//! floating-point type through [`Real`].

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + core::fmt::Debug + core::fmt::Display + 'static {
    /// Converts an `f64` literal into `Self`.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal converts to any Real")
    }

    /// Converts a count into `Self`.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("small count converts to any Real")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Largest absolute value in `values`, or zero when empty.
pub fn max_abs<T: Real>(values: impl IntoIterator<Item = T>) -> T {
    values
        .into_iter()
        .fold(T::zero(), |acc, v| acc.max(v.abs()))
}
