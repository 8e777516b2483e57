use crate::error::{Error, Result};
use crate::scalar::Real;

/// Closed ambient interval `[a, b]` with `a < b` and finite endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    a: T,
    b: T,
}

impl<T: Real> Interval<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInput(format!(
                "interval endpoints must be finite, got [{a}, {b}]"
            )));
        }
        if !(a < b) {
            return Err(Error::InvalidInput(format!(
                "interval requires a < b, got [{a}, {b}]"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn lower(&self) -> T {
        self.a
    }

    pub fn upper(&self) -> T {
        self.b
    }

    pub fn width(&self) -> T {
        self.b - self.a
    }

    pub fn midpoint(&self) -> T {
        (self.a + self.b) / T::of(2.0)
    }

    pub fn contains(&self, x: T) -> bool {
        self.a <= x && x <= self.b
    }

    /// `n` evenly spaced points from `a` to `b` inclusive; `n >= 2`.
    pub fn linspace(&self, n: usize) -> Vec<T> {
        debug_assert!(n >= 2);
        let step = self.width() / T::of_usize(n - 1);
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.b
                } else {
                    self.a + T::of_usize(i) * step
                }
            })
            .collect()
    }
}
