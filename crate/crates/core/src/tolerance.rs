//! Slack/tolerance framework for floating-point inequality verification.
//!
//! Every inequality `lhs >= rhs` in this crate is checked as
//! `slack = lhs - rhs >= -tol` with `tol = atol + rtol * scale`, where
//! `scale` is the largest absolute term taking part in the chain. All
//! quantities here are short sums and products, so this linear model is
//! enough; certified interval arithmetic is out of scope.

use crate::scalar::Real;

/// Absolute floor of the verification gate.
pub const DEFAULT_ATOL: f64 = 1e-10;
/// Relative component of the verification gate.
pub const DEFAULT_RTOL: f64 = 1e-9;

/// Mixed absolute/relative tolerance: `gate(scale) = atol + rtol * |scale|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    pub atol: T,
    pub rtol: T,
}

impl<T: Real> Tolerance<T> {
    pub fn new(atol: T, rtol: T) -> Self {
        Self { atol, rtol }
    }

    /// The verification gate at a given scale.
    pub fn gate(&self, scale: T) -> T {
        self.atol + self.rtol * scale.abs()
    }

    /// Whether `slack >= -gate(scale)`.
    pub fn admits(&self, slack: T, scale: T) -> bool {
        slack >= -self.gate(scale)
    }

    /// Slack divided by the gate. Violations are exactly the values below
    /// `-1`, which makes slacks comparable across functions and scales.
    pub fn normalized(&self, slack: T, scale: T) -> T {
        slack / self.gate(scale)
    }
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self::new(T::of(DEFAULT_ATOL), T::of(DEFAULT_RTOL))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_combines_absolute_and_relative_parts() {
        let tol = Tolerance::<f64>::default();
        assert_eq!(tol.gate(0.0), 1e-10);
        assert!((tol.gate(2.0) - (1e-10 + 2e-9)).abs() < 1e-24);
        assert_eq!(tol.gate(-2.0), tol.gate(2.0));
    }

    #[test]
    fn admits_is_one_sided() {
        let tol = Tolerance::<f64>::default();
        assert!(tol.admits(0.0, 1.0));
        assert!(tol.admits(-5e-10, 1.0));
        assert!(!tol.admits(-5e-9, 1.0));
        assert!(tol.admits(1.0, 1.0));
    }

    #[test]
    fn normalized_marks_violations_below_minus_one() {
        let tol = Tolerance::<f64>::default();
        let gate = tol.gate(1.0);
        assert!(tol.normalized(-2.0 * gate, 1.0) < -1.0);
        assert!(tol.normalized(-0.5 * gate, 1.0) > -1.0);
    }
}
