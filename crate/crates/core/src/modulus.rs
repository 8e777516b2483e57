//! Power-type convexity moduli `Phi(d) = c * d^r`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A modulus of uniform convexity of power type: `Phi(d) = c * d^r` with
/// `c > 0` and `r >= 2`. These parameters make `Phi` increasing on
/// `[0, inf)` with `Phi(0) = 0`, the normal form every chained bound
/// assumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusSpec<T> {
    coefficient: T,
    exponent: T,
}

impl<T: Real> ModulusSpec<T> {
    pub fn new(coefficient: T, exponent: T) -> Result<Self> {
        if !coefficient.is_finite() || coefficient <= T::zero() {
            return Err(Error::InvalidInput(format!(
                "modulus coefficient must be finite and > 0, got {coefficient}"
            )));
        }
        if !exponent.is_finite() || exponent < T::of(2.0) {
            return Err(Error::InvalidInput(format!(
                "modulus exponent must be finite and >= 2, got {exponent}"
            )));
        }
        Ok(Self {
            coefficient,
            exponent,
        })
    }

    /// The canonical `Phi(d) = d^2`.
    pub fn squared() -> Self {
        Self {
            coefficient: T::one(),
            exponent: T::of(2.0),
        }
    }

    pub fn coefficient(&self) -> T {
        self.coefficient
    }

    pub fn exponent(&self) -> T {
        self.exponent
    }

    pub fn name(&self) -> String {
        format!("{}*d^{}", self.coefficient, self.exponent)
    }

    /// Evaluates `Phi(d)`. `d` must be nonnegative: callers pass absolute
    /// differences. `eval(0)` is exactly zero.
    pub fn eval(&self, d: T) -> Result<T> {
        if !(d >= T::zero()) {
            return Err(Error::InvalidInput(format!(
                "modulus argument must be >= 0, got {d}"
            )));
        }
        if d == T::zero() {
            return Ok(T::zero());
        }
        Ok(self.coefficient * d.powf(self.exponent))
    }

    /// Same modulus with the coefficient multiplied by `alpha > 0`.
    pub fn scale_coefficient(&self, alpha: T) -> Result<Self> {
        Self::new(self.coefficient * alpha, self.exponent)
    }

    /// Grid check that `Phi` is nondecreasing on `[0, upto]`.
    pub fn is_nondecreasing_on(&self, upto: T, points: usize) -> bool {
        if points < 2 || !(upto > T::zero()) {
            return true;
        }
        let step = upto / T::of_usize(points - 1);
        let mut prev = T::zero();
        for i in 1..points {
            let d = T::of_usize(i) * step;
            let v = match self.eval(d) {
                Ok(v) => v,
                Err(_) => return false,
            };
            if v < prev {
                return false;
            }
            prev = v;
        }
        true
    }
}
