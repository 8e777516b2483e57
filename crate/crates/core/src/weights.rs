//! Normalized weight tuples, possibly with negative entries.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Acceptance window for the raw weight sum before renormalization.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

/// An n-tuple of real weights summing to one.
///
/// Construction accepts entries whose sum is within [`WEIGHT_SUM_TOL`] of
/// one (widened to a few ulps for low-precision scalars) and then divides
/// every entry by the sum, so downstream identities that rely on the total
/// being one hold to rounding. Entries may be negative; the `nonneg` and
/// `strictly_positive` flags are computed on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector<T> {
    entries: Vec<T>,
}

impl<T: Real> WeightVector<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("weight tuple must be nonempty".into()));
        }
        if let Some(bad) = entries.iter().find(|w| !w.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "weights must be finite, got {bad}"
            )));
        }
        let sum = entries.iter().fold(T::zero(), |acc, &w| acc + w);
        let gate = T::of(WEIGHT_SUM_TOL)
            .max(T::epsilon() * T::of(4.0) * T::of_usize(entries.len()));
        if (sum - T::one()).abs() > gate {
            return Err(Error::InvalidInput(format!(
                "weights must sum to 1 within {gate}, got {sum}"
            )));
        }
        let entries = entries.into_iter().map(|w| w / sum).collect();
        Ok(Self { entries })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("weight tuple must be nonempty".into()));
        }
        let w = T::one() / T::of_usize(n);
        Ok(Self {
            entries: vec![w; n],
        })
    }

    /// Builds from entries that are already normalized (permutations and
    /// zero-padded extensions of existing vectors). Skips renormalization
    /// so bit-exact round trips are possible.
    pub(crate) fn from_normalized(entries: Vec<T>) -> Self {
        debug_assert!(!entries.is_empty());
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> T {
        self.entries[i]
    }

    /// All entries `>= 0`.
    pub fn is_nonneg(&self) -> bool {
        self.entries.iter().all(|&w| w >= T::zero())
    }

    /// All entries `> 0`.
    pub fn is_strictly_positive(&self) -> bool {
        self.entries.iter().all(|&w| w > T::zero())
    }

    pub fn min_entry(&self) -> T {
        self.entries.iter().fold(T::infinity(), |m, &w| m.min(w))
    }

    pub fn max_entry(&self) -> T {
        self.entries
            .iter()
            .fold(T::neg_infinity(), |m, &w| m.max(w))
    }

    /// Running sums `s_i = w_1 + ... + w_i` for `i = 1..n`.
    pub fn prefix_sums(&self) -> Vec<T> {
        prefix_sums(&self.entries)
    }
}

/// Running sums of a slice, left to right.
pub fn prefix_sums<T: Real>(values: &[T]) -> Vec<T> {
    let mut acc = T::zero();
    values
        .iter()
        .map(|&v| {
            acc = acc + v;
            acc
        })
        .collect()
}

/// Running sums of a slice, right to left: element `i` is `v_i + ... + v_n`.
pub fn suffix_sums<T: Real>(values: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); values.len()];
    let mut acc = T::zero();
    for (i, &v) in values.iter().enumerate().rev() {
        acc = acc + v;
        out[i] = acc;
    }
    out
}
