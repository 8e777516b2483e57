//! Increasing rearrangement of a point tuple with weights carried along.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::weights::WeightVector;

/// The increasing rearrangement of `x` together with both weight tuples
/// permuted by the *same* permutation.
///
/// Ties in `x` keep their original relative order (stable sort), so the
/// permutation is reproducible; every bound computed from a rearrangement
/// is tie-order-invariant because tied points have equal `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rearrangement<T> {
    permutation: Vec<usize>,
    x: Vec<T>,
    p: WeightVector<T>,
    q: WeightVector<T>,
}

/// Stable sorts `x` into nondecreasing order and applies the identical
/// permutation to `p` and `q`.
pub fn increasing_rearrangement<T: Real>(
    x: &[T],
    p: &WeightVector<T>,
    q: &WeightVector<T>,
) -> Result<Rearrangement<T>> {
    if x.len() != p.len() || x.len() != q.len() {
        return Err(Error::InvalidInput(format!(
            "length mismatch: |x| = {}, |p| = {}, |q| = {}",
            x.len(),
            p.len(),
            q.len()
        )));
    }
    if let Some(bad) = x.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "points must be finite, got {bad}"
        )));
    }
    let mut permutation: Vec<usize> = (0..x.len()).collect();
    permutation.sort_by(|&i, &j| x[i].partial_cmp(&x[j]).expect("finite points compare"));
    let sorted_x: Vec<T> = permutation.iter().map(|&i| x[i]).collect();
    let perm_p: Vec<T> = permutation.iter().map(|&i| p.get(i)).collect();
    let perm_q: Vec<T> = permutation.iter().map(|&i| q.get(i)).collect();
    Ok(Rearrangement {
        permutation,
        x: sorted_x,
        p: WeightVector::from_normalized(perm_p),
        q: WeightVector::from_normalized(perm_q),
    })
}

impl<T: Real> Rearrangement<T> {
    /// `permutation()[k]` is the original index of the k-th smallest point.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn x(&self) -> &[T] {
        &self.x
    }

    pub fn p(&self) -> &WeightVector<T> {
        &self.p
    }

    pub fn q(&self) -> &WeightVector<T> {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.permutation.iter().enumerate().all(|(k, &i)| k == i)
    }

    /// Applies the inverse permutation, recovering the original `(x, p, q)`
    /// bit for bit.
    pub fn invert(&self) -> (Vec<T>, Vec<T>, Vec<T>) {
        let n = self.x.len();
        let mut x = vec![T::zero(); n];
        let mut p = vec![T::zero(); n];
        let mut q = vec![T::zero(); n];
        for (k, &orig) in self.permutation.iter().enumerate() {
            x[orig] = self.x[k];
            p[orig] = self.p.get(k);
            q[orig] = self.q.get(k);
        }
        (x, p, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wv(entries: &[f64]) -> WeightVector<f64> {
        WeightVector::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn sorts_and_permutes_both_weight_tuples() {
        let p = wv(&[0.2, 0.3, 0.5]);
        let q = wv(&[0.5, 0.25, 0.25]);
        let r = increasing_rearrangement(&[2.0, 0.0, 1.0], &p, &q).unwrap();
        assert_eq!(r.x(), &[0.0, 1.0, 2.0]);
        assert_eq!(r.p().entries(), &[0.3, 0.5, 0.2]);
        assert_eq!(r.q().entries(), &[0.25, 0.25, 0.5]);
        assert_eq!(r.permutation(), &[1, 2, 0]);
    }

    #[test]
    fn sorted_input_gives_identity_permutation() {
        let p = wv(&[0.5, 0.5]);
        let r = increasing_rearrangement(&[0.0, 1.0], &p, &p).unwrap();
        assert!(r.is_identity());
    }

    #[test]
    fn ties_keep_original_order() {
        let p = wv(&[0.1, 0.2, 0.7]);
        let q = wv(&[1.0 / 3.0; 3]);
        let r = increasing_rearrangement(&[1.0, 1.0, 0.0], &p, &q).unwrap();
        assert_eq!(r.x(), &[0.0, 1.0, 1.0]);
        // The two tied 1.0s keep their original relative order: indices 0, 1.
        assert_eq!(r.permutation(), &[2, 0, 1]);
        assert_eq!(r.p().entries(), &[0.7, 0.1, 0.2]);
    }

    #[test]
    fn invert_recovers_inputs_exactly() {
        let p = wv(&[0.2, -0.1, 0.4, 0.5]);
        let q = wv(&[0.3, 0.3, 0.2, 0.2]);
        let x = [0.7, 0.1, 0.9, 0.1];
        let r = increasing_rearrangement(&x, &p, &q).unwrap();
        let (xr, pr, qr) = r.invert();
        assert_eq!(xr, x.to_vec());
        assert_eq!(pr, p.entries().to_vec());
        assert_eq!(qr, q.entries().to_vec());
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let p = wv(&[0.5, 0.5]);
        let q = wv(&[1.0 / 3.0; 3]);
        assert!(increasing_rearrangement(&[0.0, 1.0], &p, &q).is_err());
    }
}
