//! The Jensen functional `J_n(f, x, w) = sum w_i f(x_i) - f(sum w_i x_i)`
//! and the weighted barycenter it pivots on.

use crate::error::{Error, Result};
use crate::func::FunctionSpec;
use crate::scalar::Real;
use crate::weights::WeightVector;

/// Weighted average `sum w_i x_i`.
pub fn barycenter<T: Real>(x: &[T], w: &WeightVector<T>) -> Result<T> {
    if x.len() != w.len() {
        return Err(Error::InvalidInput(format!(
            "length mismatch: |x| = {}, |w| = {}",
            x.len(),
            w.len()
        )));
    }
    Ok(x.iter()
        .zip(w.entries())
        .fold(T::zero(), |acc, (&xi, &wi)| acc + wi * xi))
}

/// Evaluates the Jensen functional. For nonnegative normalized `w` and
/// convex `f` the value is nonnegative up to rounding; for signed `w` the
/// barycenter may leave the domain of `f`, which is a domain error.
pub fn jensen_functional<T: Real>(
    f: &FunctionSpec<T>,
    x: &[T],
    w: &WeightVector<T>,
) -> Result<T> {
    let bary = barycenter(x, w)?;
    let mut mean_f = T::zero();
    for (&xi, &wi) in x.iter().zip(w.entries()) {
        mean_f = mean_f + wi * f.eval(xi)?;
    }
    let f_bary = f.eval(bary).map_err(|_| {
        Error::Domain(format!(
            "barycenter {bary} lies outside the domain of {}",
            f.name()
        ))
    })?;
    Ok(mean_f - f_bary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn wv(entries: &[f64]) -> WeightVector<f64> {
        WeightVector::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn barycenter_closed_forms() {
        assert_eq!(barycenter(&[0.0, 1.0], &wv(&[0.5, 0.5])).unwrap(), 0.5);
        assert_eq!(barycenter(&[0.0, 1.0], &wv(&[0.25, 0.75])).unwrap(), 0.75);
        assert_relative_eq!(
            barycenter(&[0.0, 1.0, 2.0], &wv(&[0.4, 0.1, 0.5])).unwrap(),
            1.1,
            max_relative = 1e-15
        );
    }

    #[test]
    fn square_matches_variance_identity() {
        let sq = FunctionSpec::<f64>::square();
        let j = jensen_functional(&sq, &[0.0, 1.0], &wv(&[0.5, 0.5])).unwrap();
        assert_relative_eq!(j, 0.25, max_relative = 1e-12);
        let u = wv(&[1.0 / 3.0; 3]);
        let j = jensen_functional(&sq, &[0.0, 1.0, 2.0], &u).unwrap();
        assert_relative_eq!(j, 2.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn point_mass_gives_zero() {
        for f in [
            FunctionSpec::<f64>::square(),
            FunctionSpec::exp(),
            FunctionSpec::power(3.0).unwrap(),
        ] {
            let j = jensen_functional(&f, &[0.3, 0.9], &wv(&[1.0, 0.0])).unwrap();
            assert_eq!(j, 0.0);
        }
    }

    #[test]
    fn signed_weights_can_push_barycenter_out_of_domain() {
        let xl = FunctionSpec::<f64>::xlogx();
        // 2*1 - 1*2 = 0, outside (0, inf).
        let w = wv(&[2.0, -1.0]);
        assert!(matches!(
            jensen_functional(&xl, &[1.0, 2.0], &w),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let sq = FunctionSpec::<f64>::square();
        assert!(jensen_functional(&sq, &[0.0], &wv(&[0.5, 0.5])).is_err());
    }
}
