//! Catalog of convex functions with closed-form values and derivatives.
//!
//! The catalog is closed: extending it means adding a variant with a value,
//! an analytic derivative, and (optionally) a known convexity modulus.
//! Keeping the derivative analytic is what makes the gradient-form checks
//! in [`crate::uniform`] exact rather than finite-difference approximations.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::modulus::ModulusSpec;
use crate::scalar::Real;

/// Shape of a catalog function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FunctionKind<T> {
    /// `x^2` on all of the reals.
    Square,
    /// `x^r` on `[0, inf)` with `r >= 1`.
    Power { exponent: T },
    /// `e^x` on all of the reals.
    Exp,
    /// `x ln x` on `(0, inf)`.
    XLogX,
    /// `|x|^r` on all of the reals with `r >= 2`.
    AbsPower { exponent: T },
}

/// Natural domain of a catalog function. The upper end is always open at
/// `+inf`; the lower end may be `-inf`, closed, or open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain<T> {
    pub lo: T,
    pub lo_open: bool,
}

impl<T: Real> Domain<T> {
    fn all() -> Self {
        Self {
            lo: T::neg_infinity(),
            lo_open: true,
        }
    }

    fn from_zero(open: bool) -> Self {
        Self {
            lo: T::zero(),
            lo_open: open,
        }
    }

    pub fn contains(&self, x: T) -> bool {
        x.is_finite() && if self.lo_open { x > self.lo } else { x >= self.lo }
    }

    /// Interior membership: endpoints are never interior.
    pub fn contains_in_interior(&self, x: T) -> bool {
        x.is_finite() && x > self.lo
    }

    pub fn contains_interval(&self, iv: &Interval<T>) -> bool {
        self.contains(iv.lower()) && self.contains(iv.upper())
    }
}

/// A convex function from the catalog together with its natural domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionSpec<T> {
    kind: FunctionKind<T>,
    domain: Domain<T>,
}

impl<T: Real> FunctionSpec<T> {
    pub fn square() -> Self {
        Self {
            kind: FunctionKind::Square,
            domain: Domain::all(),
        }
    }

    pub fn exp() -> Self {
        Self {
            kind: FunctionKind::Exp,
            domain: Domain::all(),
        }
    }

    pub fn xlogx() -> Self {
        Self {
            kind: FunctionKind::XLogX,
            domain: Domain::from_zero(true),
        }
    }

    pub fn power(exponent: T) -> Result<Self> {
        if !exponent.is_finite() || exponent < T::one() {
            return Err(Error::InvalidInput(format!(
                "power exponent must be finite and >= 1, got {exponent}"
            )));
        }
        Ok(Self {
            kind: FunctionKind::Power { exponent },
            domain: Domain::from_zero(false),
        })
    }

    pub fn abs_power(exponent: T) -> Result<Self> {
        if !exponent.is_finite() || exponent < T::of(2.0) {
            return Err(Error::InvalidInput(format!(
                "absolute-power exponent must be finite and >= 2, got {exponent}"
            )));
        }
        Ok(Self {
            kind: FunctionKind::AbsPower { exponent },
            domain: Domain::all(),
        })
    }

    pub fn kind(&self) -> FunctionKind<T> {
        self.kind
    }

    pub fn domain(&self) -> Domain<T> {
        self.domain
    }

    /// Short name used in reports, e.g. `power(3)`.
    pub fn name(&self) -> String {
        match self.kind {
            FunctionKind::Square => "square".to_string(),
            FunctionKind::Power { exponent } => format!("power({exponent})"),
            FunctionKind::Exp => "exp".to_string(),
            FunctionKind::XLogX => "xlogx".to_string(),
            FunctionKind::AbsPower { exponent } => format!("abspower({exponent})"),
        }
    }

    /// Evaluates the function. Errors when `x` lies outside the domain.
    pub fn eval(&self, x: T) -> Result<T> {
        if !self.domain.contains(x) {
            return Err(Error::Domain(format!(
                "{} is undefined at x = {x}",
                self.name()
            )));
        }
        Ok(match self.kind {
            FunctionKind::Square => x * x,
            FunctionKind::Power { exponent } => x.powf(exponent),
            FunctionKind::Exp => x.exp(),
            FunctionKind::XLogX => x * x.ln(),
            FunctionKind::AbsPower { exponent } => x.abs().powf(exponent),
        })
    }

    /// Whether the analytic derivative is available at `x` (interior of the
    /// domain only; a closed boundary such as `x = 0` for `power` is not
    /// interior).
    pub fn derivative_defined_at(&self, x: T) -> bool {
        self.domain.contains_in_interior(x)
    }

    /// Analytic derivative on the interior of the domain.
    pub fn derivative(&self, x: T) -> Result<T> {
        if !self.derivative_defined_at(x) {
            return Err(Error::Domain(format!(
                "derivative of {} is undefined at x = {x}",
                self.name()
            )));
        }
        Ok(match self.kind {
            FunctionKind::Square => T::of(2.0) * x,
            FunctionKind::Power { exponent } => exponent * x.powf(exponent - T::one()),
            FunctionKind::Exp => x.exp(),
            FunctionKind::XLogX => x.ln() + T::one(),
            FunctionKind::AbsPower { exponent } => {
                if x == T::zero() {
                    // r >= 2 makes |x|^r differentiable at 0 with slope 0.
                    T::zero()
                } else {
                    exponent * x.abs().powf(exponent - T::one()) * x.signum()
                }
            }
        })
    }

    /// Known quadratic convexity modulus on `iv`, when one exists: with
    /// `mu = min f''` over the interval, the function satisfies the
    /// chord-gap inequality with `Phi(d) = (mu/2) d^2`. Returns `None`
    /// when `mu = 0` (e.g. `abspower` across the origin).
    pub fn quadratic_modulus_on(&self, iv: &Interval<T>) -> Option<ModulusSpec<T>> {
        let two = T::of(2.0);
        let (a, b) = (iv.lower(), iv.upper());
        let mu = match self.kind {
            FunctionKind::Square => two,
            FunctionKind::Exp => a.exp(),
            FunctionKind::XLogX => T::one() / b,
            FunctionKind::Power { exponent } => {
                let r = exponent;
                if r == T::one() {
                    T::zero()
                } else if r >= two {
                    r * (r - T::one()) * a.powf(r - two)
                } else {
                    // 1 < r < 2: x^(r-2) is decreasing, so the minimum of
                    // f'' sits at the right endpoint.
                    r * (r - T::one()) * b.powf(r - two)
                }
            }
            FunctionKind::AbsPower { exponent } => {
                let r = exponent;
                if r == two {
                    two
                } else {
                    let min_abs = if a > T::zero() {
                        a
                    } else if b < T::zero() {
                        -b
                    } else {
                        T::zero()
                    };
                    r * (r - T::one()) * min_abs.powf(r - two)
                }
            }
        };
        if mu > T::zero() && mu.is_finite() {
            ModulusSpec::new(mu / two, two).ok()
        } else {
            None
        }
    }

    /// Known modulus on `iv`: the quadratic one when it exists, otherwise
    /// the quartic modulus `d^4 / 8` for `abspower(4)` (valid on any
    /// interval; see the certification tests).
    pub fn known_modulus_on(&self, iv: &Interval<T>) -> Option<ModulusSpec<T>> {
        if let Some(phi) = self.quadratic_modulus_on(iv) {
            return Some(phi);
        }
        if let FunctionKind::AbsPower { exponent } = self.kind {
            if exponent == T::of(4.0) {
                return ModulusSpec::new(T::of(0.125), T::of(4.0)).ok();
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eval_closed_forms() {
        let sq = FunctionSpec::<f64>::square();
        assert_eq!(sq.eval(0.5).unwrap(), 0.25);
        assert_eq!(sq.eval(0.0).unwrap(), 0.0);
        let xl = FunctionSpec::<f64>::xlogx();
        assert_eq!(xl.eval(1.0).unwrap(), 0.0);
        let e = FunctionSpec::<f64>::exp();
        assert_eq!(e.eval(0.0).unwrap(), 1.0);
        let p = FunctionSpec::<f64>::power(3.0).unwrap();
        assert_eq!(p.eval(2.0).unwrap(), 8.0);
        let ap = FunctionSpec::<f64>::abs_power(4.0).unwrap();
        assert_eq!(ap.eval(-0.5).unwrap(), 0.0625);
    }

    #[test]
    fn eval_rejects_points_outside_domain() {
        let p = FunctionSpec::<f64>::power(2.0).unwrap();
        assert!(matches!(p.eval(-1.0), Err(Error::Domain(_))));
        let xl = FunctionSpec::<f64>::xlogx();
        assert!(matches!(xl.eval(0.0), Err(Error::Domain(_))));
        assert!(xl.eval(f64::NAN).is_err());
    }

    #[test]
    fn derivative_closed_forms() {
        let sq = FunctionSpec::<f64>::square();
        assert_eq!(sq.derivative(0.5).unwrap(), 1.0);
        let e = FunctionSpec::<f64>::exp();
        assert_eq!(e.derivative(0.0).unwrap(), 1.0);
        let p = FunctionSpec::<f64>::power(3.0).unwrap();
        assert_eq!(p.derivative(2.0).unwrap(), 12.0);
        let xl = FunctionSpec::<f64>::xlogx();
        assert_relative_eq!(xl.derivative(1.0).unwrap(), 1.0);
        let ap = FunctionSpec::<f64>::abs_power(4.0).unwrap();
        assert_eq!(ap.derivative(0.0).unwrap(), 0.0);
        assert_eq!(ap.derivative(-1.0).unwrap(), -4.0);
    }

    #[test]
    fn derivative_rejects_boundary_points() {
        // x = 0 is a closed boundary of power's domain, not interior.
        let p = FunctionSpec::<f64>::power(3.0).unwrap();
        assert!(matches!(p.derivative(0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn constructor_parameter_validation() {
        assert!(FunctionSpec::<f64>::power(0.5).is_err());
        assert!(FunctionSpec::<f64>::power(f64::NAN).is_err());
        assert!(FunctionSpec::<f64>::abs_power(1.5).is_err());
        assert!(FunctionSpec::power(1.0f64).is_ok());
        assert!(FunctionSpec::abs_power(2.0f64).is_ok());
    }

    fn all_catalog_on(iv: &Interval<f64>) -> Vec<FunctionSpec<f64>> {
        vec![
            FunctionSpec::square(),
            FunctionSpec::power(3.0).unwrap(),
            FunctionSpec::power(1.5).unwrap(),
            FunctionSpec::exp(),
            FunctionSpec::xlogx(),
            FunctionSpec::abs_power(4.0).unwrap(),
        ]
        .into_iter()
        .filter(|f| f.domain().contains_interval(iv))
        .collect()
    }

    /// Convexity certificate: second-order divided differences on a grid
    /// are nonnegative for every catalog entry.
    #[test]
    fn second_divided_differences_nonnegative() {
        let iv = Interval::new(0.1f64, 1.9).unwrap();
        let grid = iv.linspace(41);
        for f in all_catalog_on(&iv) {
            for w in grid.windows(3) {
                let (x0, x1, x2) = (w[0], w[1], w[2]);
                let d01 = (f.eval(x1).unwrap() - f.eval(x0).unwrap()) / (x1 - x0);
                let d12 = (f.eval(x2).unwrap() - f.eval(x1).unwrap()) / (x2 - x1);
                let dd = (d12 - d01) / (x2 - x0);
                assert!(
                    dd >= -1e-12,
                    "{} has negative divided difference {dd} near {x1}",
                    f.name()
                );
            }
        }
    }

    #[test]
    fn quadratic_modulus_matches_min_second_derivative() {
        let iv = Interval::new(0.1f64, 1.1).unwrap();
        let e = FunctionSpec::exp();
        let phi = e.quadratic_modulus_on(&iv).unwrap();
        assert_relative_eq!(phi.coefficient(), 0.1f64.exp() / 2.0);
        let xl = FunctionSpec::xlogx();
        let phi = xl.quadratic_modulus_on(&iv).unwrap();
        assert_relative_eq!(phi.coefficient(), 1.0 / 2.2);
        let sym = Interval::new(-1.0f64, 1.0).unwrap();
        let ap = FunctionSpec::abs_power(4.0).unwrap();
        assert!(ap.quadratic_modulus_on(&sym).is_none());
        let quartic = ap.known_modulus_on(&sym).unwrap();
        assert_eq!(quartic.coefficient(), 0.125);
        assert_eq!(quartic.exponent(), 4.0);
    }
}
