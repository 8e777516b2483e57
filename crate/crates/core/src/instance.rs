//! Problem instances and theorem-mode admissibility checks.

use crate::error::{Error, Result};
use crate::func::FunctionSpec;
use crate::interval::Interval;
use crate::jensen::{barycenter, jensen_functional};
use crate::modulus::ModulusSpec;
use crate::rearrange::{increasing_rearrangement, Rearrangement};
use crate::scalar::Real;
use crate::tolerance::DEFAULT_ATOL;
use crate::weights::{prefix_sums, WeightVector};

/// Points, two weight tuples, a catalog function, an optional modulus, and
/// the ambient interval `[a, b]` shared by all of them.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<T> {
    x: Vec<T>,
    p: WeightVector<T>,
    q: WeightVector<T>,
    f: FunctionSpec<T>,
    phi: Option<ModulusSpec<T>>,
    interval: Interval<T>,
}

impl<T: Real> Instance<T> {
    pub fn new(
        x: Vec<T>,
        p: WeightVector<T>,
        q: WeightVector<T>,
        f: FunctionSpec<T>,
        phi: Option<ModulusSpec<T>>,
        interval: Interval<T>,
    ) -> Result<Self> {
        let n = x.len();
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "instances need n >= 2 points, got {n}"
            )));
        }
        if p.len() != n || q.len() != n {
            return Err(Error::InvalidInput(format!(
                "length mismatch: |x| = {n}, |p| = {}, |q| = {}",
                p.len(),
                q.len()
            )));
        }
        for (i, &xi) in x.iter().enumerate() {
            if !xi.is_finite() || !interval.contains(xi) {
                return Err(Error::Domain(format!(
                    "x[{}] = {xi} lies outside [{}, {}]",
                    i + 1,
                    interval.lower(),
                    interval.upper()
                )));
            }
        }
        if !f.domain().contains_interval(&interval) {
            return Err(Error::Domain(format!(
                "interval [{}, {}] is not contained in the domain of {}",
                interval.lower(),
                interval.upper(),
                f.name()
            )));
        }
        Ok(Self {
            x,
            p,
            q,
            f,
            phi,
            interval,
        })
    }

    pub fn n(&self) -> usize {
        self.x.len()
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

    pub fn f(&self) -> &FunctionSpec<T> {
        &self.f
    }

    pub fn phi(&self) -> Option<&ModulusSpec<T>> {
        self.phi.as_ref()
    }

    /// The modulus, or a precondition error naming what is missing.
    pub fn require_phi(&self) -> Result<&ModulusSpec<T>> {
        self.phi.as_ref().ok_or_else(|| {
            Error::Precondition("this operation needs a modulus (phi) on the instance".into())
        })
    }

    pub fn interval(&self) -> &Interval<T> {
        &self.interval
    }

    pub fn rearranged(&self) -> Rearrangement<T> {
        increasing_rearrangement(&self.x, &self.p, &self.q)
            .expect("instance invariants guarantee rearrangeability")
    }

    pub fn jensen_p(&self) -> Result<T> {
        jensen_functional(&self.f, &self.x, &self.p)
    }

    pub fn jensen_q(&self) -> Result<T> {
        jensen_functional(&self.f, &self.x, &self.q)
    }

    pub fn barycenter_p(&self) -> T {
        barycenter(&self.x, &self.p).expect("lengths checked at construction")
    }

    pub fn barycenter_q(&self) -> T {
        barycenter(&self.x, &self.q).expect("lengths checked at construction")
    }

    /// Same instance with `phi` replaced.
    pub fn with_phi(&self, phi: Option<ModulusSpec<T>>) -> Self {
        let mut out = self.clone();
        out.phi = phi;
        out
    }
}

/// Which theorem's preconditions to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremMode {
    /// Classical sandwich: `p` nonnegative, `q` strictly positive.
    Theorem1,
    /// Prefix-ratio sandwich: rearranged `p` prefix sums in `[0, 1]`,
    /// rearranged `q` prefix sums strictly inside `(0, 1)` at interior
    /// indices.
    Theorem2,
    /// Sorted-chain refinement: `p` nonnegative and a modulus present.
    Theorem3,
    /// Gradient-route refinements: Theorem 1 conditions plus a modulus.
    Theorem7,
    /// Merged-tuple refinement: Theorem 7 conditions plus `x` nondecreasing.
    Theorem8,
}

impl TheoremMode {
    pub fn name(&self) -> &'static str {
        match self {
            TheoremMode::Theorem1 => "theorem1",
            TheoremMode::Theorem2 => "theorem2",
            TheoremMode::Theorem3 => "theorem3",
            TheoremMode::Theorem7 => "theorem7",
            TheoremMode::Theorem8 => "theorem8",
        }
    }
}

/// Outcome of an admissibility check. Violations are data, not errors.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub mode: TheoremMode,
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }

    /// Turns an inadmissible report into a precondition error.
    pub fn into_result(self) -> Result<()> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "{} preconditions: {}",
                self.mode.name(),
                self.violations.join("; ")
            )))
        }
    }
}

/// Lists every violated precondition of `inst` for the requested theorem
/// mode; an empty list means the instance is admissible.
pub fn validate_instance<T: Real>(inst: &Instance<T>, mode: TheoremMode) -> ValidationReport {
    let mut violations = Vec::new();
    match mode {
        TheoremMode::Theorem1 => {
            check_p_nonneg(inst, &mut violations);
            check_q_positive(inst, &mut violations);
        }
        TheoremMode::Theorem2 => {
            check_prefix_conditions(inst, &mut violations);
        }
        TheoremMode::Theorem3 => {
            check_p_nonneg(inst, &mut violations);
            check_phi_present(inst, &mut violations);
        }
        TheoremMode::Theorem7 => {
            check_p_nonneg(inst, &mut violations);
            check_q_positive(inst, &mut violations);
            check_phi_present(inst, &mut violations);
        }
        TheoremMode::Theorem8 => {
            check_p_nonneg(inst, &mut violations);
            check_q_positive(inst, &mut violations);
            check_phi_present(inst, &mut violations);
            check_x_sorted(inst, &mut violations);
        }
    }
    ValidationReport { mode, violations }
}

fn check_p_nonneg<T: Real>(inst: &Instance<T>, violations: &mut Vec<String>) {
    for (i, &pi) in inst.p().entries().iter().enumerate() {
        if pi < T::zero() {
            violations.push(format!("p_i >= 0 fails at i={} (p = {pi})", i + 1));
        }
    }
}

fn check_q_positive<T: Real>(inst: &Instance<T>, violations: &mut Vec<String>) {
    for (i, &qi) in inst.q().entries().iter().enumerate() {
        if qi <= T::zero() {
            violations.push(format!("q_i > 0 fails at i={} (q = {qi})", i + 1));
        }
    }
}

fn check_phi_present<T: Real>(inst: &Instance<T>, violations: &mut Vec<String>) {
    if inst.phi().is_none() {
        violations.push("modulus (phi) is required but absent".into());
    }
}

fn check_x_sorted<T: Real>(inst: &Instance<T>, violations: &mut Vec<String>) {
    for w in inst.x().windows(2) {
        if w[0] > w[1] {
            violations.push(format!(
                "x must be nondecreasing, found {} > {}",
                w[0], w[1]
            ));
            break;
        }
    }
}

fn check_prefix_conditions<T: Real>(inst: &Instance<T>, violations: &mut Vec<String>) {
    let r = inst.rearranged();
    let n = r.len();
    let p_prefix = prefix_sums(r.p().entries());
    let q_prefix = prefix_sums(r.q().entries());
    let atol = T::of(DEFAULT_ATOL);
    for (i, &s) in p_prefix.iter().enumerate() {
        if s < -atol || s > T::one() + atol {
            violations.push(format!("p prefix sum {s} at i={} outside [0, 1]", i + 1));
        }
    }
    for (i, &s) in q_prefix.iter().enumerate().take(n - 1) {
        if !(s > T::zero() && s < T::one()) {
            violations.push(format!(
                "q prefix sum {s} at i={} not strictly inside (0, 1)",
                i + 1
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wv(entries: &[f64]) -> WeightVector<f64> {
        WeightVector::new(entries.to_vec()).unwrap()
    }

    fn square_instance(x: &[f64], p: &[f64], q: &[f64]) -> Instance<f64> {
        let lo = x.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let iv = Interval::new(lo, hi.max(lo + 1.0)).unwrap();
        Instance::new(x.to_vec(), wv(p), wv(q), FunctionSpec::square(), None, iv).unwrap()
    }

    #[test]
    fn uniform_case_is_admissible_for_theorem1() {
        let inst = square_instance(&[0.0, 1.0], &[0.5, 0.5], &[0.5, 0.5]);
        let report = validate_instance(&inst, TheoremMode::Theorem1);
        assert!(report.is_admissible());
        assert!(report.into_result().is_ok());
    }

    #[test]
    fn zero_q_entry_is_flagged_for_theorem1() {
        let inst = square_instance(&[0.0, 1.0], &[0.5, 0.5], &[1.0, 0.0]);
        let report = validate_instance(&inst, TheoremMode::Theorem1);
        assert_eq!(report.violations.len(), 1);
        assert!(report.violations[0].contains("q_i > 0 fails at i=2"));
        assert!(report.into_result().is_err());
    }

    #[test]
    fn out_of_range_prefix_sum_is_flagged_for_theorem2() {
        // Sorted x keeps p in file order, so the prefix sums are (1.2, 1).
        let inst = square_instance(&[0.0, 1.0], &[1.2, -0.2], &[0.5, 0.5]);
        let report = validate_instance(&inst, TheoremMode::Theorem2);
        assert_eq!(report.violations.len(), 1);
        assert!(report.violations[0].contains("outside [0, 1]"));
        assert!(report.violations[0].contains("1.2"));
    }

    #[test]
    fn degenerate_single_point_is_rejected() {
        let iv = Interval::new(0.0f64, 1.0).unwrap();
        let res = Instance::new(
            vec![0.5],
            wv(&[1.0]),
            wv(&[1.0]),
            FunctionSpec::square(),
            None,
            iv,
        );
        assert!(res.is_err());
    }

    #[test]
    fn points_must_sit_inside_the_interval() {
        let iv = Interval::new(0.0f64, 1.0).unwrap();
        let res = Instance::new(
            vec![0.5, 1.5],
            wv(&[0.5, 0.5]),
            wv(&[0.5, 0.5]),
            FunctionSpec::square(),
            None,
            iv,
        );
        assert!(matches!(res, Err(Error::Domain(_))));
    }

    #[test]
    fn interval_must_sit_inside_the_function_domain() {
        let iv = Interval::new(-1.0f64, 1.0).unwrap();
        let res = Instance::new(
            vec![0.5, 0.9],
            wv(&[0.5, 0.5]),
            wv(&[0.5, 0.5]),
            FunctionSpec::power(2.0).unwrap(),
            None,
            iv,
        );
        assert!(matches!(res, Err(Error::Domain(_))));
    }

    #[test]
    fn theorem8_mode_requires_sorted_points_and_phi() {
        let inst = square_instance(&[1.0, 0.0], &[0.5, 0.5], &[0.5, 0.5]);
        let report = validate_instance(&inst, TheoremMode::Theorem8);
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("nondecreasing")));
        assert!(report.violations.iter().any(|v| v.contains("phi")));
    }
}
