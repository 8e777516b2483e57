//! The classical normalized-Jensen sandwich and its two-point special case.
//!
//! With `m = min p_i/q_i` and `M = max p_i/q_i`, the functional satisfies
//! `M J(f,x,q) >= J(f,x,p) >= m J(f,x,q)` whenever `p` is nonnegative and
//! `q` strictly positive. The two-point form replaces `q` by `(1/2, 1/2)`,
//! turning `J(f,x,q)` into half the endpoint chord gap.

use crate::error::{Error, Result};
use crate::func::FunctionSpec;
use crate::instance::{validate_instance, Instance, TheoremMode};
use crate::report::BoundReport;
use crate::scalar::Real;
use crate::tolerance::Tolerance;
use crate::weights::WeightVector;

/// Componentwise ratio extremes `m = min p_i/q_i`, `M = max p_i/q_i`,
/// together with every attaining index (0-based).
///
/// Attainment uses exact float equality against the computed extreme: the
/// ratios are computed once and compared as-is, which avoids false
/// interior-attainment claims.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicRatios<T> {
    pub m: T,
    pub big_m: T,
    pub argmin: Vec<usize>,
    pub argmax: Vec<usize>,
}

/// Computes the pointwise ratio extremes. Requires `q` strictly positive.
pub fn ratio_extremes<T: Real>(
    p: &WeightVector<T>,
    q: &WeightVector<T>,
) -> Result<ClassicRatios<T>> {
    if p.len() != q.len() {
        return Err(Error::InvalidInput(format!(
            "length mismatch: |p| = {}, |q| = {}",
            p.len(),
            q.len()
        )));
    }
    if let Some((i, &qi)) = q
        .entries()
        .iter()
        .enumerate()
        .find(|(_, &qi)| qi <= T::zero())
    {
        return Err(Error::Precondition(format!(
            "q_i > 0 fails at i={} (q = {qi})",
            i + 1
        )));
    }
    let ratios: Vec<T> = p
        .entries()
        .iter()
        .zip(q.entries())
        .map(|(&pi, &qi)| pi / qi)
        .collect();
    let m = ratios.iter().fold(T::infinity(), |acc, &r| acc.min(r));
    let big_m = ratios
        .iter()
        .fold(T::neg_infinity(), |acc, &r| acc.max(r));
    let argmin = ratios
        .iter()
        .enumerate()
        .filter(|(_, &r)| r == m)
        .map(|(i, _)| i)
        .collect();
    let argmax = ratios
        .iter()
        .enumerate()
        .filter(|(_, &r)| r == big_m)
        .map(|(i, _)| i)
        .collect();
    Ok(ClassicRatios {
        m,
        big_m,
        argmin,
        argmax,
    })
}

/// Three-term chain `M J(f,x,q) >= J(f,x,p) >= m J(f,x,q)`.
pub fn theorem1_bounds<T: Real>(
    inst: &Instance<T>,
    tol: &Tolerance<T>,
) -> Result<BoundReport<T>> {
    validate_instance(inst, TheoremMode::Theorem1).into_result()?;
    let ratios = ratio_extremes(inst.p(), inst.q())?;
    let j_p = inst.jensen_p()?;
    let j_q = inst.jensen_q()?;
    Ok(BoundReport::from_chain(
        "theorem1",
        vec![
            ("M·J(f,x,q)".into(), ratios.big_m * j_q),
            ("J(f,x,p)".into(), j_p),
            ("m·J(f,x,q)".into(), ratios.m * j_q),
        ],
        tol,
    ))
}

/// Two-point sandwich on `{a, b}` with weights `(p, 1-p)`:
///
/// `max{p,q}*G >= p f(a) + q f(b) - f(pa + qb) >= min{p,q}*G`
///
/// where `G = f(a) + f(b) - 2 f((a+b)/2)`. Term-by-term this equals
/// [`theorem1_bounds`] on the induced instance with `q = (1/2, 1/2)`.
pub fn two_point_bounds<T: Real>(
    f: &FunctionSpec<T>,
    a: T,
    b: T,
    p: T,
    tol: &Tolerance<T>,
) -> Result<BoundReport<T>> {
    if !(a < b) {
        return Err(Error::Precondition(format!(
            "two-point bounds need a < b, got a = {a}, b = {b}"
        )));
    }
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::Precondition(format!(
            "two-point weight must satisfy 0 < p < 1, got {p}"
        )));
    }
    let q = T::one() - p;
    let two = T::of(2.0);
    let gap2 = f.eval(a)? + f.eval(b)? - two * f.eval((a + b) / two)?;
    let j = p * f.eval(a)? + q * f.eval(b)? - f.eval(p * a + q * b)?;
    Ok(BoundReport::from_chain(
        "theorem5",
        vec![
            ("max{p,q}·[f(a)+f(b)-2f((a+b)/2)]".into(), p.max(q) * gap2),
            ("p*f(a)+q*f(b)-f(pa+qb)".into(), j),
            ("min{p,q}·[f(a)+f(b)-2f((a+b)/2)]".into(), p.min(q) * gap2),
        ],
        tol,
    ))
}
