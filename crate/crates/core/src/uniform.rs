//! Uniform-convexity certification and the refinements it unlocks.
//!
//! A function `f` is Phi-uniformly convex on `[a, b]` when
//!
//! ```text
//! t f(x) + (1-t) f(y) >= f(tx + (1-t)y) + t(1-t) Phi(|x - y|)
//! ```
//!
//! for all `x, y` in the interval and `t` in `[0, 1]`. Certification here
//! is a grid check of that inequality: a necessary-condition sweep, not a
//! proof. The catalog pairs used by the test suites also carry analytic
//! backing (`square` with `d^2` is an identity; every `min f'' / 2`
//! quadratic modulus follows from strong convexity), so a grid pass on
//! those pairs is corroboration rather than the only evidence.
//!
//! Once a pair `(f, Phi)` is certified, nonnegative `Phi`-terms fit inside
//! the sandwich gaps; each `thm*` operation below verifies one of those
//! chained lower bounds and reports the slack.

use crate::classic::ratio_extremes;
use crate::error::{Error, Result};
use crate::func::FunctionSpec;
use crate::instance::{validate_instance, Instance, TheoremMode};
use crate::interval::Interval;
use crate::modulus::ModulusSpec;
use crate::report::RefinementTerms;
use crate::scalar::{max_abs, Real};
use crate::tolerance::Tolerance;

/// Grid used to discretize the quantifiers of the defining inequality.
///
/// `t_points` must be odd so the grid over `[0, 1]` contains 0, 1/2 and 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CertGrid<T> {
    pub x_points: usize,
    pub y_points: usize,
    pub t_points: usize,
    pub margin: Tolerance<T>,
}

impl<T: Real> CertGrid<T> {
    pub fn new(
        x_points: usize,
        y_points: usize,
        t_points: usize,
        margin: Tolerance<T>,
    ) -> Result<Self> {
        if x_points < 3 || y_points < 3 || t_points < 3 {
            return Err(Error::InvalidInput(format!(
                "certification grid needs >= 3 points per axis, got {x_points}x{y_points}x{t_points}"
            )));
        }
        if t_points.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "t-grid must be odd so it contains 0, 1/2 and 1, got {t_points} points"
            )));
        }
        Ok(Self {
            x_points,
            y_points,
            t_points,
            margin,
        })
    }

    fn t_grid(&self) -> Vec<T> {
        let n = self.t_points;
        let step = T::one() / T::of_usize(n - 1);
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    T::one()
                } else {
                    T::of_usize(i) * step
                }
            })
            .collect()
    }
}

impl<T: Real> Default for CertGrid<T> {
    /// 64 x 64 x 17 points with the default tolerance.
    fn default() -> Self {
        Self {
            x_points: 64,
            y_points: 64,
            t_points: 17,
            margin: Tolerance::default(),
        }
    }
}

/// Outcome of a grid certification, with enough context to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<T> {
    pub passed: bool,
    pub worst_slack: T,
    /// `(x, y, t)` attaining the worst slack (first encountered).
    pub worst_point: (T, T, T),
    pub scale: T,
    pub gate: T,
    pub grid: CertGrid<T>,
    pub interval: Interval<T>,
}

/// Checks the defining inequality of Phi-uniform convexity on the full
/// `(x, y, t)` grid. Failure is a certificate outcome, not an error.
pub fn certify_uniform_convexity<T: Real>(
    f: &FunctionSpec<T>,
    phi: &ModulusSpec<T>,
    interval: &Interval<T>,
    grid: &CertGrid<T>,
) -> Result<Certificate<T>> {
    if !f.domain().contains_interval(interval) {
        return Err(Error::Domain(format!(
            "interval [{}, {}] is not contained in the domain of {}",
            interval.lower(),
            interval.upper(),
            f.name()
        )));
    }
    let xs = interval.linspace(grid.x_points);
    let ys = interval.linspace(grid.y_points);
    let ts = grid.t_grid();
    let fxs: Vec<T> = xs.iter().map(|&x| f.eval(x)).collect::<Result<_>>()?;
    let fys: Vec<T> = ys.iter().map(|&y| f.eval(y)).collect::<Result<_>>()?;

    let mut worst_slack = T::infinity();
    let mut worst_point = (xs[0], ys[0], ts[0]);
    let mut scale = T::zero();
    for (x, fx) in xs.iter().zip(&fxs) {
        for (y, fy) in ys.iter().zip(&fys) {
            let phi_xy = phi.eval((*x - *y).abs())?;
            for &t in &ts {
                let s = T::one() - t;
                let mix = t * *fx + s * *fy;
                let f_conv = f.eval(t * *x + s * *y)?;
                let phi_term = t * s * phi_xy;
                let slack = mix - f_conv - phi_term;
                scale = scale.max(mix.abs()).max(f_conv.abs()).max(phi_term.abs());
                if slack < worst_slack {
                    worst_slack = slack;
                    worst_point = (*x, *y, t);
                }
            }
        }
    }
    let gate = grid.margin.gate(scale);
    Ok(Certificate {
        passed: worst_slack >= -gate,
        worst_slack,
        worst_point,
        scale,
        gate,
        grid: grid.clone(),
        interval: *interval,
    })
}

/// Largest coefficient `c` such that `Phi(d) = c d^r` passes certification
/// on this grid: the infimum over grid cells (`x != y`, `t` interior) of
/// the chord gap divided by `t(1-t)|x-y|^r`.
pub fn estimate_modulus_coefficient<T: Real>(
    f: &FunctionSpec<T>,
    exponent: T,
    interval: &Interval<T>,
    grid: &CertGrid<T>,
) -> Result<T> {
    if !(exponent >= T::of(2.0)) {
        return Err(Error::InvalidInput(format!(
            "modulus exponent must be >= 2, got {exponent}"
        )));
    }
    if !f.domain().contains_interval(interval) {
        return Err(Error::Domain(format!(
            "interval [{}, {}] is not contained in the domain of {}",
            interval.lower(),
            interval.upper(),
            f.name()
        )));
    }
    let xs = interval.linspace(grid.x_points);
    let ys = interval.linspace(grid.y_points);
    let ts = grid.t_grid();
    let fxs: Vec<T> = xs.iter().map(|&x| f.eval(x)).collect::<Result<_>>()?;
    let fys: Vec<T> = ys.iter().map(|&y| f.eval(y)).collect::<Result<_>>()?;

    let mut inf = T::infinity();
    for (x, fx) in xs.iter().zip(&fxs) {
        for (y, fy) in ys.iter().zip(&fys) {
            if x == y {
                continue;
            }
            let dist_pow = (*x - *y).abs().powf(exponent);
            for &t in ts.iter().take(ts.len() - 1).skip(1) {
                let s = T::one() - t;
                let num = t * *fx + s * *fy - f.eval(t * *x + s * *y)?;
                let ratio = num / (t * s * dist_pow);
                inf = inf.min(ratio);
            }
        }
    }
    if !inf.is_finite() {
        return Err(Error::InvalidInput(
            "no admissible grid cells (empty grid)".into(),
        ));
    }
    Ok(inf)
}

/// Outcome of the gradient-form check
/// `f(y) - f(x) >= f'(x)(y - x) + Phi(|y - x|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientCertificate<T> {
    pub passed: bool,
    pub worst_slack: T,
    /// `(x, y)` attaining the worst slack.
    pub worst_point: (T, T),
    pub scale: T,
    pub gate: T,
}

/// Grid check of the gradient-form inequality. Grid points where the
/// derivative is undefined (a closed domain boundary such as `x = 0` for
/// `power`) are skipped on the `x` axis.
pub fn gradient_inequality_check<T: Real>(
    f: &FunctionSpec<T>,
    phi: &ModulusSpec<T>,
    interval: &Interval<T>,
    grid: &CertGrid<T>,
) -> Result<GradientCertificate<T>> {
    if !f.domain().contains_interval(interval) {
        return Err(Error::Domain(format!(
            "interval [{}, {}] is not contained in the domain of {}",
            interval.lower(),
            interval.upper(),
            f.name()
        )));
    }
    let xs: Vec<T> = interval
        .linspace(grid.x_points)
        .into_iter()
        .filter(|&x| f.derivative_defined_at(x))
        .collect();
    if xs.is_empty() {
        return Err(Error::InvalidInput(
            "no grid points with a defined derivative".into(),
        ));
    }
    let ys = interval.linspace(grid.y_points);
    let fys: Vec<T> = ys.iter().map(|&y| f.eval(y)).collect::<Result<_>>()?;

    let mut worst_slack = T::infinity();
    let mut worst_point = (xs[0], ys[0]);
    let mut scale = T::zero();
    for &x in &xs {
        let fx = f.eval(x)?;
        let dfx = f.derivative(x)?;
        for (y, fy) in ys.iter().zip(&fys) {
            let linear = dfx * (*y - x);
            let phi_term = phi.eval((*y - x).abs())?;
            let slack = *fy - fx - linear - phi_term;
            scale = scale
                .max(fy.abs())
                .max(fx.abs())
                .max(linear.abs())
                .max(phi_term.abs());
            if slack < worst_slack {
                worst_slack = slack;
                worst_point = (x, *y);
            }
        }
    }
    let gate = grid.margin.gate(scale);
    Ok(GradientCertificate {
        passed: worst_slack >= -gate,
        worst_slack,
        worst_point,
        scale,
        gate,
    })
}

/// Certification policy for refinement operations.
///
/// Campaigns that certify a catalog pair once up front pass `Skip` to the
/// per-instance calls; everything else should leave the default on.
#[derive(Debug, Clone, PartialEq)]
pub enum Certify<T> {
    /// Certify on the default grid before running.
    Default,
    /// Certify on the given grid before running.
    Grid(CertGrid<T>),
    /// Trust the caller; do not certify.
    Skip,
}

fn ensure_certified<T: Real>(
    f: &FunctionSpec<T>,
    phi: &ModulusSpec<T>,
    interval: &Interval<T>,
    certify: &Certify<T>,
) -> Result<()> {
    let grid = match certify {
        Certify::Skip => return Ok(()),
        Certify::Default => CertGrid::default(),
        Certify::Grid(g) => g.clone(),
    };
    let cert = certify_uniform_convexity(f, phi, interval, &grid)?;
    if cert.passed {
        Ok(())
    } else {
        let (x, y, t) = cert.worst_point;
        Err(Error::Uncertified {
            pair: format!("{} with {}", f.name(), phi.name()),
            worst_slack: cert.worst_slack.to_f64().unwrap_or(f64::NAN),
            x: x.to_f64().unwrap_or(f64::NAN),
            y: y.to_f64().unwrap_or(f64::NAN),
            t: t.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Lower-bounds the Jensen gap by the weighted modulus spread around the
/// barycenter: `J(f,x,p) >= sum p_i Phi(|x_i - xbar_p|)`.
pub fn eq32_lower_bound<T: Real>(
    inst: &Instance<T>,
    tol: &Tolerance<T>,
    certify: &Certify<T>,
) -> Result<RefinementTerms<T>> {
    if !inst.p().is_nonneg() {
        return Err(Error::Precondition(
            "this bound needs p nonnegative".into(),
        ));
    }
    let phi = inst.require_phi()?;
    ensure_certified(inst.f(), phi, inst.interval(), certify)?;
    let gap = inst.jensen_p()?;
    let bary = inst.barycenter_p();
    let mut spread = T::zero();
    for (&xi, &pi) in inst.x().iter().zip(inst.p().entries()) {
        spread = spread + pi * phi.eval((xi - bary).abs())?;
    }
    Ok(RefinementTerms::build(
        "eq32",
        "J(f,x,p)",
        gap,
        vec![("Σp_i·Φ(|x_i−x̄_p|)".into(), spread)],
        tol,
    ))
}

/// Lower-bounds the Jensen gap by the chain of consecutive-pair modulus
/// terms on the sorted points:
/// `J(f,x,p) >= sum_k p_(k) p_(k+1) Phi(x_(k+1) - x_(k))`.
pub fn sy_chain_bound<T: Real>(
    inst: &Instance<T>,
    tol: &Tolerance<T>,
    certify: &Certify<T>,
) -> Result<RefinementTerms<T>> {
    validate_instance(inst, TheoremMode::Theorem3).into_result()?;
    let phi = inst.require_phi()?;
    ensure_certified(inst.f(), phi, inst.interval(), certify)?;
    let r = inst.rearranged();
    let gap = inst.jensen_p()?;
    let mut summands = Vec::with_capacity(r.len() - 1);
    for k in 0..r.len() - 1 {
        let value = r.p().get(k) * r.p().get(k + 1) * phi.eval(r.x()[k + 1] - r.x()[k])?;
        summands.push((
            format!("p̄{}·p̄{}·Φ(x({})−x({}))", k + 1, k + 2, k + 2, k + 1),
            value,
        ));
    }
    Ok(RefinementTerms::build(
        "theorem3",
        "J(f,x,p)",
        gap,
        summands,
        tol,
    ))
}

/// Lower refinement of the classical sandwich gap:
/// `J(p) - m J(q) >= m Phi(|xbar_q - xbar_p|)
///                   + sum (p_i - m q_i) Phi(|x_i - xbar_p|)`.
pub fn thm7_lower_refinement<T: Real>(
    inst: &Instance<T>,
    tol: &Tolerance<T>,
    certify: &Certify<T>,
) -> Result<RefinementTerms<T>> {
    validate_instance(inst, TheoremMode::Theorem7).into_result()?;
    let phi = inst.require_phi()?;
    ensure_certified(inst.f(), phi, inst.interval(), certify)?;
    let m = ratio_extremes(inst.p(), inst.q())?.m;
    let j_p = inst.jensen_p()?;
    let j_q = inst.jensen_q()?;
    let bary_p = inst.barycenter_p();
    let bary_q = inst.barycenter_q();
    let gap = j_p - m * j_q;
    let drift = m * phi.eval((bary_q - bary_p).abs())?;
    let mut spread = T::zero();
    for ((&xi, &pi), &qi) in inst
        .x()
        .iter()
        .zip(inst.p().entries())
        .zip(inst.q().entries())
    {
        spread = spread + (pi - m * qi) * phi.eval((xi - bary_p).abs())?;
    }
    Ok(RefinementTerms::build(
        "theorem7-lower",
        "J(f,x,p)−m·J(f,x,q)",
        gap,
        vec![
            ("m·Φ(|x̄_q−x̄_p|)".into(), drift),
            ("Σ(p_i−m·q_i)·Φ(|x_i−x̄_p|)".into(), spread),
        ],
        tol,
    ))
}

fn thm7_upper_parts<T: Real>(
    inst: &Instance<T>,
    certify: &Certify<T>,
) -> Result<(T, T, T, T, T)> {
    validate_instance(inst, TheoremMode::Theorem7).into_result()?;
    let phi = inst.require_phi()?;
    ensure_certified(inst.f(), phi, inst.interval(), certify)?;
    let big_m = ratio_extremes(inst.p(), inst.q())?.big_m;
    let j_p = inst.jensen_p()?;
    let j_q = inst.jensen_q()?;
    let bary_p = inst.barycenter_p();
    let bary_q = inst.barycenter_q();
    // Proof-normalized weights q_i - p_i/M are nonnegative and, together
    // with 1/M on the merged point, sum to one.
    let mut spread_n = T::zero();
    for ((&xi, &pi), &qi) in inst
        .x()
        .iter()
        .zip(inst.p().entries())
        .zip(inst.q().entries())
    {
        spread_n = spread_n + (qi - pi / big_m) * phi.eval((xi - bary_q).abs())?;
    }
    let drift_n = phi.eval((bary_q - bary_p).abs())? / big_m;
    Ok((big_m, j_p, j_q, spread_n, drift_n))
}

/// Upper refinement at the theorem's scale:
/// `M J(q) - J(p) >= sum (M q_i - p_i) Phi(|x_i - xbar_q|)
///                   + Phi(|xbar_q - xbar_p|)`.
///
/// Computed through the proof-normalized chain (weights `q_i - p_i/M` and
/// `1/M`) and rescaled by `M`; the two scalings of the chain are recorded
/// side by side because they differ by the factor `M` on every entry.
pub fn thm7_upper_refinement<T: Real>(
    inst: &Instance<T>,
    tol: &Tolerance<T>,
    certify: &Certify<T>,
) -> Result<RefinementTerms<T>> {
    let (big_m, j_p, j_q, spread_n, drift_n) = thm7_upper_parts(inst, certify)?;
    let gap = big_m * j_q - j_p;
    let report = RefinementTerms::build(
        "theorem7-upper",
        "M·J(f,x,q)−J(f,x,p)",
        gap,
        vec![
            ("Σ(M·q_i−p_i)·Φ(|x_i−x̄_q|)".into(), big_m * spread_n),
            ("Φ(|x̄_q−x̄_p|)".into(), big_m * drift_n),
        ],
        tol,
    )
    .with_note(format!(
        "normalized chain (divide by M = {big_m}): gap = J(q)−J(p)/M = {}, terms = [{spread_n}, {drift_n}]",
        j_q - j_p / big_m
    ));
    Ok(report)
}

/// The proof-normalized form of the upper refinement:
/// `J(q) - J(p)/M >= sum (q_i - p_i/M) Phi(|x_i - xbar_q|)
///                   + (1/M) Phi(|xbar_q - xbar_p|)`.
pub fn thm7_upper_refinement_normalized<T: Real>(
    inst: &Instance<T>,
    tol: &Tolerance<T>,
    certify: &Certify<T>,
) -> Result<RefinementTerms<T>> {
    let (big_m, j_p, j_q, spread_n, drift_n) = thm7_upper_parts(inst, certify)?;
    let gap = j_q - j_p / big_m;
    Ok(RefinementTerms::build(
        "theorem7-upper-normalized",
        "J(f,x,q)−J(f,x,p)/M",
        gap,
        vec![
            ("Σ(q_i−p_i/M)·Φ(|x_i−x̄_q|)".into(), spread_n),
            ("(1/M)·Φ(|x̄_q−x̄_p|)".into(), drift_n),
        ],
        tol,
    ))
}

/// The four two-point specializations of the gradient-route refinements.
///
/// `lower`/`upper` hold for any positive `q1`; the `*_half_q` variants are
/// present only when `q1 = 1/2`, where the sandwich pivot becomes the
/// endpoint chord gap.
#[derive(Debug, Clone, PartialEq)]
pub struct Thm7TwoPointReports<T> {
    pub lower: RefinementTerms<T>,
    pub upper: RefinementTerms<T>,
    pub lower_half_q: Option<RefinementTerms<T>>,
    pub upper_half_q: Option<RefinementTerms<T>>,
    /// The inputs had `p1/q1 > p2/q2`, so the two points swapped roles.
    pub roles_swapped: bool,
}

/// Two-point refinements with explicit closed forms. When the ordering
/// `p1/q1 <= p2/q2` fails, the roles of the two points are swapped
/// automatically and the swap is noted on every report.
#[allow(clippy::too_many_arguments)]
pub fn thm7_n2_specials<T: Real>(
    f: &FunctionSpec<T>,
    phi: &ModulusSpec<T>,
    x1: T,
    x2: T,
    p1: T,
    q1: T,
    tol: &Tolerance<T>,
    certify: &Certify<T>,
) -> Result<Thm7TwoPointReports<T>> {
    if x1 == x2 {
        return Err(Error::Precondition(
            "two-point refinements need distinct points".into(),
        ));
    }
    if !(p1 >= T::zero() && p1 <= T::one()) {
        return Err(Error::Precondition(format!(
            "p1 must lie in [0, 1], got {p1}"
        )));
    }
    if !(q1 > T::zero() && q1 < T::one()) {
        return Err(Error::Precondition(format!(
            "q1 must lie strictly inside (0, 1), got {q1}"
        )));
    }
    let interval = Interval::new(x1.min(x2), x1.max(x2))?;
    ensure_certified(f, phi, &interval, certify)?;

    let (mut x1, mut x2, mut p1, mut q1) = (x1, x2, p1, q1);
    let (mut p2, mut q2) = (T::one() - p1, T::one() - q1);
    let roles_swapped = p1 / q1 > p2 / q2;
    if roles_swapped {
        core::mem::swap(&mut x1, &mut x2);
        core::mem::swap(&mut p1, &mut p2);
        core::mem::swap(&mut q1, &mut q2);
    }
    let m = p1 / q1;
    let big_m = p2 / q2;
    let one = T::one();
    let half = T::of(0.5);
    let two = T::of(2.0);

    let f1 = f.eval(x1)?;
    let f2 = f.eval(x2)?;
    let bary_p = p1 * x1 + p2 * x2;
    let bary_q = q1 * x1 + q2 * x2;
    let j_p = p1 * f1 + p2 * f2 - f.eval(bary_p)?;
    let j_q = q1 * f1 + q2 * f2 - f.eval(bary_q)?;
    let drift = phi.eval((bary_q - bary_p).abs())?;
    let dx = (x2 - x1).abs();

    let mut lower = RefinementTerms::build(
        "theorem7-n2-lower",
        "J2(f,x,p)−m·J2(f,x,q)",
        j_p - m * j_q,
        vec![
            ("m·Φ(|x̄_q−x̄_p|)".into(), m * drift),
            ("(1−m)·Φ(p1·|x2−x1|)".into(), (one - m) * phi.eval(p1 * dx)?),
        ],
        tol,
    );
    let mut upper = RefinementTerms::build(
        "theorem7-n2-upper",
        "M·J2(f,x,q)−J2(f,x,p)",
        big_m * j_q - j_p,
        vec![
            (
                "(M·q1−p1)·Φ(q2·|x2−x1|)".into(),
                (big_m * q1 - p1) * phi.eval(q2 * dx)?,
            ),
            ("Φ(|x̄_q−x̄_p|)".into(), drift),
        ],
        tol,
    );

    let halves = q1 == half;
    let mut lower_half_q = None;
    let mut upper_half_q = None;
    if halves {
        let mid = (x1 + x2) / two;
        let hh_gap = (f1 + f2) / two - f.eval(mid)?;
        let mid_drift = phi.eval((mid - bary_p).abs())?;
        lower_half_q = Some(RefinementTerms::build(
            "theorem7-n2-lower-halfq",
            "J2(f,x,p)−2p1·HHgap",
            j_p - two * p1 * hh_gap,
            vec![
                ("2p1·Φ(|mid−x̄_p|)".into(), two * p1 * mid_drift),
                (
                    "(1−2p1)·Φ(p1·|x2−x1|)".into(),
                    (one - two * p1) * phi.eval(p1 * dx)?,
                ),
            ],
            tol,
        ));
        upper_half_q = Some(RefinementTerms::build(
            "theorem7-n2-upper-halfq",
            "2p2·HHgap−J2(f,x,p)",
            two * p2 * hh_gap - j_p,
            vec![
                (
                    "(p2−p1)·Φ(|x2−x1|/2)".into(),
                    (p2 - p1) * phi.eval(dx / two)?,
                ),
                ("Φ(|mid−x̄_p|)".into(), mid_drift),
            ],
            tol,
        ));
    }
    if roles_swapped {
        let note = "roles swapped: the minimum ratio sat on the second point";
        lower = lower.with_note(note);
        upper = upper.with_note(note);
        lower_half_q = lower_half_q.map(|r| r.with_note(note));
        upper_half_q = upper_half_q.map(|r| r.with_note(note));
    }
    Ok(Thm7TwoPointReports {
        lower,
        upper,
        lower_half_q,
        upper_half_q,
        roles_swapped,
    })
}

/// Refinement built by inserting the `q`-barycenter into the sorted point
/// tuple, plus the merged tuple itself for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct MergedChainReport<T> {
    pub report: RefinementTerms<T>,
    /// The `(n+1)`-tuple `y`: sorted points with `xbar_q` inserted.
    pub merged_points: Vec<T>,
    /// The weights `d`: `p_i - m q_i` around mass `m` at the insertion.
    pub merged_weights: Vec<T>,
    /// 0-based insertion position of `xbar_q` in `merged_points`.
    pub insert_index: usize,
}

/// Merged-tuple refinement of the lower sandwich gap: applies the
/// consecutive-pair chain to the `(n+1)`-tuple obtained by inserting
/// `xbar_q` (with weight `m`) into the sorted points (with weights
/// `p_i - m q_i`):
///
/// `J(p) - m J(q) >= sum_i d_i d_{i+1} Phi(y_{i+1} - y_i)`.
///
/// The points must already be nondecreasing; callers rearrange first. When
/// `xbar_q` ties an existing point it is inserted before it; the modulus
/// kills the degenerate zero-width link either way.
pub fn thm8_merged_bound<T: Real>(
    inst: &Instance<T>,
    tol: &Tolerance<T>,
    certify: &Certify<T>,
) -> Result<MergedChainReport<T>> {
    validate_instance(inst, TheoremMode::Theorem8).into_result()?;
    let phi = inst.require_phi()?;
    ensure_certified(inst.f(), phi, inst.interval(), certify)?;
    let m = ratio_extremes(inst.p(), inst.q())?.m;
    let j_p = inst.jensen_p()?;
    let j_q = inst.jensen_q()?;
    let bary_q = inst.barycenter_q();
    let n = inst.n();

    let k = inst.x().partition_point(|&xi| xi < bary_q);
    let mut y = Vec::with_capacity(n + 1);
    y.extend_from_slice(&inst.x()[..k]);
    y.push(bary_q);
    y.extend_from_slice(&inst.x()[k..]);
    let mut d = Vec::with_capacity(n + 1);
    for i in 0..k {
        d.push(inst.p().get(i) - m * inst.q().get(i));
    }
    d.push(m);
    for i in k..n {
        d.push(inst.p().get(i) - m * inst.q().get(i));
    }

    debug_assert!(y.windows(2).all(|w| w[0] <= w[1]));
    debug_assert!({
        let gate = tol.gate(T::one());
        d.iter().all(|&di| di >= -gate)
            && (d.iter().fold(T::zero(), |a, &v| a + v) - T::one()).abs() <= T::of(1e-12)
    });

    let mut summands = Vec::with_capacity(n);
    for i in 0..n {
        let value = d[i] * d[i + 1] * phi.eval(y[i + 1] - y[i])?;
        summands.push((format!("d{}·d{}·Φ(y{}−y{})", i + 1, i + 2, i + 2, i + 1), value));
    }
    let report = RefinementTerms::build(
        "theorem8",
        "J(f,x,p)−m·J(f,x,q)",
        j_p - m * j_q,
        summands,
        tol,
    );
    Ok(MergedChainReport {
        report,
        merged_points: y,
        merged_weights: d,
        insert_index: k,
    })
}

/// Two-point lower-gap refinement plus its half-weight specialization.
#[derive(Debug, Clone, PartialEq)]
pub struct Thm9Report<T> {
    /// `gap >= m (1 - m) Phi(q1 (b - a))`.
    pub general: RefinementTerms<T>,
    /// The `q1 = 1/2` form `gap >= 2 p1 (1 - 2 p1) Phi((b-a)/2)`.
    pub half_q: Option<RefinementTerms<T>>,
    /// The right-hand side at the maximizing weight `p1 = 1/4`, namely
    /// `(1/4) Phi((b-a)/2)`; present when `q1 = 1/2`.
    pub best_half_q_rhs: Option<T>,
}

/// Definition-route refinement on two points `a < b`:
///
/// `[p1 f(a) + p2 f(b) - f(p1 a + p2 b)]
///  - m [q1 f(a) + q2 f(b) - f(q1 a + q2 b)] >= m(1-m) Phi(q1 (b-a))`
///
/// requiring `m = p1/q1 <= p2/q2`, nonnegative `p`, positive `q`.
#[allow(clippy::too_many_arguments)]
pub fn thm9_two_point<T: Real>(
    f: &FunctionSpec<T>,
    phi: &ModulusSpec<T>,
    a: T,
    b: T,
    p1: T,
    q1: T,
    tol: &Tolerance<T>,
    certify: &Certify<T>,
) -> Result<Thm9Report<T>> {
    if !(a < b) {
        return Err(Error::Precondition(format!(
            "two points must satisfy a < b, got a = {a}, b = {b}"
        )));
    }
    if !(p1 >= T::zero() && p1 <= T::one()) {
        return Err(Error::Precondition(format!(
            "p1 must lie in [0, 1], got {p1}"
        )));
    }
    if !(q1 > T::zero() && q1 < T::one()) {
        return Err(Error::Precondition(format!(
            "q1 must lie strictly inside (0, 1), got {q1}"
        )));
    }
    let p2 = T::one() - p1;
    let q2 = T::one() - q1;
    let m = p1 / q1;
    if m > p2 / q2 {
        return Err(Error::Precondition(format!(
            "ordering p1/q1 <= p2/q2 violated ({m} > {}); relabel the points",
            p2 / q2
        )));
    }
    let interval = Interval::new(a, b)?;
    ensure_certified(f, phi, &interval, certify)?;

    let one = T::one();
    let two = T::of(2.0);
    let half = T::of(0.5);
    let fa = f.eval(a)?;
    let fb = f.eval(b)?;
    let j_p = p1 * fa + p2 * fb - f.eval(p1 * a + p2 * b)?;
    let j_q = q1 * fa + q2 * fb - f.eval(q1 * a + q2 * b)?;
    let general = RefinementTerms::build(
        "theorem9",
        "J2(f,(a,b),p)−m·J2(f,(a,b),q)",
        j_p - m * j_q,
        vec![(
            "m·(1−m)·Φ(q1·(b−a))".into(),
            m * (one - m) * phi.eval(q1 * (b - a))?,
        )],
        tol,
    );

    let mut half_q = None;
    let mut best_half_q_rhs = None;
    if q1 == half {
        let hh_gap = (fa + fb) / two - f.eval((a + b) / two)?;
        half_q = Some(RefinementTerms::build(
            "theorem9-halfq",
            "J2(f,(a,b),p)−2p1·HHgap",
            j_p - two * p1 * hh_gap,
            vec![(
                "2p1·(1−2p1)·Φ((b−a)/2)".into(),
                two * p1 * (one - two * p1) * phi.eval((b - a) / two)?,
            )],
            tol,
        ));
        best_half_q_rhs = Some(T::of(0.25) * phi.eval((b - a) / two)?);
    }
    Ok(Thm9Report {
        general,
        half_q,
        best_half_q_rhs,
    })
}

/// Which of the two competing two-point refinements is tighter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparatorWinner {
    GradientRoute,
    DefinitionRoute,
    Tie,
}

/// Side-by-side right-hand sides of the two competing refinements of the
/// same two-point gap `J2(p) - 2 p1 HHgap` at `q = (1/2, 1/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparatorN2<T> {
    /// RHS of the gradient-route refinement:
    /// `2p1 Phi(|mid - xbar_p|) + (1-2p1) Phi(p1 (b-a))`.
    pub thm7_rhs: T,
    /// RHS of the definition-route refinement:
    /// `2p1 (1-2p1) Phi((b-a)/2)`.
    pub thm9_rhs: T,
    pub winner: ComparatorWinner,
    pub gate: T,
}

/// Ranks the two-point refinements on the same data. For `Phi = c d^2`
/// the two right-hand sides agree at `p1 = 1/4`; when `Phi(d)/d^2` is
/// strictly increasing the definition route wins there.
pub fn refinement_comparator_n2<T: Real>(
    f: &FunctionSpec<T>,
    phi: &ModulusSpec<T>,
    a: T,
    b: T,
    p1: T,
    tol: &Tolerance<T>,
) -> Result<ComparatorN2<T>> {
    if !(a < b) {
        return Err(Error::Precondition(format!(
            "two points must satisfy a < b, got a = {a}, b = {b}"
        )));
    }
    if !(p1 > T::zero() && p1 <= T::of(0.5)) {
        return Err(Error::Precondition(format!(
            "p1 must lie in (0, 1/2], got {p1}"
        )));
    }
    if !f.domain().contains_interval(&Interval::new(a, b)?) {
        return Err(Error::Domain(format!(
            "interval [{a}, {b}] is not contained in the domain of {}",
            f.name()
        )));
    }
    let one = T::one();
    let two = T::of(2.0);
    let p2 = one - p1;
    let mid = (a + b) / two;
    let bary_p = p1 * a + p2 * b;
    let thm7_rhs =
        two * p1 * phi.eval((mid - bary_p).abs())? + (one - two * p1) * phi.eval(p1 * (b - a))?;
    let thm9_rhs = two * p1 * (one - two * p1) * phi.eval((b - a) / two)?;
    let gate = tol.gate(max_abs([thm7_rhs, thm9_rhs]));
    let winner = if (thm7_rhs - thm9_rhs).abs() <= gate {
        ComparatorWinner::Tie
    } else if thm7_rhs > thm9_rhs {
        ComparatorWinner::GradientRoute
    } else {
        ComparatorWinner::DefinitionRoute
    };
    Ok(ComparatorN2 {
        thm7_rhs,
        thm9_rhs,
        winner,
        gate,
    })
}
