//! Brute-force verification engine.
//!
//! Instances are a pure function of `(seed, index)`: every trial gets its
//! own ChaCha8 stream, so campaigns are reproducible and independent of
//! evaluation order. Campaigns evaluate each selected bound on every
//! generated instance and summarize slacks; a correct implementation sees
//! zero violations, so any violation record is a finding, complete with
//! the reproducing seed and index.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classic::{theorem1_bounds, two_point_bounds};
use crate::error::{Error, Result};
use crate::func::{FunctionKind, FunctionSpec};
use crate::instance::Instance;
use crate::interval::Interval;
use crate::modulus::ModulusSpec;
use crate::refined::{theorem2_bounds, theorem4_endpoint_bound, theorem6_uniform_q_bounds};
use crate::report::{BoundReport, RefinementTerms};
use crate::scalar::Real;
use crate::tolerance::Tolerance;
use crate::uniform::{
    certify_uniform_convexity, eq32_lower_bound, sy_chain_bound, thm7_lower_refinement,
    thm7_upper_refinement, thm8_merged_bound, thm9_two_point, CertGrid, Certify,
};
use crate::weights::WeightVector;

/// How the `p` tuple of a trial is drawn. The `q` tuple is always a
/// bounded-positive simplex draw so the pointwise ratios stay
/// well-conditioned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    /// Nonnegative simplex draw (normalized exponentials).
    NonnegSimplex,
    /// Possibly-negative entries whose rearranged prefix sums are drawn
    /// uniformly in `[0, 1]`: exactly the admissibility set of the
    /// prefix-ratio sandwich.
    SignedPrefixValid,
    /// Simplex draw with every entry at least `min(0.05, 1/(2n))`.
    BoundedPositive,
}

impl WeightMode {
    pub fn name(&self) -> &'static str {
        match self {
            WeightMode::NonnegSimplex => "nonneg",
            WeightMode::SignedPrefixValid => "signed",
            WeightMode::BoundedPositive => "bounded",
        }
    }
}

/// A catalog function paired with the modulus used for its refinements
/// (`None` when only modulus-free bounds are exercised on it).
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry<T> {
    pub f: FunctionSpec<T>,
    pub phi: Option<ModulusSpec<T>>,
}

/// Deterministic campaign configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzConfig<T> {
    pub seed: u64,
    pub trials: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub weight_mode: WeightMode,
    pub entries: Vec<CatalogEntry<T>>,
    pub interval: Interval<T>,
    pub tol: Tolerance<T>,
}

impl<T: Real> FuzzConfig<T> {
    /// The full catalog on `[0.1, 1.1]` (every kind is defined there),
    /// `n` in `2..=8`, default tolerances.
    pub fn standard(seed: u64, trials: usize, weight_mode: WeightMode) -> Self {
        let interval = Interval::new(T::of(0.1), T::of(1.1)).expect("static interval");
        Self {
            seed,
            trials,
            n_min: 2,
            n_max: 8,
            weight_mode,
            entries: default_catalog(&interval),
            interval,
            tol: Tolerance::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be >= 1".into()));
        }
        if self.n_min < 2 || self.n_max > 32 || self.n_min > self.n_max {
            return Err(Error::InvalidInput(format!(
                "n range must satisfy 2 <= n_min <= n_max <= 32, got {}..={}",
                self.n_min, self.n_max
            )));
        }
        if self.entries.is_empty() {
            return Err(Error::InvalidInput("function set must be nonempty".into()));
        }
        for e in &self.entries {
            if !e.f.domain().contains_interval(&self.interval) {
                return Err(Error::Domain(format!(
                    "interval [{}, {}] is not contained in the domain of {}",
                    self.interval.lower(),
                    self.interval.upper(),
                    e.f.name()
                )));
            }
        }
        Ok(())
    }
}

/// Every catalog kind defined on `interval`, each paired with its known
/// modulus there when one exists.
pub fn default_catalog<T: Real>(interval: &Interval<T>) -> Vec<CatalogEntry<T>> {
    let candidates = [
        FunctionSpec::square(),
        FunctionSpec::power(T::of(3.0)).expect("static exponent"),
        FunctionSpec::exp(),
        FunctionSpec::xlogx(),
        FunctionSpec::abs_power(T::of(4.0)).expect("static exponent"),
    ];
    candidates
        .into_iter()
        .filter(|f| f.domain().contains_interval(interval))
        .map(|f| CatalogEntry {
            phi: f.known_modulus_on(interval),
            f,
        })
        .collect()
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn uniform01(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen::<f64>()
}

/// Normalized exponential draws: a uniform point on the simplex.
fn simplex_draw(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - uniform01(rng)).ln()).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|e| e / sum).collect()
}

fn bounded_positive_draw(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let floor = 0.05_f64.min(0.5 / n as f64);
    let d = simplex_draw(rng, n);
    d.into_iter()
        .map(|di| floor + (1.0 - n as f64 * floor) * di)
        .collect()
}

/// Signed entries in sorted order: prefix sums drawn i.i.d. uniform on
/// `[0, 1]` with the last pinned to 1, then differenced.
fn signed_prefix_draw(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut s: Vec<f64> = (0..n - 1).map(|_| uniform01(rng)).collect();
    s.push(1.0);
    let mut prev = 0.0;
    s.into_iter()
        .map(|si| {
            let d = si - prev;
            prev = si;
            d
        })
        .collect()
}

/// Generates the trial instance for `(cfg.seed, index)`. Deterministic:
/// the same pair always yields the identical instance.
pub fn random_instance<T: Real>(cfg: &FuzzConfig<T>, index: usize) -> Result<Instance<T>> {
    if index >= cfg.trials {
        return Err(Error::InvalidInput(format!(
            "trial index {index} out of range (trials = {})",
            cfg.trials
        )));
    }
    cfg.validate()?;
    let mut rng = trial_rng(cfg.seed, index as u64);
    let n = rng.gen_range(cfg.n_min..=cfg.n_max);
    let a = cfg
        .interval
        .lower()
        .to_f64()
        .expect("interval endpoints are finite");
    let b = cfg.interval.upper().to_f64().expect("finite");
    let x: Vec<T> = (0..n)
        .map(|_| T::of(a + uniform01(&mut rng) * (b - a)))
        .collect();
    let entry = &cfg.entries[rng.gen_range(0..cfg.entries.len())];
    let q: Vec<T> = bounded_positive_draw(&mut rng, n)
        .into_iter()
        .map(T::of)
        .collect();
    let p: Vec<T> = match cfg.weight_mode {
        WeightMode::NonnegSimplex => simplex_draw(&mut rng, n).into_iter().map(T::of).collect(),
        WeightMode::BoundedPositive => bounded_positive_draw(&mut rng, n)
            .into_iter()
            .map(T::of)
            .collect(),
        WeightMode::SignedPrefixValid => {
            // The prefix condition lives in sorted-x order: draw there,
            // then scatter back through the sorting permutation.
            let sorted_p = signed_prefix_draw(&mut rng, n);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.sort_by(|&i, &j| x[i].partial_cmp(&x[j]).expect("finite points"));
            let mut p = vec![T::zero(); n];
            for (pos, &orig) in perm.iter().enumerate() {
                p[orig] = T::of(sorted_p[pos]);
            }
            p
        }
    };
    Instance::new(
        x,
        WeightVector::new(p)?,
        WeightVector::new(q)?,
        entry.f,
        entry.phi,
        cfg.interval,
    )
}

/// One verifiable predicate exercised by a campaign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremCheck {
    Theorem1,
    Theorem2,
    Theorem3,
    Theorem4,
    Theorem5,
    Theorem6,
    Theorem7Lower,
    Theorem7Upper,
    Theorem8,
    Theorem9,
    Eq32,
}

impl TheoremCheck {
    pub const ALL: [TheoremCheck; 11] = [
        TheoremCheck::Theorem1,
        TheoremCheck::Theorem2,
        TheoremCheck::Theorem3,
        TheoremCheck::Theorem4,
        TheoremCheck::Theorem5,
        TheoremCheck::Theorem6,
        TheoremCheck::Theorem7Lower,
        TheoremCheck::Theorem7Upper,
        TheoremCheck::Theorem8,
        TheoremCheck::Theorem9,
        TheoremCheck::Eq32,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TheoremCheck::Theorem1 => "theorem1",
            TheoremCheck::Theorem2 => "theorem2",
            TheoremCheck::Theorem3 => "theorem3",
            TheoremCheck::Theorem4 => "theorem4",
            TheoremCheck::Theorem5 => "theorem5",
            TheoremCheck::Theorem6 => "theorem6",
            TheoremCheck::Theorem7Lower => "theorem7-lower",
            TheoremCheck::Theorem7Upper => "theorem7-upper",
            TheoremCheck::Theorem8 => "theorem8",
            TheoremCheck::Theorem9 => "theorem9",
            TheoremCheck::Eq32 => "eq32",
        }
    }

    fn needs_modulus(&self) -> bool {
        matches!(
            self,
            TheoremCheck::Theorem3
                | TheoremCheck::Theorem7Lower
                | TheoremCheck::Theorem7Upper
                | TheoremCheck::Theorem8
                | TheoremCheck::Theorem9
                | TheoremCheck::Eq32
        )
    }
}

/// Slack of one evaluated trial, raw and divided by the verification gate
/// (violations are exactly the samples with `normalized < -1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlackSample<T> {
    pub trial: usize,
    pub raw: T,
    pub normalized: T,
    /// `|raw| / scale`, the equality-residual measure (0 when both vanish).
    pub relative_to_scale: T,
}

/// Per-check campaign statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary<T> {
    pub check: TheoremCheck,
    pub evaluated: usize,
    pub skipped: usize,
    /// Exactly the evaluated trials whose slack fell below the gate.
    pub violations: Vec<SlackSample<T>>,
    /// The smallest normalized slack seen, with its trial index.
    pub worst: Option<SlackSample<T>>,
    pub min_normalized: T,
    pub median_normalized: T,
    /// Largest `|slack|/scale` over trials run on the square/`d^2` pair,
    /// when any were: the equality-case residual.
    pub equality_residual: Option<T>,
}

/// Outcome of a campaign, reduced in trial order.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignSummary<T> {
    pub seed: u64,
    pub trials: usize,
    pub weight_mode: WeightMode,
    pub checks: Vec<CheckSummary<T>>,
}

impl<T: Real> CampaignSummary<T> {
    pub fn total_violations(&self) -> usize {
        self.checks.iter().map(|c| c.violations.len()).sum()
    }
}

fn chain_sample<T: Real>(trial: usize, report: &BoundReport<T>, floor: T) -> SlackSample<T> {
    let raw = report.min_slack();
    SlackSample {
        trial,
        raw,
        normalized: raw / report.gate,
        relative_to_scale: relative_residual(raw, report.scale.max(floor)),
    }
}

fn refinement_sample<T: Real>(
    trial: usize,
    report: &RefinementTerms<T>,
    floor: T,
) -> SlackSample<T> {
    SlackSample {
        trial,
        raw: report.slack,
        normalized: report.slack / report.gate,
        relative_to_scale: relative_residual(report.slack, report.scale.max(floor)),
    }
}

fn relative_residual<T: Real>(slack: T, scale: T) -> T {
    if slack == T::zero() {
        T::zero()
    } else {
        slack.abs() / scale
    }
}

/// Magnitude of the function values a report was computed from. Rounding
/// is relative to these, so equality residuals are measured against the
/// larger of the chain scale and this value; otherwise a near-cancelling
/// gap would make an exact identity look loose.
fn f_value_scale<T: Real>(inst: &Instance<T>) -> T {
    let mut s = T::zero();
    for &xi in inst.x() {
        if let Ok(v) = inst.f().eval(xi) {
            s = s.max(v.abs());
        }
    }
    if let Ok(v) = inst.f().eval(inst.barycenter_p()) {
        s = s.max(v.abs());
    }
    if let Ok(v) = inst.f().eval(inst.barycenter_q()) {
        s = s.max(v.abs());
    }
    s
}

fn sorted_clone<T: Real>(inst: &Instance<T>) -> Result<Instance<T>> {
    let r = inst.rearranged();
    Instance::new(
        r.x().to_vec(),
        r.p().clone(),
        r.q().clone(),
        *inst.f(),
        inst.phi().copied(),
        *inst.interval(),
    )
}

/// Evaluates one check on one trial. `Ok(None)` means the trial is
/// inadmissible for this check and was skipped; errors other than
/// precondition failures propagate.
fn evaluate_check<T: Real>(
    check: TheoremCheck,
    cfg: &FuzzConfig<T>,
    inst: &Instance<T>,
    index: usize,
) -> Result<Option<SlackSample<T>>> {
    let tol = &cfg.tol;
    let skip = Certify::Skip; // entries are certified once per campaign
    let floor = f_value_scale(inst);
    let run = |r: core::result::Result<SlackSample<T>, Error>| match r {
        Ok(sample) => Ok(Some(sample)),
        Err(Error::Precondition(_)) => Ok(None),
        Err(e) => Err(e),
    };
    match check {
        TheoremCheck::Theorem1 => run(theorem1_bounds(inst, tol).map(|r| chain_sample(index, &r, floor))),
        TheoremCheck::Theorem2 => run(theorem2_bounds(inst, tol).map(|r| chain_sample(index, &r, floor))),
        TheoremCheck::Theorem3 => {
            if inst.phi().is_none() {
                return Ok(None);
            }
            run(sy_chain_bound(inst, tol, &skip).map(|r| refinement_sample(index, &r, floor)))
        }
        TheoremCheck::Theorem4 => run(theorem4_endpoint_bound(
            inst.f(),
            inst.interval(),
            inst.x(),
            inst.p(),
            tol,
        )
        .map(|r| chain_sample(index, &r, floor))),
        TheoremCheck::Theorem5 => {
            // Endpoint pair with an auxiliary deterministic weight; the
            // high-bit stream never collides with trial streams.
            let mut aux = trial_rng(cfg.seed, index as u64 | 1 << 63);
            let p1 = T::of(0.01 + 0.98 * uniform01(&mut aux));
            run(
                two_point_bounds(
                    inst.f(),
                    inst.interval().lower(),
                    inst.interval().upper(),
                    p1,
                    tol,
                )
                .map(|r| chain_sample(index, &r, floor)),
            )
        }
        TheoremCheck::Theorem6 => run(theorem6_uniform_q_bounds(inst.f(), inst.x(), inst.p(), tol)
            .map(|r| chain_sample(index, &r, floor))),
        TheoremCheck::Theorem7Lower => {
            if inst.phi().is_none() {
                return Ok(None);
            }
            run(thm7_lower_refinement(inst, tol, &skip).map(|r| refinement_sample(index, &r, floor)))
        }
        TheoremCheck::Theorem7Upper => {
            if inst.phi().is_none() {
                return Ok(None);
            }
            run(thm7_upper_refinement(inst, tol, &skip).map(|r| refinement_sample(index, &r, floor)))
        }
        TheoremCheck::Theorem8 => {
            if inst.phi().is_none() {
                return Ok(None);
            }
            let sorted = sorted_clone(inst)?;
            run(thm8_merged_bound(&sorted, tol, &skip).map(|r| refinement_sample(index, &r.report, floor)))
        }
        TheoremCheck::Theorem9 => {
            let phi = match inst.phi() {
                Some(phi) => *phi,
                None => return Ok(None),
            };
            if inst.n() != 2 {
                return Ok(None);
            }
            let r = inst.rearranged();
            let (a, b) = (r.x()[0], r.x()[1]);
            if !(a < b) {
                return Ok(None);
            }
            let (p1, q1) = (r.p().get(0), r.q().get(0));
            run(
                thm9_two_point(inst.f(), &phi, a, b, p1, q1, tol, &skip)
                    .map(|r| refinement_sample(index, &r.general, floor)),
            )
        }
        TheoremCheck::Eq32 => {
            if inst.phi().is_none() {
                return Ok(None);
            }
            run(eq32_lower_bound(inst, tol, &skip).map(|r| refinement_sample(index, &r, floor)))
        }
    }
}

fn is_square_d2<T: Real>(inst: &Instance<T>) -> bool {
    matches!(inst.f().kind(), FunctionKind::Square)
        && inst.phi().is_some_and(|phi| {
            phi.coefficient() == T::one() && phi.exponent() == T::of(2.0)
        })
}

/// Runs every selected check on every generated trial, in index order.
///
/// Each catalog entry carrying a modulus is certified once up front (on
/// the campaign interval, default grid) when any selected check uses
/// moduli; per-trial calls then skip re-certification.
pub fn run_campaign<T: Real>(
    cfg: &FuzzConfig<T>,
    checks: &[TheoremCheck],
) -> Result<CampaignSummary<T>> {
    cfg.validate()?;
    if checks.is_empty() {
        return Err(Error::InvalidInput("theorem set must be nonempty".into()));
    }
    if checks.iter().any(|c| c.needs_modulus()) {
        for e in &cfg.entries {
            if let Some(phi) = &e.phi {
                let cert =
                    certify_uniform_convexity(&e.f, phi, &cfg.interval, &CertGrid::default())?;
                if !cert.passed {
                    let (x, y, t) = cert.worst_point;
                    return Err(Error::Uncertified {
                        pair: format!("{} with {}", e.f.name(), phi.name()),
                        worst_slack: cert.worst_slack.to_f64().unwrap_or(f64::NAN),
                        x: x.to_f64().unwrap_or(f64::NAN),
                        y: y.to_f64().unwrap_or(f64::NAN),
                        t: t.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
    }

    let mut evaluated: Vec<Vec<SlackSample<T>>> = vec![Vec::new(); checks.len()];
    let mut skipped = vec![0usize; checks.len()];
    let mut equality: Vec<Option<T>> = vec![None; checks.len()];
    for index in 0..cfg.trials {
        let inst = random_instance(cfg, index)?;
        let square_d2 = is_square_d2(&inst);
        for (ci, &check) in checks.iter().enumerate() {
            match evaluate_check(check, cfg, &inst, index)? {
                Some(sample) => {
                    if square_d2 && check.needs_modulus() {
                        let r = sample.relative_to_scale;
                        equality[ci] = Some(equality[ci].map_or(r, |old: T| old.max(r)));
                    }
                    evaluated[ci].push(sample);
                }
                None => skipped[ci] += 1,
            }
        }
    }

    let summaries = checks
        .iter()
        .enumerate()
        .map(|(ci, &check)| {
            let samples = &evaluated[ci];
            let violations: Vec<SlackSample<T>> = samples
                .iter()
                .filter(|s| s.normalized < -T::one())
                .cloned()
                .collect();
            let worst = samples
                .iter()
                .cloned()
                .fold(None::<SlackSample<T>>, |acc, s| match acc {
                    None => Some(s),
                    Some(w) if s.normalized < w.normalized => Some(s),
                    Some(w) => Some(w),
                });
            let mut sorted: Vec<T> = samples.iter().map(|s| s.normalized).collect();
            sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite slacks"));
            let min_normalized = sorted.first().copied().unwrap_or_else(T::zero);
            let median_normalized = if sorted.is_empty() {
                T::zero()
            } else {
                sorted[sorted.len() / 2]
            };
            CheckSummary {
                check,
                evaluated: samples.len(),
                skipped: skipped[ci],
                violations,
                worst,
                min_normalized,
                median_normalized,
                equality_residual: equality[ci],
            }
        })
        .collect();
    Ok(CampaignSummary {
        seed: cfg.seed,
        trials: cfg.trials,
        weight_mode: cfg.weight_mode,
        checks: summaries,
    })
}

/// Residuals of the bounds that collapse to equalities on the
/// square/`d^2` pair, plus the fixed strictness witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct EqualityWitnessReport<T> {
    pub trials: usize,
    /// Largest `|slack|/scale` of the lower gradient-route refinement.
    pub thm7_lower_max_residual: T,
    /// Largest `|slack|/scale` of the proof-normalized upper chain.
    pub thm7_upper_max_residual: T,
    pub eq32_max_residual: T,
    /// Two-point residuals (n = 2 trials only).
    pub sy_chain_n2_max_residual: T,
    pub thm8_n2_max_residual: T,
    pub thm9_n2_max_residual: T,
    /// Slack and gate of the fixed three-point strictness witness of the
    /// merged-tuple bound: must be far above the gate.
    pub thm8_n3_witness_slack: T,
    pub thm8_n3_witness_gate: T,
    /// Slack of the fixed three-point chain witness (value 4/9).
    pub sy_chain_n3_witness_slack: T,
}

impl<T: Real> EqualityWitnessReport<T> {
    /// Whether every equality residual is at most `bound` (relative to
    /// scale) and both witnesses are strict.
    pub fn passes(&self, bound: T) -> bool {
        self.thm7_lower_max_residual <= bound
            && self.thm7_upper_max_residual <= bound
            && self.eq32_max_residual <= bound
            && self.sy_chain_n2_max_residual <= bound
            && self.thm8_n2_max_residual <= bound
            && self.thm9_n2_max_residual <= bound
            && self.thm8_n3_witness_slack > T::of(10.0) * self.thm8_n3_witness_gate
            && self.sy_chain_n3_witness_slack > T::zero()
    }
}

fn square_d2_config<T: Real>(n_min: usize, n_max: usize, trials: usize) -> FuzzConfig<T> {
    FuzzConfig {
        seed: 1729,
        trials,
        n_min,
        n_max,
        weight_mode: WeightMode::NonnegSimplex,
        entries: vec![CatalogEntry {
            f: FunctionSpec::square(),
            phi: Some(ModulusSpec::squared()),
        }],
        interval: Interval::new(T::zero(), T::one()).expect("static interval"),
        tol: Tolerance::default(),
    }
}

/// Runs the fixed equality-witness suite on the square/`d^2` pair:
/// residual sweeps over seeded random instances (`n` in `2..=8` for the
/// gradient-route bounds, `n = 2` for the two-point ones) plus the fixed
/// three-point strictness witnesses.
pub fn equality_witness_suite<T: Real>() -> Result<EqualityWitnessReport<T>> {
    let tol = Tolerance::default();
    let skip = Certify::Skip; // square with d^2 is an algebraic identity
    let trials = 1000;

    let cfg = square_d2_config::<T>(2, 8, trials);
    let mut thm7_lower_max = T::zero();
    let mut thm7_upper_max = T::zero();
    let mut eq32_max = T::zero();
    for index in 0..cfg.trials {
        let inst = random_instance(&cfg, index)?;
        let floor = f_value_scale(&inst);
        let lo = thm7_lower_refinement(&inst, &tol, &skip)?;
        thm7_lower_max = thm7_lower_max.max(relative_residual(lo.slack, lo.scale.max(floor)));
        let up = crate::uniform::thm7_upper_refinement_normalized(&inst, &tol, &skip)?;
        thm7_upper_max = thm7_upper_max.max(relative_residual(up.slack, up.scale.max(floor)));
        let e = eq32_lower_bound(&inst, &tol, &skip)?;
        eq32_max = eq32_max.max(relative_residual(e.slack, e.scale.max(floor)));
    }

    let cfg2 = square_d2_config::<T>(2, 2, trials);
    let mut sy_max = T::zero();
    let mut thm8_max = T::zero();
    let mut thm9_max = T::zero();
    for index in 0..cfg2.trials {
        let inst = random_instance(&cfg2, index)?;
        let floor = f_value_scale(&inst);
        let sy = sy_chain_bound(&inst, &tol, &skip)?;
        sy_max = sy_max.max(relative_residual(sy.slack, sy.scale.max(floor)));
        let sorted = sorted_clone(&inst)?;
        let merged = thm8_merged_bound(&sorted, &tol, &skip)?;
        thm8_max = thm8_max.max(relative_residual(
            merged.report.slack,
            merged.report.scale.max(floor),
        ));
        if let Some(sample) = evaluate_check(TheoremCheck::Theorem9, &cfg2, &inst, index)? {
            thm9_max = thm9_max.max(sample.relative_to_scale);
        }
    }

    // Fixed three-point witnesses: strict inequality, not equality.
    let iv = Interval::new(T::zero(), T::of(2.0))?;
    let x = vec![T::zero(), T::one(), T::of(2.0)];
    let witness = Instance::new(
        x.clone(),
        WeightVector::new(vec![T::of(0.4), T::of(0.1), T::of(0.5)])?,
        WeightVector::uniform(3)?,
        FunctionSpec::square(),
        Some(ModulusSpec::squared()),
        iv,
    )?;
    let merged = thm8_merged_bound(&witness, &tol, &skip)?;
    let uniform_witness = Instance::new(
        x,
        WeightVector::uniform(3)?,
        WeightVector::uniform(3)?,
        FunctionSpec::square(),
        Some(ModulusSpec::squared()),
        iv,
    )?;
    let sy = sy_chain_bound(&uniform_witness, &tol, &skip)?;

    Ok(EqualityWitnessReport {
        trials,
        thm7_lower_max_residual: thm7_lower_max,
        thm7_upper_max_residual: thm7_upper_max,
        eq32_max_residual: eq32_max,
        sy_chain_n2_max_residual: sy_max,
        thm8_n2_max_residual: thm8_max,
        thm9_n2_max_residual: thm9_max,
        thm8_n3_witness_slack: merged.report.slack,
        thm8_n3_witness_gate: merged.report.gate,
        sy_chain_n3_witness_slack: sy.slack,
    })
}

/// One refinement's right-hand side against the gap it bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedRefinement<T> {
    pub name: String,
    pub gap_name: String,
    pub gap: T,
    pub rhs: T,
    pub slack: T,
}

/// All applicable lower-bound refinements of an instance, grouped by the
/// gap they bound and ranked by right-hand side (larger = tighter).
#[derive(Debug, Clone, PartialEq)]
pub struct TightnessRanking<T> {
    /// Refinements of the plain Jensen gap `J(f,x,p)`.
    pub jensen_gap: Vec<RankedRefinement<T>>,
    /// Refinements of the excess gap `J(f,x,p) - m J(f,x,q)`.
    pub excess_gap: Vec<RankedRefinement<T>>,
    /// Names of the tightest entries per group (ties within the gate).
    pub tightest_jensen: Vec<String>,
    pub tightest_excess: Vec<String>,
    pub notes: Vec<String>,
}

fn rank_group<T: Real>(entries: &mut [RankedRefinement<T>], tol: &Tolerance<T>) -> Vec<String> {
    entries.sort_by(|a, b| b.rhs.partial_cmp(&a.rhs).expect("finite rhs"));
    match entries.first() {
        None => Vec::new(),
        Some(best) => {
            let gate = tol.gate(best.rhs);
            entries
                .iter()
                .filter(|e| best.rhs - e.rhs <= gate)
                .map(|e| e.name.clone())
                .collect()
        }
    }
}

/// Evaluates every applicable refinement on the instance and ranks them.
/// The pair `(f, phi)` is certified once here; set `certify` to skip that.
pub fn tightness_ranking<T: Real>(
    inst: &Instance<T>,
    tol: &Tolerance<T>,
    certify: &Certify<T>,
) -> Result<TightnessRanking<T>> {
    let phi = *inst.require_phi()?;
    if let Certify::Skip = certify {
    } else {
        let grid = match certify {
            Certify::Grid(g) => g.clone(),
            _ => CertGrid::default(),
        };
        let cert = certify_uniform_convexity(inst.f(), &phi, inst.interval(), &grid)?;
        if !cert.passed {
            let (x, y, t) = cert.worst_point;
            return Err(Error::Uncertified {
                pair: format!("{} with {}", inst.f().name(), phi.name()),
                worst_slack: cert.worst_slack.to_f64().unwrap_or(f64::NAN),
                x: x.to_f64().unwrap_or(f64::NAN),
                y: y.to_f64().unwrap_or(f64::NAN),
                t: t.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let skip = Certify::Skip;
    let mut notes = Vec::new();
    let mut jensen_gap = Vec::new();
    let mut excess_gap = Vec::new();

    let push_refinement = |group: &mut Vec<RankedRefinement<T>>,
                               name: &str,
                               r: core::result::Result<RefinementTerms<T>, Error>,
                               notes: &mut Vec<String>| {
        match r {
            Ok(rep) => group.push(RankedRefinement {
                name: name.into(),
                gap_name: rep.gap_name.clone(),
                gap: rep.gap,
                rhs: rep.total,
                slack: rep.slack,
            }),
            Err(Error::Precondition(msg)) => notes.push(format!("{name} skipped: {msg}")),
            Err(_) => notes.push(format!("{name} skipped")),
        }
    };

    push_refinement(
        &mut jensen_gap,
        "eq32",
        eq32_lower_bound(inst, tol, &skip),
        &mut notes,
    );
    push_refinement(
        &mut jensen_gap,
        "theorem3",
        sy_chain_bound(inst, tol, &skip),
        &mut notes,
    );
    push_refinement(
        &mut excess_gap,
        "theorem7",
        thm7_lower_refinement(inst, tol, &skip),
        &mut notes,
    );
    let sorted = sorted_clone(inst)?;
    push_refinement(
        &mut excess_gap,
        "theorem8",
        thm8_merged_bound(&sorted, tol, &skip).map(|m| m.report),
        &mut notes,
    );
    if inst.n() == 2 {
        let r = inst.rearranged();
        let (a, b) = (r.x()[0], r.x()[1]);
        if a < b {
            push_refinement(
                &mut excess_gap,
                "theorem9",
                thm9_two_point(
                    inst.f(),
                    &phi,
                    a,
                    b,
                    r.p().get(0),
                    r.q().get(0),
                    tol,
                    &skip,
                )
                .map(|r| r.general),
                &mut notes,
            );
        }
    }

    let tightest_jensen = rank_group(&mut jensen_gap, tol);
    let tightest_excess = rank_group(&mut excess_gap, tol);
    Ok(TightnessRanking {
        jensen_gap,
        excess_gap,
        tightest_jensen,
        tightest_excess,
        notes,
    })
}
