//! `jengap`: two-sided bounds and refinements for the Jensen functional.
//!
//! The Jensen functional of a convex function `f`, points `x` and
//! normalized weights `w` is the gap
//!
//! ```text
//! J(f, x, w) = sum_i w_i f(x_i) - f(sum_i w_i x_i)
//! ```
//!
//! which is nonnegative whenever `w` is nonnegative. This crate computes
//! the functional and verifies, with explicit floating-point slack
//! accounting, the bound chains that relate `J(f, x, p)` to `J(f, x, q)`
//! for a second weight tuple `q`:
//!
//! * [`classic`] — the pointwise-ratio sandwich `m J(q) <= J(p) <= M J(q)`
//!   with `m, M` the extremes of `p_i / q_i`, plus its two-point form.
//! * [`refined`] — the cumulative-ratio sandwich built from prefix and
//!   suffix mass ratios after sorting the points, which tightens `[m, M]`
//!   to `[m*, M*]` and also covers signed `p`; endpoint and uniform-weight
//!   corollaries.
//! * [`uniform`] — refinements available when `f` is uniformly convex with
//!   a power-type modulus `Phi`: grid certification of the modulus, the
//!   gradient-form inequality, and lower bounds that fit nonnegative
//!   `Phi`-terms inside the sandwich gaps.
//! * [`oracle`] — a seeded brute-force verification engine: deterministic
//!   random instances, campaign runs over every bound, equality-witness
//!   suites, and tightness ranking of competing refinements.
//!
//! All numerics are generic over the scalar type through [`scalar::Real`]
//! (`f32` or `f64`); the `*64` aliases at the crate root fix `f64`, the
//! precision every default tolerance is written for.
//!
//! ```
//! use jengap::{FunctionSpec64, Tolerance64, WeightVector64, Instance64, Interval64};
//! use jengap::classic::theorem1_bounds;
//!
//! let inst = Instance64::new(
//!     vec![0.0, 1.0],
//!     WeightVector64::new(vec![0.2, 0.8]).unwrap(),
//!     WeightVector64::new(vec![0.5, 0.5]).unwrap(),
//!     FunctionSpec64::square(),
//!     None,
//!     Interval64::new(0.0, 1.0).unwrap(),
//! )
//! .unwrap();
//! let report = theorem1_bounds(&inst, &Tolerance64::default()).unwrap();
//! assert_eq!(report.verdict, jengap::report::Verdict::Verified);
//! ```

// Negated comparisons like `!(a < b)` are deliberate where they appear:
// unlike `a >= b` they also reject NaN operands.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classic;
pub mod error;
pub mod func;
pub mod instance;
pub mod interval;
pub mod jensen;
pub mod modulus;
pub mod oracle;
pub mod rearrange;
pub mod refined;
pub mod report;
pub mod scalar;
pub mod tolerance;
pub mod uniform;
pub mod weights;

pub use error::{Error, Result};
pub use func::{FunctionKind, FunctionSpec};
pub use instance::{validate_instance, Instance, TheoremMode, ValidationReport};
pub use interval::Interval;
pub use jensen::{barycenter, jensen_functional};
pub use modulus::ModulusSpec;
pub use rearrange::{increasing_rearrangement, Rearrangement};
pub use report::{BoundReport, RefinementTerms, Verdict};
pub use scalar::Real;
pub use tolerance::Tolerance;
pub use weights::WeightVector;

pub type FunctionSpec64 = FunctionSpec<f64>;
pub type ModulusSpec64 = ModulusSpec<f64>;
pub type WeightVector64 = WeightVector<f64>;
pub type Instance64 = Instance<f64>;
pub type Interval64 = Interval<f64>;
pub type Tolerance64 = Tolerance<f64>;
pub type BoundReport64 = BoundReport<f64>;
pub type RefinementTerms64 = RefinementTerms<f64>;
pub type Rearrangement64 = Rearrangement<f64>;

pub type FunctionSpec32 = FunctionSpec<f32>;
pub type ModulusSpec32 = ModulusSpec<f32>;
pub type WeightVector32 = WeightVector<f32>;
pub type Instance32 = Instance<f32>;
pub type Interval32 = Interval<f32>;
pub type Tolerance32 = Tolerance<f32>;
