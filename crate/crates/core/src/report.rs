//! Verification reports: inequality chains and gap refinements.
//!
//! Reports store raw term values, not just verdicts, so refinements can be
//! ranked against each other afterwards.

use crate::scalar::{max_abs, Real};
use crate::tolerance::Tolerance;

/// Outcome of a verification. `Inadmissible` is produced at the interface
/// layer when an instance fails a theorem's preconditions; library
/// operations signal that case through errors instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    Violated,
    Inadmissible,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Violated => "violated",
            Verdict::Inadmissible => "inadmissible",
        }
    }
}

/// One named value in an inequality chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainTerm<T> {
    pub name: String,
    pub value: T,
}

/// An inequality chain `t_1 >= t_2 >= ... >= t_k` with one slack per link.
///
/// The verdict is `Verified` when every slack clears `-gate`, where the
/// gate is evaluated at `scale = max |t_i|`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<T> {
    pub label: String,
    pub terms: Vec<ChainTerm<T>>,
    pub slacks: Vec<T>,
    pub scale: T,
    pub gate: T,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl<T: Real> BoundReport<T> {
    pub fn from_chain(
        label: impl Into<String>,
        terms: Vec<(String, T)>,
        tol: &Tolerance<T>,
    ) -> Self {
        let terms: Vec<ChainTerm<T>> = terms
            .into_iter()
            .map(|(name, value)| ChainTerm { name, value })
            .collect();
        let scale = max_abs(terms.iter().map(|t| t.value));
        let gate = tol.gate(scale);
        let slacks: Vec<T> = terms
            .windows(2)
            .map(|w| w[0].value - w[1].value)
            .collect();
        let verdict = if slacks.iter().all(|&s| s >= -gate) {
            Verdict::Verified
        } else {
            Verdict::Violated
        };
        Self {
            label: label.into(),
            terms,
            slacks,
            scale,
            gate,
            verdict,
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn min_slack(&self) -> T {
        self.slacks
            .iter()
            .fold(T::infinity(), |acc, &s| acc.min(s))
    }

    /// The chain with every term multiplied by `alpha > 0`, re-judged under
    /// the same tolerance. Positive scaling preserves the sign of every
    /// slack.
    pub fn scaled(&self, alpha: T, tol: &Tolerance<T>) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| (t.name.clone(), t.value * alpha))
            .collect();
        let mut out = Self::from_chain(self.label.clone(), terms, tol);
        out.notes = self.notes.clone();
        out
    }
}

/// One nonnegative summand on the right-hand side of a refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementSummand<T> {
    pub name: String,
    pub value: T,
}

/// A gap refinement `gap >= sum of summands`, with
/// `slack = gap - total >= -gate` required for verification.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementTerms<T> {
    pub label: String,
    pub gap_name: String,
    pub gap: T,
    pub summands: Vec<RefinementSummand<T>>,
    pub total: T,
    pub slack: T,
    pub scale: T,
    pub gate: T,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl<T: Real> RefinementTerms<T> {
    pub fn build(
        label: impl Into<String>,
        gap_name: impl Into<String>,
        gap: T,
        summands: Vec<(String, T)>,
        tol: &Tolerance<T>,
    ) -> Self {
        let summands: Vec<RefinementSummand<T>> = summands
            .into_iter()
            .map(|(name, value)| RefinementSummand { name, value })
            .collect();
        let total = summands
            .iter()
            .fold(T::zero(), |acc, s| acc + s.value);
        let slack = gap - total;
        let scale = max_abs(
            summands
                .iter()
                .map(|s| s.value)
                .chain([gap, total]),
        );
        let gate = tol.gate(scale);
        let verdict = if slack >= -gate {
            Verdict::Verified
        } else {
            Verdict::Violated
        };
        Self {
            label: label.into(),
            gap_name: gap_name.into(),
            gap,
            summands,
            total,
            slack,
            scale,
            gate,
            verdict,
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_slacks_and_verdict() {
        let tol = Tolerance::default();
        let r = BoundReport::from_chain(
            "demo",
            vec![
                ("hi".into(), 0.4f64),
                ("mid".into(), 0.16),
                ("lo".into(), 0.1),
            ],
            &tol,
        );
        assert_eq!(r.verdict, Verdict::Verified);
        assert_eq!(r.slacks.len(), 2);
        assert!((r.slacks[0] - 0.24).abs() < 1e-15);
        assert_eq!(r.scale, 0.4);

        let bad = BoundReport::from_chain(
            "demo",
            vec![("hi".into(), 0.1f64), ("lo".into(), 0.2)],
            &tol,
        );
        assert_eq!(bad.verdict, Verdict::Violated);
        assert!(bad.min_slack() < 0.0);
    }

    #[test]
    fn scaling_preserves_verdicts_and_scales_terms() {
        let tol = Tolerance::default();
        let r = BoundReport::from_chain(
            "demo",
            vec![("hi".into(), 0.4f64), ("lo".into(), 0.1)],
            &tol,
        );
        for alpha in [0.5, 2.0, 10.0] {
            let s = r.scaled(alpha, &tol);
            assert_eq!(s.verdict, Verdict::Verified);
            assert_eq!(s.terms[0].value, 0.4 * alpha);
            assert_eq!(s.terms[1].value, 0.1 * alpha);
        }
    }

    #[test]
    fn refinement_slack_is_gap_minus_total() {
        let tol = Tolerance::default();
        let r = RefinementTerms::build(
            "demo",
            "gap",
            0.06f64,
            vec![("a".into(), 0.036), ("b".into(), 0.024)],
            &tol,
        );
        assert_eq!(r.verdict, Verdict::Verified);
        assert!(r.slack.abs() < 1e-15);
        let bad = RefinementTerms::build("demo", "gap", 0.01f64, vec![("a".into(), 0.02)], &tol);
        assert_eq!(bad.verdict, Verdict::Violated);
    }
}
