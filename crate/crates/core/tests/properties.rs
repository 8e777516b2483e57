//! Property-based invariants: Jensen nonnegativity, permutation symmetry,
//! rearrangement round trips, ratio-family orderings, and modulus
//! monotonicity over randomized inputs.

use jengap::classic::{ratio_extremes, theorem1_bounds, two_point_bounds};
use jengap::refined::{prefix_suffix_ratios, theorem2_bounds, theorem6_uniform_q_bounds};
use jengap::{
    increasing_rearrangement, jensen_functional, FunctionSpec64, Instance64, Interval64,
    ModulusSpec64, Tolerance64, Verdict, WeightVector64,
};
use proptest::prelude::*;

fn normalize(raw: Vec<f64>) -> Vec<f64> {
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / sum).collect()
}

fn catalog_function() -> impl Strategy<Value = FunctionSpec64> {
    prop_oneof![
        Just(FunctionSpec64::square()),
        Just(FunctionSpec64::exp()),
        Just(FunctionSpec64::xlogx()),
        (1.0..4.0f64).prop_map(|r| FunctionSpec64::power(r).unwrap()),
        (2.0..5.0f64).prop_map(|r| FunctionSpec64::abs_power(r).unwrap()),
    ]
}

/// Points inside [0.1, 1.1], which every catalog kind accepts.
fn points(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1..1.1f64, n)
}

fn nonneg_weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..1.0f64, n).prop_map(|mut raw| {
        // Guard against the all-zero draw.
        raw[0] += 1e-3;
        normalize(raw)
    })
}

fn positive_weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05..1.0f64, n).prop_map(normalize)
}

fn interval() -> Interval64 {
    Interval64::new(0.1, 1.1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Jensen's inequality: nonnegative weights give a nonnegative gap.
    #[test]
    fn jensen_functional_is_nonnegative(
        f in catalog_function(),
        (x, w) in (2usize..8).prop_flat_map(|n| (points(n), nonneg_weights(n))),
    ) {
        let w = WeightVector64::new(w).unwrap();
        let j = jensen_functional(&f, &x, &w).unwrap();
        let tol = Tolerance64::default();
        prop_assert!(j >= -tol.gate(1.0), "J = {j} for {}", f.name());
    }

    /// Applying one permutation to both x and w leaves the functional
    /// unchanged up to reassociation.
    #[test]
    fn jensen_functional_is_permutation_invariant(
        f in catalog_function(),
        (x, w, rot) in (2usize..8).prop_flat_map(|n| (points(n), nonneg_weights(n), 0..n)),
    ) {
        let base = jensen_functional(&f, &x, &WeightVector64::new(w.clone()).unwrap()).unwrap();
        let mut xr = x;
        let mut wr = w;
        xr.rotate_left(rot);
        wr.rotate_left(rot);
        let rotated = jensen_functional(&f, &xr, &WeightVector64::new(wr).unwrap()).unwrap();
        prop_assert!((base - rotated).abs() <= 1e-12 * (1.0 + base.abs()));
    }

    /// For the square the functional is the weighted variance.
    #[test]
    fn square_matches_variance_identity(
        (x, w) in (2usize..8).prop_flat_map(|n| (points(n), nonneg_weights(n))),
    ) {
        let wv = WeightVector64::new(w).unwrap();
        let j = jensen_functional(&FunctionSpec64::square(), &x, &wv).unwrap();
        let mean: f64 = x.iter().zip(wv.entries()).map(|(xi, wi)| wi * xi).sum();
        let second: f64 = x.iter().zip(wv.entries()).map(|(xi, wi)| wi * xi * xi).sum();
        let variance = second - mean * mean;
        prop_assert!((j - variance).abs() <= 1e-12 * (1.0 + variance.abs()));
    }

    /// Rearranging and then inverting the permutation is the identity,
    /// bit for bit.
    #[test]
    fn rearrangement_round_trips(
        (x, p, q) in (2usize..10).prop_flat_map(|n| {
            (points(n), nonneg_weights(n), positive_weights(n))
        }),
    ) {
        let p = WeightVector64::new(p).unwrap();
        let q = WeightVector64::new(q).unwrap();
        let r = increasing_rearrangement(&x, &p, &q).unwrap();
        prop_assert!(r.x().windows(2).all(|w| w[0] <= w[1]));
        let (xr, pr, qr) = r.invert();
        prop_assert_eq!(xr, x);
        prop_assert_eq!(pr, p.entries().to_vec());
        prop_assert_eq!(qr, q.entries().to_vec());
    }

    /// Power moduli are nondecreasing on a 1000-point grid.
    #[test]
    fn modulus_is_nondecreasing(c in 1e-6..10.0f64, r in 2.0..6.0f64, width in 0.1..10.0f64) {
        let phi = ModulusSpec64::new(c, r).unwrap();
        prop_assert!(phi.is_nondecreasing_on(width, 1000));
    }

    /// Pointwise ratio extremes bracket every ratio exactly.
    #[test]
    fn ratio_extremes_bracket_all_ratios(
        (p, q) in (2usize..8).prop_flat_map(|n| (nonneg_weights(n), positive_weights(n))),
    ) {
        let p = WeightVector64::new(p).unwrap();
        let q = WeightVector64::new(q).unwrap();
        let r = ratio_extremes(&p, &q).unwrap();
        for (pi, qi) in p.entries().iter().zip(q.entries()) {
            let ratio = pi / qi;
            prop_assert!(r.m <= ratio && ratio <= r.big_m);
        }
        prop_assert!(r.m <= 1.0 && 1.0 <= r.big_m);
        // Both extremes hit one only when the tuples coincide.
        if r.m == 1.0 && r.big_m == 1.0 {
            prop_assert_eq!(p.entries(), q.entries());
        }
    }

    /// Cumulative extremes sit inside the pointwise ones and pin the
    /// total-sum ratios to exactly one.
    #[test]
    fn cumulative_extremes_tighten_pointwise_ones(
        (x, p, q) in (2usize..8).prop_flat_map(|n| {
            (points(n), nonneg_weights(n), positive_weights(n))
        }),
    ) {
        let p = WeightVector64::new(p).unwrap();
        let q = WeightVector64::new(q).unwrap();
        let rearranged = increasing_rearrangement(&x, &p, &q).unwrap();
        let pointwise = ratio_extremes(rearranged.p(), rearranged.q()).unwrap();
        let s = prefix_suffix_ratios(&rearranged).unwrap();
        let n = x.len();
        prop_assert_eq!(s.prefix[n - 1], 1.0);
        prop_assert_eq!(s.suffix[0], 1.0);
        prop_assert!(s.m_star <= 1.0 && 1.0 <= s.big_m_star);
        let gate = Tolerance64::default().gate(pointwise.big_m);
        prop_assert!(pointwise.m <= s.m_star + gate);
        prop_assert!(s.big_m_star <= pointwise.big_m + gate);
        if n == 2 {
            // The families reduce to the pointwise ratios plus ones.
            prop_assert_eq!(s.m_star, pointwise.m);
            prop_assert_eq!(s.big_m_star, pointwise.big_m);
        }
    }

    /// Both sandwiches verify on random admissible instances.
    #[test]
    fn sandwiches_verify(
        f in catalog_function(),
        (x, p, q) in (2usize..8).prop_flat_map(|n| {
            (points(n), nonneg_weights(n), positive_weights(n))
        }),
    ) {
        let tol = Tolerance64::default();
        let inst = Instance64::new(
            x,
            WeightVector64::new(p).unwrap(),
            WeightVector64::new(q).unwrap(),
            f,
            None,
            interval(),
        )
        .unwrap();
        let r1 = theorem1_bounds(&inst, &tol).unwrap();
        prop_assert_eq!(r1.verdict, Verdict::Verified);
        if inst.p() != inst.q() {
            let r2 = theorem2_bounds(&inst, &tol).unwrap();
            prop_assert_eq!(r2.verdict, Verdict::Verified);
            // The cumulative chain is at least as tight as the pointwise one.
            prop_assert!(r2.terms[0].value <= r1.terms[0].value + r1.gate);
            prop_assert!(r2.terms[2].value >= r1.terms[2].value - r1.gate);
        }
    }

    /// The two-point chain is the general sandwich on the induced
    /// instance, term by term.
    #[test]
    fn two_point_equals_general_sandwich(p1 in 0.01..0.99f64, a in 0.1..0.5f64, w in 0.1..1.0f64) {
        let tol = Tolerance64::default();
        let b = a + w;
        let f = FunctionSpec64::exp();
        let direct = two_point_bounds(&f, a, b, p1, &tol).unwrap();
        let inst = Instance64::new(
            vec![a, b],
            WeightVector64::new(vec![p1, 1.0 - p1]).unwrap(),
            WeightVector64::new(vec![0.5, 0.5]).unwrap(),
            f,
            None,
            Interval64::new(a, b).unwrap(),
        )
        .unwrap();
        let general = theorem1_bounds(&inst, &tol).unwrap();
        for (d, g) in direct.terms.iter().zip(&general.terms) {
            prop_assert!((d.value - g.value).abs() <= 1e-12 * (1.0 + g.value.abs()));
        }
    }

    /// The uniform-weight chain nests inside the entrywise envelope.
    #[test]
    fn theorem6_extremes_nest_inside_entry_envelope(
        (x, p) in (3usize..8).prop_flat_map(|n| (points(n), nonneg_weights(n))),
    ) {
        let tol = Tolerance64::default();
        let n = x.len() as f64;
        let p = WeightVector64::new(p).unwrap();
        let r = theorem6_uniform_q_bounds(&FunctionSpec64::square(), &x, &p, &tol).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Verified);
        let rearranged = increasing_rearrangement(
            &x,
            &p,
            &WeightVector64::uniform(x.len()).unwrap(),
        )
        .unwrap();
        let s = prefix_suffix_ratios(&rearranged).unwrap();
        let gate = Tolerance64::default().gate(n * p.max_entry());
        prop_assert!(s.m_star >= n * p.min_entry() - gate);
        prop_assert!(s.big_m_star <= n * p.max_entry() + gate);
    }
}
