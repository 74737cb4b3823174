//! Property tests for the exact series kernel: ring laws on the truncated
//! window, two-sided inverses, and substitution consistency.

use std::sync::Arc;

use proptest::prelude::*;

use qident_core::poly::SparsePoly;
use qident_core::scalar::{int, pow, ratio, ExactScalar};
use qident_core::series::{SeriesCmp, TruncatedSeries};
use qident_core::vars::{ExponentVector, TruncationProfile, VarRegistry};

fn reg() -> Arc<VarRegistry> {
    VarRegistry::with_params(&["a"])
}

fn profile(r: &Arc<VarRegistry>) -> TruncationProfile {
    TruncationProfile::caps(r, &[("a", 4), ("q", 6)])
}

/// A random Laurent-free polynomial in a and q with small support.
fn poly_strategy() -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec((0i64..=3, 0i64..=5, -4i64..=4), 0..6).prop_map(|terms| {
        let r = reg();
        let mut p = SparsePoly::zero(&r);
        for (ae, qe, c) in terms {
            let mut e = ExponentVector::zeros(r.len());
            e.0[r.index_of("a").unwrap()] = ae;
            e.0[r.q_index()] = qe;
            p = p.add(&SparsePoly::monomial(&r, int(c), e));
        }
        p
    })
}

fn series_of(p: &SparsePoly) -> TruncatedSeries {
    TruncatedSeries::from_poly_entire(p.clone()).truncate_caps(&profile(p.registry()))
}

fn assert_same(a: &TruncatedSeries, b: &TruncatedSeries) {
    match a.equal(b).unwrap() {
        SeriesCmp::Pass => {}
        other => panic!("series differ: {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Commutativity, associativity, distributivity, and the neutral
    /// elements, all on the truncated window.
    #[test]
    fn ring_laws(p1 in poly_strategy(), p2 in poly_strategy(), p3 in poly_strategy()) {
        let (a, b, c) = (series_of(&p1), series_of(&p2), series_of(&p3));
        let r = p1.registry();

        assert_same(&a.add(&b).unwrap(), &b.add(&a).unwrap());
        assert_same(
            &a.add(&b).unwrap().add(&c).unwrap(),
            &a.add(&b.add(&c).unwrap()).unwrap(),
        );
        assert_same(&a.mul(&b).unwrap(), &b.mul(&a).unwrap());
        assert_same(
            &a.mul(&b).unwrap().mul(&c).unwrap(),
            &a.mul(&b.mul(&c).unwrap()).unwrap(),
        );
        assert_same(
            &a.mul(&b.add(&c).unwrap()).unwrap(),
            &a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap(),
        );
        assert_same(&a.add(&TruncatedSeries::zero(r)).unwrap(), &a);
        assert_same(&a.mul(&TruncatedSeries::one(r)).unwrap(), &a);
        assert!(a.sub(&a).unwrap().is_zero());
        assert_same(&a.neg().neg(), &a);
    }
}

proptest! {
    /// Inverting a unit series is two-sided on the window.
    #[test]
    fn invert_is_two_sided(p in poly_strategy()) {
        let r = reg();
        let prof = profile(&r);
        // force a unit constant term and nonnegative support
        let unit = SparsePoly::one(&r).add(
            &p.filtered(|e| e.0.iter().any(|&x| x > 0)),
        );
        let s = TruncatedSeries::from_poly_entire(unit).truncate_caps(&prof);
        let inv = s.invert(&prof).unwrap();
        assert_same(&s.mul(&inv).unwrap(), &TruncatedSeries::one(&r).truncate_caps(&prof));
        assert_same(&inv.mul(&s).unwrap(), &TruncatedSeries::one(&r).truncate_caps(&prof));
    }

    /// Scalar substitution agrees with summing the a-graded coefficients
    /// weighted by powers of the value.
    #[test]
    fn substitution_matches_graded_sum(p in poly_strategy(), num in -3i64..=3) {
        let r = reg();
        let prof = profile(&r);
        let v = ratio(num, 7);
        let s = TruncatedSeries::from_poly_entire(p.clone());
        let substituted = s.substitute_scalar("a", &v).unwrap();
        let ai = r.index_of("a").unwrap();
        for qe in 0..=prof.max(r.q_index()) {
            let mut expect: ExactScalar = int(0);
            for (e, c) in p.terms() {
                if e.0[r.q_index()] == qe {
                    expect += c.clone() * pow(&v, e.0[ai]);
                }
            }
            // the substituted series stays over the same registry with the
            // substituted variable pinned at exponent zero
            let mut eq = ExponentVector::zeros(r.len());
            eq.0[r.q_index()] = qe;
            assert_eq!(substituted.coeff(&eq).unwrap(), expect);
        }
    }

    /// Multiplying back by the expanded denominator recovers the numerator:
    /// fraction-to-series expansion is exact on the window.
    #[test]
    fn fraction_expansion_times_denominator_is_numerator(
        p in poly_strategy(),
        es in prop::collection::vec((1i64..=3, -2i64..=2), 1..4),
    ) {
        let r = reg();
        let prof = profile(&r);
        let mut f = qident_core::qfrac::PochFrac::from_poly(p.clone());
        let mut den = SparsePoly::one(&r);
        for (e, cnum) in es {
            if cnum == 0 {
                continue;
            }
            let c = ratio(cnum, 2);
            let mut ev = ExponentVector::zeros(r.len());
            ev.0[r.q_index()] = e;
            f = f.div_factor(ev.clone(), c.clone()).unwrap();
            den = den.mul(&SparsePoly::one(&r).sub(&SparsePoly::monomial(&r, c, ev)));
        }
        let expanded = f.to_series(&prof).unwrap();
        let back = expanded.mul_poly(&den).unwrap();
        let direct = TruncatedSeries::from_poly_entire(p).truncate_caps(&prof);
        assert_same(&back, &direct);
    }
}
