//! Independent dense univariate oracles for the sparse kernel: partition
//! generating functions, Euler products, q-binomials, and triangular
//! kernel inversion are recomputed with straightforward dense arithmetic
//! and compared coefficient by coefficient.

use std::sync::Arc;

use qident_core::inversion::{
    kernel_carlitz, kernel_qsquare_binomial, triangular_solve, TriangularKernel,
};
use qident_core::poly::SparsePoly;
use qident_core::qtools::{inv_poch_q, poch_infinite, q_binomial, qvec};
use qident_core::ratfun::RationalFunction;
use qident_core::scalar::{int, one, ExactScalar};
use qident_core::series::TruncatedSeries;
use qident_core::vars::{ExponentVector, TruncationProfile, VarRegistry};

const CAP: usize = 30;

/// Dense truncated power series in q with exact coefficients.
#[derive(Clone, PartialEq, Debug)]
struct Dense(Vec<ExactScalar>);

impl Dense {
    fn one() -> Self {
        let mut v = vec![int(0); CAP + 1];
        v[0] = int(1);
        Dense(v)
    }

    fn mul(&self, other: &Dense) -> Dense {
        let mut v = vec![int(0); CAP + 1];
        for i in 0..=CAP {
            for j in 0..=(CAP - i) {
                v[i + j] += self.0[i].clone() * other.0[j].clone();
            }
        }
        Dense(v)
    }

    /// `1 - c q^e` as a dense series.
    fn binomial(e: usize, c: ExactScalar) -> Dense {
        let mut v = vec![int(0); CAP + 1];
        v[0] = int(1);
        if e <= CAP {
            v[e] -= c;
        }
        Dense(v)
    }

    /// Long division: the reciprocal of a series with unit constant term.
    fn invert(&self) -> Dense {
        assert_eq!(self.0[0], int(1));
        let mut v = vec![int(0); CAP + 1];
        v[0] = int(1);
        for n in 1..=CAP {
            let mut acc = int(0);
            for k in 1..=n {
                acc += self.0[k].clone() * v[n - k].clone();
            }
            v[n] = -acc;
        }
        Dense(v)
    }
}

fn qreg() -> Arc<VarRegistry> {
    VarRegistry::q_only()
}

fn qprof(r: &Arc<VarRegistry>) -> TruncationProfile {
    TruncationProfile::caps(r, &[("q", CAP as i64)])
}

fn coeffs_of(s: &TruncatedSeries) -> Vec<ExactScalar> {
    let r = s.registry().clone();
    (0..=CAP as i64)
        .map(|e| {
            let mut ev = ExponentVector::zeros(r.len());
            ev.0[r.q_index()] = e;
            s.coeff(&ev).unwrap()
        })
        .collect()
}

#[test]
fn euler_product_matches_dense_expansion() {
    let r = qreg();
    let prof = qprof(&r);
    let sparse = poch_infinite(
        &TruncatedSeries::from_poly_entire(SparsePoly::q_pow(&r, one(), 1)),
        1,
        &prof,
    )
    .unwrap();
    let mut dense = Dense::one();
    for j in 1..=CAP {
        dense = dense.mul(&Dense::binomial(j, int(1)));
    }
    assert_eq!(coeffs_of(&sparse), dense.0);
    // pentagonal number sanity: nonzero coefficients are exactly +-1 at
    // k(3k +- 1)/2
    for (n, c) in dense.0.iter().enumerate() {
        let pentagonal = (1..=6i64).any(|k| {
            n as i64 == k * (3 * k - 1) / 2 || n as i64 == k * (3 * k + 1) / 2
        }) || n == 0;
        assert_eq!(*c != int(0), pentagonal, "coefficient at q^{n}");
    }
}

#[test]
fn partition_series_matches_dense_reciprocal() {
    let r = qreg();
    let prof = qprof(&r);
    let sparse = poch_infinite(
        &TruncatedSeries::from_poly_entire(SparsePoly::q_pow(&r, one(), 1)),
        1,
        &prof,
    )
    .unwrap()
    .invert(&prof)
    .unwrap();
    let mut dense = Dense::one();
    for j in 1..=CAP {
        dense = dense.mul(&Dense::binomial(j, int(1)).invert());
    }
    let got = coeffs_of(&sparse);
    assert_eq!(got, dense.0);
    // cross-check against tabulated partition numbers
    let table: [i64; 31] = [
        1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231, 297, 385, 490, 627,
        792, 1002, 1255, 1575, 1958, 2436, 3010, 3718, 4565, 5604,
    ];
    for (n, p) in table.iter().enumerate() {
        assert_eq!(got[n], int(*p), "p({n})");
    }
}

#[test]
fn finite_inverse_pochhammer_matches_dense() {
    let r = qreg();
    let prof = qprof(&r);
    for m in 0..8 {
        let sparse = inv_poch_q(&r, 1, m, &prof).unwrap();
        let mut dense = Dense::one();
        for j in 1..=m as usize {
            dense = dense.mul(&Dense::binomial(j, int(1)).invert());
        }
        assert_eq!(coeffs_of(&sparse), dense.0, "1/(q;q)_{m}");
    }
}

#[test]
fn q_binomials_match_pascal_recurrence() {
    // dense Pascal triangle: [n k]_q = [n-1 k-1]_q + q^k [n-1 k]_q
    let r = qreg();
    let n_max = 9usize;
    let mut rows: Vec<Vec<Dense>> = vec![vec![Dense::one()]];
    for n in 1..=n_max {
        let mut row = Vec::new();
        for k in 0..=n {
            let mut v = vec![int(0); CAP + 1];
            if k >= 1 {
                for (i, c) in rows[n - 1][k - 1].0.iter().enumerate() {
                    v[i] += c.clone();
                }
            }
            if k <= n - 1 {
                for (i, c) in rows[n - 1][k].0.iter().enumerate() {
                    if i + k <= CAP {
                        v[i + k] += c.clone();
                    }
                }
            }
            row.push(Dense(v));
        }
        rows.push(row);
    }
    for n in 0..=n_max {
        for k in 0..=n {
            let sparse = q_binomial(&r, n as i64, k as i64, 1);
            let got = coeffs_of(&TruncatedSeries::from_poly_entire(sparse));
            assert_eq!(got, rows[n][k].0, "[{n} {k}]_q");
        }
    }
}

#[test]
fn both_kernel_pairs_compose_to_identity() {
    let (f, g) = kernel_qsquare_binomial();
    assert!(f.composes_to_identity(&g, 10));
    assert!(g.composes_to_identity(&f, 10));
    let (f, g) = kernel_carlitz();
    assert!(f.composes_to_identity(&g, 10));
    assert!(g.composes_to_identity(&f, 10));
}

/// Deterministic pseudo-random rational-function sequences round-trip
/// through a triangular kernel and back.
#[test]
fn triangular_solve_round_trips() {
    let (f, g) = kernel_qsquare_binomial();
    round_trip_trials(&f, &g, 10);
    let (f, g) = kernel_carlitz();
    round_trip_trials(&f, &g, 10);
}

fn round_trip_trials(f: &TriangularKernel, g: &TriangularKernel, trials: u64) {
    let r = f.registry().clone();
    let mut state = 0x2545f4914f6cdd1du64;
    for trial in 0..trials {
        let size = 1 + (trial % 5) as usize;
        let beta: Vec<RationalFunction> = (0..size)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let c = ((state >> 33) % 13) as i64 - 6;
                let e = ((state >> 20) % 4) as i64;
                RationalFunction::from_poly(SparsePoly::q_pow(&r, int(c), e))
            })
            .collect();
        let alpha = f.apply(&beta);
        // solving with the same kernel recovers the input
        let back = triangular_solve(f, &alpha).unwrap();
        assert_eq!(beta, back, "round trip mismatch");
        // the inverse kernel reaches the same result directly
        let via_inverse = g.apply(&alpha);
        assert_eq!(beta, via_inverse, "inverse kernel mismatch");
        // and solving with the inverse kernel inverts its application
        let alpha2 = triangular_solve(g, &beta).unwrap();
        assert_eq!(alpha, alpha2, "reverse round trip mismatch");
    }
}

/// The series expansion of a rational function agrees with dense long
/// division of the expanded numerator by the expanded denominator.
#[test]
fn fraction_series_matches_dense_division() {
    let r = qreg();
    let prof = qprof(&r);
    // (1 + q + 3 q^4) / ((1-q)^2 (1-q^3) (1+ q^2/2))
    let num = SparsePoly::q_pow(&r, one(), 0)
        .add(&SparsePoly::q_pow(&r, one(), 1))
        .add(&SparsePoly::q_pow(&r, int(3), 4));
    let f = qident_core::qfrac::PochFrac::from_poly(num.clone())
        .div_factor(qvec(&r, 1), one())
        .unwrap()
        .div_factor(qvec(&r, 1), one())
        .unwrap()
        .div_factor(qvec(&r, 3), one())
        .unwrap()
        .div_factor(qvec(&r, 2), qident_core::scalar::ratio(-1, 2))
        .unwrap();
    let sparse = f.to_series(&prof).unwrap();

    let mut dense_num = vec![int(0); CAP + 1];
    dense_num[0] = int(1);
    dense_num[1] = int(1);
    dense_num[4] = int(3);
    let dense = Dense(dense_num)
        .mul(&Dense::binomial(1, int(1)).invert())
        .mul(&Dense::binomial(1, int(1)).invert())
        .mul(&Dense::binomial(3, int(1)).invert())
        .mul(&Dense::binomial(2, qident_core::scalar::ratio(-1, 2)).invert());
    assert_eq!(coeffs_of(&sparse), dense.0);

    // and the same value through the fully expanded rational function
    let rf = f.to_ratfun().unwrap();
    let den_series = TruncatedSeries::from_poly_entire(rf.den().clone());
    let via_rf = TruncatedSeries::from_poly_entire(rf.num().clone())
        .mul(&den_series.invert(&prof).unwrap())
        .unwrap();
    assert_eq!(coeffs_of(&via_rf), dense.0);
}
