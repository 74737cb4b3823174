//! Triangular matrix-inversion pairs and the expansion coefficients of
//! `(a x; q^2)_inf / (x; q)_inf` as a power series in `x`.

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::poly::SparsePoly;
use crate::qfrac::PochFrac;
use crate::qtools::{frac_div_poch, poly_poch, q_binomial, qvec, tau_factor, var_vec};
use crate::ratfun::RationalFunction;
use crate::scalar;
use crate::series::TruncatedSeries;
use crate::vars::{AlgebraError, TruncationProfile, VarRegistry};

/// A lower-triangular kernel of exact rational-function entries. Entries
/// are produced in factored-denominator form so sums over a row stay on a
/// least common denominator instead of blowing up by cross-multiplication.
pub struct TriangularKernel {
    pub name: &'static str,
    registry: Arc<VarRegistry>,
    entry_fn: Box<dyn Fn(i64, i64) -> PochFrac + Send + Sync>,
}

impl TriangularKernel {
    pub fn new<F>(name: &'static str, registry: Arc<VarRegistry>, entry_fn: F) -> Self
    where
        F: Fn(i64, i64) -> PochFrac + Send + Sync + 'static,
    {
        TriangularKernel {
            name,
            registry,
            entry_fn: Box::new(entry_fn),
        }
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.registry
    }

    /// Entry at row `n`, column `k`, in factored form; zero outside
    /// `0 <= k <= n`.
    pub fn entry_frac(&self, n: i64, k: i64) -> PochFrac {
        if k < 0 || k > n || n < 0 {
            PochFrac::zero(&self.registry)
        } else {
            (self.entry_fn)(n, k)
        }
    }

    /// Entry at row `n`, column `k`; zero outside `0 <= k <= n`.
    pub fn entry(&self, n: i64, k: i64) -> RationalFunction {
        self.entry_frac(n, k)
            .to_ratfun()
            .expect("kernel entry has a nonzero denominator")
    }

    /// `alpha_n = sum_k entry(n, k) * beta_k`.
    pub fn apply(&self, beta: &[RationalFunction]) -> Vec<RationalFunction> {
        (0..beta.len() as i64)
            .map(|n| {
                let mut acc = RationalFunction::zero(&self.registry);
                for k in 0..=n {
                    acc = acc.add(&self.entry(n, k).mul(&beta[k as usize]));
                }
                acc
            })
            .collect()
    }

    /// Is `self * other` the identity matrix on the leading `size x size`
    /// block?
    pub fn composes_to_identity(&self, other: &Self, size: i64) -> bool {
        for n in 0..size {
            for k in 0..=n {
                let mut acc = PochFrac::zero(&self.registry);
                for j in k..=n {
                    acc = acc.add(&self.entry_frac(n, j).mul(&other.entry_frac(j, k)));
                }
                let expect = if n == k {
                    PochFrac::one(&self.registry)
                } else {
                    PochFrac::zero(&self.registry)
                };
                if !acc.equal(&expect) {
                    return false;
                }
            }
        }
        true
    }
}

/// Solve `alpha_n = sum_k kernel(n, k) * beta_k` for `beta` by forward
/// substitution.
pub fn triangular_solve(
    kernel: &TriangularKernel,
    alpha: &[RationalFunction],
) -> Result<Vec<RationalFunction>, AlgebraError> {
    let mut beta: Vec<RationalFunction> = Vec::with_capacity(alpha.len());
    for n in 0..alpha.len() as i64 {
        let mut rest = alpha[n as usize].clone();
        for k in 0..n {
            rest = rest.sub(&kernel.entry(n, k).mul(&beta[k as usize]));
        }
        let diag = kernel.entry(n, n);
        beta.push(rest.div(&diag)?);
    }
    Ok(beta)
}

/// The Gaussian-binomial pair on base `q^2`:
/// `M[n,k] = [n k]_{q^2}` and `M^{-1}[n,k] = [n k]_{q^2} * tau_2(n-k)`.
pub fn kernel_qsquare_binomial() -> (TriangularKernel, TriangularKernel) {
    let r = VarRegistry::q_only();
    let r1 = r.clone();
    let fwd = TriangularKernel::new("qsquare-binomial", r.clone(), move |n, k| {
        PochFrac::from_poly(q_binomial(&r1, n, k, 2))
    });
    let r2 = r.clone();
    let inv = TriangularKernel::new("qsquare-binomial-inverse", r, move |n, k| {
        PochFrac::from_poly(q_binomial(&r2, n, k, 2).mul(&tau_factor(&r2, 2, n - k)))
    });
    (fwd, inv)
}

/// The Carlitz pair with symbolic parameter `a`:
/// `M[n,k] = (q^{-n}, a q^n; q)_k / (q, aq; q)_k * q^k` and
/// `M^{-1}[n,k] = (a, q^{-n}; q)_k / (q, a q^{1+n}; q)_k
///               * (1 - a q^{2k}) / (1 - a) * q^{kn}`.
pub fn kernel_carlitz() -> (TriangularKernel, TriangularKernel) {
    let r = VarRegistry::with_params(&["a"]);
    let a = SparsePoly::var(&r, "a");
    let q1 = |reg: &Arc<VarRegistry>, e: i64| SparsePoly::q_pow(reg, scalar::one(), e);

    let r1 = r.clone();
    let a1 = a.clone();
    let fwd = TriangularKernel::new("carlitz", r.clone(), move |n, k| {
        let num = poly_poch(&q1(&r1, -n), 1, k)
            .mul(&poly_poch(&a1.mul(&q1(&r1, n)), 1, k))
            .mul(&q1(&r1, k));
        let f = PochFrac::from_poly(num);
        let f = frac_div_poch(&f, &qvec(&r1, 1), &scalar::one(), 1, k)
            .expect("nonvanishing lower factors");
        let mut aq = var_vec(&r1, "a", 1);
        aq.0[r1.q_index()] = 1;
        frac_div_poch(&f, &aq, &scalar::one(), 1, k).expect("nonvanishing lower factors")
    });

    let r2 = r.clone();
    let inv = TriangularKernel::new("carlitz-inverse", r, move |n, k| {
        let num = poly_poch(&a, 1, k)
            .mul(&poly_poch(&q1(&r2, -n), 1, k))
            .mul(&SparsePoly::one(&r2).sub(&a.mul(&q1(&r2, 2 * k))))
            .mul(&q1(&r2, k * n));
        let f = PochFrac::from_poly(num);
        let f = frac_div_poch(&f, &qvec(&r2, 1), &scalar::one(), 1, k)
            .expect("nonvanishing lower factors");
        let mut aq = var_vec(&r2, "a", 1);
        aq.0[r2.q_index()] = 1 + n;
        let f = frac_div_poch(&f, &aq, &scalar::one(), 1, k).expect("nonvanishing lower factors");
        f.div_factor(var_vec(&r2, "a", 1), scalar::one())
            .expect("nonvanishing lower factors")
    });
    (fwd, inv)
}

/// Closed form of the n-th expansion coefficient of
/// `(a x; q^2)_inf / (x; q)_inf`, as an exact fraction over the registry
/// `[a, q]`:
///
/// `lambda_n(a) = (-a)^n q^{n(n-1)} / (q^2; q^2)_n
///     * sum_{k=0}^n (q^{-n}; q)_k (-q^{-n}; q)_k / (q; q)_k * (q^2/a)^k`.
///
/// The `a^{-k}` powers fold against the `(-a)^n` prefactor, so the net
/// `a`-exponents lie in `[0, n]`.
pub fn lambda_frac(n: i64) -> PochFrac {
    assert!(n >= 0);
    let r = VarRegistry::with_params(&["a"]);
    let qn_neg = SparsePoly::q_pow(&r, scalar::one(), -n);
    let mut sum = PochFrac::zero(&r);
    for k in 0..=n {
        let mut arg_e = var_vec(&r, "a", -k);
        arg_e.0[r.q_index()] = 2 * k;
        let num = poly_poch(&qn_neg, 1, k)
            .mul(&poly_poch(&qn_neg.neg(), 1, k))
            .mul(&SparsePoly::monomial(&r, scalar::one(), arg_e));
        let mut term = PochFrac::from_poly(num);
        term = frac_div_poch(&term, &qvec(&r, 1), &scalar::one(), 1, k).expect("(q;q)_k factors");
        sum = sum.add(&term);
    }
    let mut pre_e = var_vec(&r, "a", n);
    pre_e.0[r.q_index()] = n * (n - 1);
    let pre = SparsePoly::monomial(&r, scalar::neg_one_pow(n), pre_e);
    let scaled = sum.mul_poly(&pre);
    frac_div_poch(&scaled, &qvec(&r, 2), &scalar::one(), 2, n).expect("(q^2;q^2)_n factors")
}

/// `lambda_frac(n)` expanded as a truncated series over `[a, q]`.
pub fn lambda_series(n: i64, profile: &TruncationProfile) -> Result<TruncatedSeries, AlgebraError> {
    lambda_frac(n).to_series(profile)
}

/// Independent oracle: the coefficient of `x^n` in the exact truncated
/// quotient `(a x; q^2)_inf * invert((x; q)_inf)`, computed with `x` as a
/// registry variable and then re-embedded over `[a, q]`.
pub fn lambda_oracle(n: i64, profile: &TruncationProfile) -> Result<TruncatedSeries, AlgebraError> {
    assert!(n >= 0);
    let outer = VarRegistry::with_params(&["a"]);
    let inner = VarRegistry::with_params(&["a", "x"]);
    let p = TruncationProfile::caps(
        &inner,
        &[
            ("a", profile.max(outer.index_of("a").unwrap())),
            ("x", n),
            ("q", profile.max(outer.q_index())),
        ],
    );
    let ax = SparsePoly::var(&inner, "a").mul(&SparsePoly::var(&inner, "x"));
    let x = SparsePoly::var(&inner, "x");
    let num = crate::qtools::poch_infinite(&TruncatedSeries::from_poly_entire(ax), 2, &p)?;
    let den = crate::qtools::poch_infinite(&TruncatedSeries::from_poly_entire(x), 1, &p)?;
    let quotient = num.mul(&den.invert(&p)?)?;
    quotient.coeff_of_var_power("x", n)?.embed(&outer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use crate::series::SeriesCmp;

    #[test]
    fn qsquare_pair_composes_to_identity() {
        let (fwd, inv) = kernel_qsquare_binomial();
        assert!(fwd.composes_to_identity(&inv, 7));
        assert!(inv.composes_to_identity(&fwd, 7));
    }

    #[test]
    fn carlitz_pair_composes_to_identity() {
        let (fwd, inv) = kernel_carlitz();
        assert!(fwd.composes_to_identity(&inv, 6));
        assert!(inv.composes_to_identity(&fwd, 6));
    }

    #[test]
    fn kernel_diagonals_and_first_column() {
        let (fwd, inv) = kernel_carlitz();
        let one = RationalFunction::one(fwd.registry());
        for n in 0..=5 {
            assert_eq!(fwd.entry(n, 0), one);
            assert_eq!(inv.entry(n, 0), one);
        }
        let (fwd2, inv2) = kernel_qsquare_binomial();
        for n in 0..=5 {
            assert_eq!(fwd2.entry(n, n), RationalFunction::one(fwd2.registry()));
            assert_eq!(inv2.entry(n, n), RationalFunction::one(fwd2.registry()));
        }
    }

    #[test]
    fn solve_round_trip_on_rational_sequences() {
        let (fwd, _) = kernel_qsquare_binomial();
        let r = fwd.registry().clone();
        // a deterministic pseudo-random rational sequence
        let beta: Vec<RationalFunction> = (0..8)
            .map(|i| {
                RationalFunction::from_poly(SparsePoly::constant(&r, ratio(3 * i + 2, 2 * i + 5)))
            })
            .collect();
        let alpha = fwd.apply(&beta);
        let solved = triangular_solve(&fwd, &alpha).unwrap();
        assert_eq!(solved, beta);
    }

    #[test]
    fn lambda_small_cases() {
        let r = VarRegistry::with_params(&["a"]);
        // lambda_0 = 1
        assert!(lambda_frac(0).equal(&PochFrac::one(&r)));
        // lambda_1 = (1 + q - a)/(1 - q^2)
        let num = SparsePoly::one(&r)
            .add(&SparsePoly::q_pow(&r, int(1), 1))
            .sub(&SparsePoly::var(&r, "a"));
        let expect = frac_div_poch(&PochFrac::from_poly(num), &qvec(&r, 2), &scalar::one(), 2, 1)
            .unwrap();
        assert!(lambda_frac(1).equal(&expect));
    }

    #[test]
    fn lambda_matches_oracle_small() {
        let r = VarRegistry::with_params(&["a"]);
        let p = TruncationProfile::caps(&r, &[("a", 6), ("q", 12)]);
        for n in 0..=5 {
            let closed = lambda_series(n, &p).unwrap();
            let oracle = lambda_oracle(n, &p).unwrap();
            assert_eq!(closed.equal(&oracle).unwrap(), SeriesCmp::Pass, "n = {n}");
        }
    }

    #[test]
    fn lambda_solves_the_defining_triangular_relation() {
        // With alpha_n = (-q;q)_n a^{-n} and the q^2-binomial kernel, the
        // solution is beta_n = (q^2;q^2)_n lambda_n(a) a^{-n}.
        let (fwd, _) = kernel_qsquare_binomial();
        let rq = fwd.registry().clone();
        let ra = VarRegistry::with_params(&["a"]);
        let neg_q = SparsePoly::q_pow(&rq, -int(1), 1);
        let alpha: Vec<RationalFunction> = (0..=6)
            .map(|n| {
                RationalFunction::from_poly(poly_poch(&neg_q, 1, n).embed(&ra).unwrap())
                    .mul(&RationalFunction::from_poly(SparsePoly::var_pow(
                        &ra,
                        scalar::one(),
                        "a",
                        -n,
                    )))
            })
            .collect();
        // lift the kernel into the [a, q] registry
        let ra2 = ra.clone();
        let lifted = TriangularKernel::new("lifted", ra.clone(), move |n, k| {
            PochFrac::from_poly(q_binomial(&VarRegistry::q_only(), n, k, 2).embed(&ra2).unwrap())
        });
        let beta = triangular_solve(&lifted, &alpha).unwrap();
        for n in 0..=6i64 {
            let lam = lambda_frac(n).to_ratfun().unwrap();
            let expect = RationalFunction::from_poly(
                poly_poch(&SparsePoly::q_pow(&rq, int(1), 2), 2, n).embed(&ra).unwrap(),
            )
            .mul(&lam)
            .mul(&RationalFunction::from_poly(SparsePoly::var_pow(
                &ra,
                scalar::one(),
                "a",
                -n,
            )));
            assert_eq!(beta[n as usize], expect, "n = {n}");
        }
    }
}
