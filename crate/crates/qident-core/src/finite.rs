//! The two-parameter terminating sum
//! `T_{r,n}(s) = sum_{k=0}^n (q^{-2n}; q^2)_k / ((q; q)_k (q^{1+r-n}; q)_k)
//!              * q^{2k} y^{-k}` with `y = q^s`,
//! its second-order recurrence, its closed forms at `s = 1` and `s = 0`,
//! and the companion finite q-identity.

use alloc::sync::Arc;

use crate::poly::SparsePoly;
use crate::qfrac::PochFrac;
use crate::qtools::{frac_div_poch, poly_poch, q_binomial, qvec, var_vec};
use crate::scalar::{self, ExactScalar};
use crate::vars::{AlgebraError, ExponentVector, VarRegistry};

/// How the `s` parameter is treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SMode {
    /// `y = q^s` is a fresh symbolic variable; result lives over `[y, q]`.
    SymbolicY,
    /// `s` is a concrete integer; result lives over `[q]`.
    Integer(i64),
}

impl SMode {
    fn registry(&self) -> Arc<VarRegistry> {
        match self {
            SMode::SymbolicY => VarRegistry::with_params(&["y"]),
            SMode::Integer(_) => VarRegistry::q_only(),
        }
    }

    /// The monomial standing for `y^{-k}`.
    fn y_pow(&self, registry: &Arc<VarRegistry>, k: i64) -> SparsePoly {
        match self {
            SMode::SymbolicY => SparsePoly::monomial(registry, scalar::one(), var_vec(registry, "y", -k)),
            SMode::Integer(s) => SparsePoly::q_pow(registry, scalar::one(), -s * k),
        }
    }
}

/// The sum itself, as an exact fraction with factored denominator.
/// Requires `r >= n` so no denominator factor `(q^{1+r-n+j}; q)` vanishes.
pub fn t_sum(r: i64, n: i64, s: SMode) -> Result<PochFrac, AlgebraError> {
    assert!(n >= 0);
    if r < n {
        return Err(AlgebraError::VanishingFactor);
    }
    let registry = s.registry();
    let q2n_neg = SparsePoly::q_pow(&registry, scalar::one(), -2 * n);
    let mut acc = PochFrac::zero(&registry);
    for k in 0..=n {
        let num = poly_poch(&q2n_neg, 2, k)
            .mul(&SparsePoly::q_pow(&registry, scalar::one(), 2 * k))
            .mul(&s.y_pow(&registry, k));
        let mut term = PochFrac::from_poly(num);
        term = frac_div_poch(&term, &qvec(&registry, 1), &scalar::one(), 1, k)?;
        term = frac_div_poch(&term, &qvec(&registry, 1 + r - n), &scalar::one(), 1, k)?;
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// The three polynomial coefficients of the recurrence
/// `c0 * T_{r,n} + c1 * T_{r,n+1} + c2 * T_{r,n+2} = 0`
/// with `y = q^s` symbolic:
///
/// `c0 = y^{-1} (1 - q^{2n+2}) (y^{-1} + q^{r+n})`
/// `c1 = q^n (q^n - q^r) (-q^{2n+1} + q^{r+n} + y^{-1} + y^{-1} q^{-1})`
/// `c2 = q^{2n} (q^n - q^r) (q^{n+1} - q^r)`
pub fn t_recurrence_coeffs(registry: &Arc<VarRegistry>, r: i64, n: i64) -> [SparsePoly; 3] {
    let q = |e: i64| SparsePoly::q_pow(registry, scalar::one(), e);
    let y_inv = SparsePoly::monomial(registry, scalar::one(), var_vec(registry, "y", -1));
    let c0 = y_inv
        .mul(&SparsePoly::one(registry).sub(&q(2 * n + 2)))
        .mul(&y_inv.add(&q(r + n)));
    let c1 = q(n).mul(&q(n).sub(&q(r))).mul(
        &q(2 * n + 1)
            .neg()
            .add(&q(r + n))
            .add(&y_inv)
            .add(&y_inv.mul(&q(-1))),
    );
    let c2 = q(2 * n)
        .mul(&q(n).sub(&q(r)))
        .mul(&q(n + 1).sub(&q(r)));
    [c0, c1, c2]
}

/// Residual of the recurrence at `(r, n)` with `y` symbolic; zero iff the
/// recurrence holds. `mutate` bumps the chosen coefficient polynomial by
/// `+1` (used by the harness-sensitivity tests). Requires `r >= n + 2`.
pub fn t_recurrence_residual(
    r: i64,
    n: i64,
    mutate: Option<usize>,
) -> Result<PochFrac, AlgebraError> {
    assert!(r >= n + 2, "need r >= n + 2 to keep all denominators nonzero");
    let mode = SMode::SymbolicY;
    let registry = mode.registry();
    let mut coeffs = t_recurrence_coeffs(&registry, r, n);
    if let Some(i) = mutate {
        coeffs[i] = coeffs[i].add(&SparsePoly::one(&registry));
    }
    let mut acc = PochFrac::zero(&registry);
    for (j, c) in coeffs.iter().enumerate() {
        let t = t_sum(r, n + j as i64, mode)?;
        acc = acc.add(&t.mul_poly(c));
    }
    Ok(acc)
}

/// Closed form at `s = 1`:
/// `T_{r,n}(1) = (-q^{1+r}; q)_n / (q^{1+r-n}; q)_n * (-1)^n q^{-n^2}`.
/// Requires `r >= n + 1`... `r >= n` suffices for nonvanishing factors,
/// callers keep `r >= n + 1` to match the sum's own guard comfortably.
pub fn t_closed_s1(r: i64, n: i64) -> Result<PochFrac, AlgebraError> {
    let registry = VarRegistry::q_only();
    let num = poly_poch(&SparsePoly::q_pow(&registry, -scalar::one(), 1 + r), 1, n)
        .mul(&SparsePoly::q_pow(&registry, scalar::neg_one_pow(n), -n * n));
    frac_div_poch(
        &PochFrac::from_poly(num),
        &qvec(&registry, 1 + r - n),
        &scalar::one(),
        1,
        n,
    )
}

/// Closed form at `s = 0`:
/// `T_{r,n}(0) = (q^n + q^r)/(1 + q^{r+n})
///             * (-q^{1+r}; q)_n / (q^{1+r-n}; q)_n * (-1)^n q^{-n^2+n}`.
pub fn t_closed_s0(r: i64, n: i64) -> Result<PochFrac, AlgebraError> {
    let registry = VarRegistry::q_only();
    let q = |e: i64| SparsePoly::q_pow(&registry, scalar::one(), e);
    let num = poly_poch(&SparsePoly::q_pow(&registry, -scalar::one(), 1 + r), 1, n)
        .mul(&q(n).add(&q(r)))
        .mul(&SparsePoly::q_pow(&registry, scalar::neg_one_pow(n), -n * n + n));
    let f = frac_div_poch(
        &PochFrac::from_poly(num),
        &qvec(&registry, 1 + r - n),
        &scalar::one(),
        1,
        n,
    )?;
    // divide by 1 + q^{r+n} = 1 - (-1) q^{r+n}
    f.div_factor(qvec(&registry, r + n), -scalar::one())
}

/// Check `t_sum` against a closed form for one `(r, n, s)`.
pub fn t_closed_matches(r: i64, n: i64, s: i64) -> Result<bool, AlgebraError> {
    let direct = t_sum(r, n, SMode::Integer(s))?;
    let closed = match s {
        1 => t_closed_s1(r, n)?,
        0 => t_closed_s0(r, n)?,
        _ => return Err(AlgebraError::UnknownVariable(alloc::string::String::from("s"))),
    };
    Ok(direct.equal(&closed))
}

/// Both sides of the finite identity, as exact fractions over `[a, q]`:
///
/// `(-a)^M q^{M^2} sum_k (q^{-2M}; q^2)_k / (q; q)_k * (q/a)^k
///  = sum_k [M k]_q (a; q)_k q^{k(k+1)/2}`.
pub fn finite_q_identity_sides(m: i64) -> Result<(PochFrac, PochFrac), AlgebraError> {
    assert!(m >= 0);
    let registry = VarRegistry::with_params(&["a"]);
    let q2m_neg = SparsePoly::q_pow(&registry, scalar::one(), -2 * m);
    let mut lhs = PochFrac::zero(&registry);
    for k in 0..=m {
        let mut arg = var_vec(&registry, "a", -k);
        arg.0[registry.q_index()] = k;
        let num = poly_poch(&q2m_neg, 2, k).mul(&SparsePoly::monomial(
            &registry,
            scalar::one(),
            arg,
        ));
        let term = frac_div_poch(
            &PochFrac::from_poly(num),
            &qvec(&registry, 1),
            &scalar::one(),
            1,
            k,
        )?;
        lhs = lhs.add(&term);
    }
    let mut pre = var_vec(&registry, "a", m);
    pre.0[registry.q_index()] = m * m;
    lhs = lhs.mul_poly(&SparsePoly::monomial(&registry, scalar::neg_one_pow(m), pre));

    let a = SparsePoly::var(&registry, "a");
    let mut rhs = PochFrac::zero(&registry);
    for k in 0..=m {
        let term = q_binomial(&registry, m, k, 1)
            .mul(&poly_poch(&a, 1, k))
            .mul(&SparsePoly::q_pow(&registry, scalar::one(), k * (k + 1) / 2));
        rhs = rhs.add(&PochFrac::from_poly(term));
    }
    Ok((lhs, rhs))
}

/// Witness-producing equality check for a pair of fractions.
pub fn frac_equal_witness(
    lhs: &PochFrac,
    rhs: &PochFrac,
) -> Option<(ExponentVector, ExactScalar, ExactScalar)> {
    lhs.difference_witness(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_sum_n_zero_is_one() {
        let r = SMode::SymbolicY.registry();
        assert!(t_sum(5, 0, SMode::SymbolicY).unwrap().equal(&PochFrac::one(&r)));
        let rq = VarRegistry::q_only();
        assert!(t_sum(3, 0, SMode::Integer(1)).unwrap().equal(&PochFrac::one(&rq)));
    }

    #[test]
    fn symbolic_specializes_to_integer_s() {
        for n in 0..=5 {
            for r in (n + 1)..=(n + 4) {
                for s in [0i64, 1, 2] {
                    let sym = t_sum(r, n, SMode::SymbolicY).unwrap().to_ratfun().unwrap();
                    let qreg = VarRegistry::q_only();
                    // substitute y -> q^s in both numerator and denominator
                    let subs = |p: &SparsePoly| {
                        p.substitute_monomial("y", &scalar::one(), &qvec(sym.num().registry(), s))
                            .unwrap()
                            .embed(&qreg)
                            .unwrap()
                    };
                    let specialized =
                        crate::ratfun::RationalFunction::new(subs(sym.num()), subs(sym.den()))
                            .unwrap();
                    let direct = t_sum(r, n, SMode::Integer(s)).unwrap().to_ratfun().unwrap();
                    assert_eq!(specialized, direct, "r={r} n={n} s={s}");
                }
            }
        }
    }

    #[test]
    fn recurrence_holds_on_small_grid() {
        for n in 0..=4 {
            for r in (n + 2)..=(n + 5) {
                let res = t_recurrence_residual(r, n, None).unwrap();
                assert!(res.is_zero(), "residual nonzero at r={r} n={n}");
            }
        }
    }

    #[test]
    fn recurrence_mutation_detected() {
        for i in 0..3 {
            let res = t_recurrence_residual(4, 1, Some(i)).unwrap();
            assert!(!res.is_zero(), "mutation of coefficient {i} not detected");
        }
    }

    #[test]
    fn closed_forms_small() {
        for n in 0..=5 {
            for r in (n + 1)..=(n + 4) {
                assert!(t_closed_matches(r, n, 1).unwrap(), "s=1 r={r} n={n}");
            }
            for r in (n + 2)..=(n + 4) {
                assert!(t_closed_matches(r, n, 0).unwrap(), "s=0 r={r} n={n}");
            }
        }
    }

    #[test]
    fn finite_q_identity_small() {
        for m in 0..=6 {
            let (lhs, rhs) = finite_q_identity_sides(m).unwrap();
            assert!(lhs.equal(&rhs), "mismatch at M={m}");
        }
    }
}
