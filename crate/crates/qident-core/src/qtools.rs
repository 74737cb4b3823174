//! q-combinatorial building blocks: Pochhammer symbols, q-binomial
//! coefficients, sign factors, Rogers-Szegő polynomials, basic
//! hypergeometric series, and the theta sums used by the catalog.
//!
//! Conventions: `(x;q)_0 = 1`, and `1/(q;q)_m = 0` for `m < 0` (so sums
//! with factors like `1/(q;q)_{n-2k}` are supported on `k <= n/2`).

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::poly::SparsePoly;
use crate::qfrac::PochFrac;
use crate::ratfun::RationalFunction;
use crate::scalar::{self, ExactScalar};
use crate::series::TruncatedSeries;
use crate::vars::{AlgebraError, ExponentVector, TruncationProfile, VarRegistry};

/// Exponent vector `q^e`.
pub fn qvec(registry: &VarRegistry, e: i64) -> ExponentVector {
    let mut v = ExponentVector::zeros(registry.len());
    v.0[registry.q_index()] = e;
    v
}

/// Exponent vector `name^e`.
pub fn var_vec(registry: &VarRegistry, name: &str, e: i64) -> ExponentVector {
    let i = registry
        .index_of(name)
        .unwrap_or_else(|| panic!("unknown variable `{name}`"));
    let mut v = ExponentVector::zeros(registry.len());
    v.0[i] = e;
    v
}

/// `tau_r(n) = (-1)^n q^{r n(n-1)/2}` as a monomial.
pub fn tau_factor(registry: &Arc<VarRegistry>, r: i64, n: i64) -> SparsePoly {
    SparsePoly::q_pow(registry, scalar::neg_one_pow(n), r * n * (n - 1) / 2)
}

/// Exact polynomial `(x; q^base)_n` for `n >= 0` and arbitrary Laurent `x`.
pub fn poly_poch(x: &SparsePoly, base: i64, n: i64) -> SparsePoly {
    assert!(n >= 0);
    let registry = x.registry();
    let mut acc = SparsePoly::one(registry);
    for j in 0..n {
        let f = SparsePoly::one(registry).sub(&x.mul(&SparsePoly::q_pow(
            registry,
            scalar::one(),
            base * j,
        )));
        if f.is_zero() {
            return SparsePoly::zero(registry);
        }
        acc = acc.mul(&f);
    }
    acc
}

/// `(x; q^base)_n` as a truncated series, `n >= 0`.
pub fn poch_finite(
    x: &TruncatedSeries,
    base: i64,
    n: i64,
    profile: &TruncationProfile,
) -> Result<TruncatedSeries, AlgebraError> {
    assert!(n >= 0, "negative length is handled by inv_poch_finite");
    let registry = x.registry();
    let mut acc = TruncatedSeries::one(registry);
    for j in 0..n {
        let shift = x.mul_poly(&SparsePoly::q_pow(registry, scalar::one(), base * j))?;
        let f = TruncatedSeries::one(registry).sub(&shift)?;
        acc = acc.mul(&f)?;
    }
    Ok(acc.truncate_caps(profile))
}

/// `1/(x; q^base)_n` as a truncated series; each binomial factor is
/// inverted separately (cheap, since the geometric powers of a single term
/// are monomial shifts).
pub fn inv_poch_finite(
    x: &TruncatedSeries,
    base: i64,
    n: i64,
    profile: &TruncationProfile,
) -> Result<TruncatedSeries, AlgebraError> {
    assert!(n >= 0);
    let registry = x.registry();
    let mut acc = TruncatedSeries::one(registry).truncate_caps(profile);
    for j in 0..n {
        let shift = x.mul_poly(&SparsePoly::q_pow(registry, scalar::one(), base * j))?;
        let f = TruncatedSeries::one(registry).sub(&shift)?;
        acc = acc.mul(&f.invert(profile)?)?;
    }
    Ok(acc)
}

/// `1/(q^base; q^base)_m` with the standard convention that the result is
/// the zero series for `m < 0`.
pub fn inv_poch_q(
    registry: &Arc<VarRegistry>,
    base: i64,
    m: i64,
    profile: &TruncationProfile,
) -> Result<TruncatedSeries, AlgebraError> {
    if m < 0 {
        return Ok(TruncatedSeries::zero(registry));
    }
    let x = TruncatedSeries::from_poly_entire(SparsePoly::q_pow(registry, scalar::one(), base));
    inv_poch_finite(&x, base, m, profile)
}

/// `(x; q^base)_infinity` on the given profile. The argument must have no
/// negative exponents; the product stops at the first factor that is
/// congruent to 1 on the whole window (every later factor is too, since
/// the q-shift only grows).
pub fn poch_infinite(
    x: &TruncatedSeries,
    base: i64,
    profile: &TruncationProfile,
) -> Result<TruncatedSeries, AlgebraError> {
    assert!(base >= 1);
    let registry = x.registry();
    let n = registry.len();
    if (0..n).any(|i| x.exact_region().min(i) < 0 || x.poly().support_min(i) < 0) {
        return Err(AlgebraError::NegativeExponents);
    }
    // A constant part equal to 1 makes the j = 0 factor vanish at q = 0.
    if x.poly().coeff(&ExponentVector::zeros(n)) == scalar::one() {
        return Err(AlgebraError::VanishingFactor);
    }
    let qi = registry.q_index();
    let survives = |j: i64| -> bool {
        x.poly().terms().any(|(e, _)| {
            (0..n).all(|i| {
                let shifted = if i == qi { e.0[i] + base * j } else { e.0[i] };
                shifted <= profile.max(i)
            })
        })
    };
    let mut acc = TruncatedSeries::one(registry).truncate_caps(profile);
    let mut j = 0i64;
    while survives(j) {
        let shift = x.mul_poly(&SparsePoly::q_pow(registry, scalar::one(), base * j))?;
        let f = TruncatedSeries::one(registry).sub(&shift)?;
        acc = acc.mul(&f)?;
        j += 1;
    }
    Ok(acc)
}

/// Gaussian binomial `[n k]_{q^base}` via the q-Pascal recursion;
/// zero outside `0 <= k <= n`.
pub fn q_binomial(registry: &Arc<VarRegistry>, n: i64, k: i64, base: i64) -> SparsePoly {
    if k < 0 || k > n || n < 0 {
        return SparsePoly::zero(registry);
    }
    // row[j] = [m j] while sweeping m = 0..n
    let mut row: Vec<SparsePoly> = alloc::vec![SparsePoly::one(registry)];
    for m in 1..=n {
        let mut next: Vec<SparsePoly> = Vec::with_capacity(m as usize + 1);
        for j in 0..=m {
            let left = if j > 0 {
                row[(j - 1) as usize].clone()
            } else {
                SparsePoly::zero(registry)
            };
            let right = if j < m {
                row[j as usize].mul(&SparsePoly::q_pow(registry, scalar::one(), base * j))
            } else {
                SparsePoly::zero(registry)
            };
            next.push(left.add(&right));
        }
        row = next;
    }
    row[k as usize].clone()
}

/// Rogers-Szegő polynomial `h_n(a, b | q^base) = sum_k [n k]_{q^base} a^k b^{n-k}`.
pub fn rogers_szego(
    registry: &Arc<VarRegistry>,
    n: i64,
    a: &str,
    b: &str,
    base: i64,
) -> SparsePoly {
    let mut acc = SparsePoly::zero(registry);
    for k in 0..=n {
        let mut e = ExponentVector::zeros(registry.len());
        e.0[registry.index_of(a).expect("unknown variable")] = k;
        e.0[registry.index_of(b).expect("unknown variable")] = n - k;
        let m = SparsePoly::monomial(registry, scalar::one(), e);
        acc = acc.add(&q_binomial(registry, n, k, base).mul(&m));
    }
    acc
}

/// Basic hypergeometric series `r phi s` with base `q^base`: upper and
/// lower parameters and the argument are exact Laurent polynomials, the
/// sum runs to `term_bound` (or stops early once a terminating upper
/// parameter `q^{-m}` kills the numerator). The balancing factor
/// `tau_1(n)^{s+1-r}` is always applied from the generic definition.
pub fn phi_series(
    upper: &[SparsePoly],
    lower: &[SparsePoly],
    base: i64,
    argument: &SparsePoly,
    term_bound: i64,
    profile: &TruncationProfile,
) -> Result<TruncatedSeries, AlgebraError> {
    let registry = argument.registry();
    let balance = lower.len() as i64 + 1 - upper.len() as i64;
    let mut acc = TruncatedSeries::zero(registry).truncate_caps(profile);
    let mut arg_pow = SparsePoly::one(registry);
    for n in 0..=term_bound {
        let mut numer = SparsePoly::one(registry);
        for u in upper {
            numer = numer.mul(&poly_poch(u, base, n));
            if numer.is_zero() {
                break;
            }
        }
        if numer.is_zero() {
            // a terminating parameter has been reached; all later terms vanish
            break;
        }
        numer = numer.mul(&arg_pow);
        if balance != 0 {
            let t = SparsePoly::q_pow(
                registry,
                scalar::neg_one_pow(n * balance),
                balance * base * n * (n - 1) / 2,
            );
            numer = numer.mul(&t);
        }
        let mut den = inv_poch_q(registry, base, n, profile)?;
        for l in lower {
            let ls = TruncatedSeries::from_poly_entire(l.clone());
            den = den.mul(&inv_poch_finite(&ls, base, n, profile)?)?;
        }
        let term = den.mul(&TruncatedSeries::from_poly_entire(numer))?;
        acc = acc.add(&term)?;
        arg_pow = arg_pow.mul(argument);
    }
    Ok(acc)
}

/// Partial theta sum `1 + 2 sum_{n>=1} a^n q^{2n^2}` on the profile.
pub fn theta_a_power(
    registry: &Arc<VarRegistry>,
    a: &str,
    profile: &TruncationProfile,
) -> Result<TruncatedSeries, AlgebraError> {
    let qcap = profile.max(registry.q_index());
    let acap = profile.max(registry.index_of(a).expect("unknown variable"));
    let mut p = SparsePoly::one(registry);
    let mut n = 1i64;
    while 2 * n * n <= qcap && n <= acap {
        let mut e = var_vec(registry, a, n);
        e.0[registry.q_index()] = 2 * n * n;
        p = p.add(&SparsePoly::monomial(registry, scalar::int(2), e));
        n += 1;
    }
    TruncatedSeries::from_poly(p, profile)
}

/// Partial theta sum `1 + sum_{n>=1} (-1)^n q^{n(n-1)/2} (a^n + b^n)`.
pub fn theta_pentagonal_pair(
    registry: &Arc<VarRegistry>,
    a: &str,
    b: &str,
    profile: &TruncationProfile,
) -> Result<TruncatedSeries, AlgebraError> {
    let qcap = profile.max(registry.q_index());
    let mut p = SparsePoly::one(registry);
    for (var, cap) in [
        (a, profile.max(registry.index_of(a).expect("unknown variable"))),
        (b, profile.max(registry.index_of(b).expect("unknown variable"))),
    ] {
        let mut n = 1i64;
        while n * (n - 1) / 2 <= qcap && n <= cap {
            let mut e = var_vec(registry, var, n);
            e.0[registry.q_index()] = n * (n - 1) / 2;
            p = p.add(&SparsePoly::monomial(registry, scalar::neg_one_pow(n), e));
            n += 1;
        }
    }
    TruncatedSeries::from_poly(p, profile)
}

/// Two-sided theta sum `sum_{k in Z} (-1)^k q^{scale * k^2}`, truncated to
/// `scale * k^2 <= cap`.
pub fn jacobi_triple_series(
    registry: &Arc<VarRegistry>,
    exponent_scale: i64,
    profile: &TruncationProfile,
) -> Result<TruncatedSeries, AlgebraError> {
    let cap = profile.max(registry.q_index());
    let mut p = SparsePoly::one(registry);
    let mut k = 1i64;
    while exponent_scale * k * k <= cap {
        p = p.add(&SparsePoly::q_pow(
            registry,
            scalar::int(2) * scalar::neg_one_pow(k),
            exponent_scale * k * k,
        ));
        k += 1;
    }
    TruncatedSeries::from_poly(p, profile)
}

// ---- PochFrac helpers (finite, exact rational-function domain) ----

/// Divide by `(c * x^e; q^base)_n` in factored form.
pub fn frac_div_poch(
    f: &PochFrac,
    e: &ExponentVector,
    c: &ExactScalar,
    base: i64,
    n: i64,
) -> Result<PochFrac, AlgebraError> {
    assert!(n >= 0);
    let registry = f.registry().clone();
    let mut acc = f.clone();
    for j in 0..n {
        let mut ej = e.clone();
        ej.0[registry.q_index()] += base * j;
        acc = acc.div_factor(ej, c.clone())?;
    }
    Ok(acc)
}

/// Multiply by `(c * x^e; q^base)_n`, cancelling against the denominator.
pub fn frac_mul_poch(f: &PochFrac, e: &ExponentVector, c: &ExactScalar, base: i64, n: i64) -> PochFrac {
    assert!(n >= 0);
    let registry = f.registry().clone();
    let mut acc = f.clone();
    for j in 0..n {
        let mut ej = e.clone();
        ej.0[registry.q_index()] += base * j;
        acc = acc.mul_factor(ej, c.clone());
    }
    acc
}

/// Both sides of the shift relation
/// `(-q^{-n}; q)_k = (-q;q)_n / (-q;q)_{n-k} * (-1)^k q^{-nk} tau_1(k)`
/// as rational functions in `q`, for `0 <= k <= n`.
pub fn neg_shift_pochhammer(n: i64, k: i64) -> (RationalFunction, RationalFunction) {
    assert!((0..=n).contains(&k), "need 0 <= k <= n");
    let r = VarRegistry::q_only();
    let neg_q_pow = |e: i64| SparsePoly::q_pow(&r, -scalar::one(), e);
    let lhs = RationalFunction::from_poly(poly_poch(&neg_q_pow(-n), 1, k));
    let num = poly_poch(&neg_q_pow(1), 1, n)
        .mul(&SparsePoly::q_pow(&r, scalar::neg_one_pow(k), -n * k))
        .mul(&tau_factor(&r, 1, k));
    let den = poly_poch(&neg_q_pow(1), 1, n - k);
    let rhs = RationalFunction::new(num, den).expect("(-q;q)_{n-k} is nonzero");
    (lhs, rhs)
}
