//! Bailey pairs, the Bailey transform with finite and limiting rho
//! specializations, the gamma sum, and the concrete corollary sums.
//!
//! Everything here is finite and exact: sequences are closed-form builders
//! returning fractions with factored denominators, and each identity is an
//! equality of such fractions, decided without truncation.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::inversion::lambda_frac;
use crate::poly::SparsePoly;
use crate::qfrac::PochFrac;
use crate::qtools::{frac_div_poch, poly_poch, q_binomial, qvec, tau_factor};
use crate::scalar::{self, ExactScalar};
use crate::vars::{AlgebraError, ExponentVector, VarRegistry};

/// A monomial-valued parameter `c * x^e` (a symbolic variable, a rational
/// constant, or a mixed monomial); closed under inversion, which is what
/// lets `1/rho` style reciprocals stay exact.
#[derive(Clone, Debug)]
pub struct MonomialParam {
    pub e: ExponentVector,
    pub c: ExactScalar,
}

impl MonomialParam {
    pub fn constant(registry: &Arc<VarRegistry>, c: ExactScalar) -> Self {
        assert!(!c.is_zero());
        MonomialParam {
            e: ExponentVector::zeros(registry.len()),
            c,
        }
    }

    pub fn variable(registry: &Arc<VarRegistry>, name: &str) -> Self {
        let i = registry.index_of(name).expect("unknown variable");
        MonomialParam {
            e: ExponentVector::unit(registry.len(), i),
            c: scalar::one(),
        }
    }

    pub fn poly(&self, registry: &Arc<VarRegistry>) -> SparsePoly {
        SparsePoly::monomial(registry, self.c.clone(), self.e.clone())
    }

    pub fn inv(&self) -> Self {
        MonomialParam {
            e: ExponentVector(self.e.0.iter().map(|x| -x).collect()),
            c: self.c.recip(),
        }
    }

    /// This parameter multiplied by `q^shift`.
    pub fn times_q(&self, registry: &Arc<VarRegistry>, shift: i64) -> Self {
        let mut e = self.e.clone();
        e.0[registry.q_index()] += shift;
        MonomialParam { e, c: self.c.clone() }
    }

    /// Product of two parameters.
    pub fn times(&self, other: &Self) -> Self {
        MonomialParam {
            e: self.e.add(&other.e),
            c: self.c.clone() * other.c.clone(),
        }
    }

    /// The monomial `(c x^e)^k` as a polynomial (k may be negative).
    pub fn pow_poly(&self, registry: &Arc<VarRegistry>, k: i64) -> SparsePoly {
        SparsePoly::monomial(
            registry,
            scalar::pow(&self.c, k),
            ExponentVector(self.e.0.iter().map(|x| x * k).collect()),
        )
    }
}

/// Divide a fraction by `(p; q)_n` where `p` is a monomial parameter.
pub fn frac_div_poch_param(f: &PochFrac, p: &MonomialParam, n: i64) -> Result<PochFrac, AlgebraError> {
    frac_div_poch(f, &p.e, &p.c, 1, n)
}

/// A Bailey pair at `a = 1`: sequences linked by
/// `beta_n = sum_k alpha_k / ((q;q)_{n-k} (q;q)_{n+k})`.
pub struct BaileyPair {
    pub name: &'static str,
    alpha: fn(i64) -> PochFrac,
    beta: fn(i64) -> PochFrac,
}

impl BaileyPair {
    pub fn alpha(&self, n: i64) -> PochFrac {
        (self.alpha)(n)
    }

    pub fn beta(&self, n: i64) -> PochFrac {
        (self.beta)(n)
    }
}

fn inv_q_poch(f: &PochFrac, n: i64) -> PochFrac {
    let r = f.registry().clone();
    frac_div_poch(f, &qvec(&r, 1), &scalar::one(), 1, n).expect("(q;q)_n factors")
}

/// `gamma(n) = sum_k [n k]_q q^{k^2} / (-q; q)_k` over the given registry.
pub fn gamma_sum(registry: &Arc<VarRegistry>, n: i64) -> PochFrac {
    let mut acc = PochFrac::zero(registry);
    for k in 0..=n {
        let num = q_binomial(registry, n, k, 1)
            .mul(&SparsePoly::q_pow(registry, scalar::one(), k * k));
        let term = frac_div_poch(
            &PochFrac::from_poly(num),
            &qvec(registry, 1),
            &(-scalar::one()),
            1,
            k,
        )
        .expect("(-q;q)_k factors");
        acc = acc.add(&term);
    }
    acc
}

/// The pair `alpha_n = 2 (-1)^n q^{n^2}`,
/// `beta_n = 1/(q^2;q^2)_n + 1/(q;q)_n^2`.
pub fn pair_square() -> BaileyPair {
    fn alpha(n: i64) -> PochFrac {
        let r = VarRegistry::q_only();
        PochFrac::from_poly(SparsePoly::q_pow(&r, scalar::int(2) * scalar::neg_one_pow(n), n * n))
    }
    fn beta(n: i64) -> PochFrac {
        let r = VarRegistry::q_only();
        let first = frac_div_poch(&PochFrac::one(&r), &qvec(&r, 2), &scalar::one(), 2, n)
            .expect("(q^2;q^2)_n factors");
        let second = inv_q_poch(&inv_q_poch(&PochFrac::one(&r), n), n);
        first.add(&second)
    }
    BaileyPair {
        name: "square-exponent",
        alpha,
        beta,
    }
}

/// The pair `alpha_n = 2 (-1)^n q^{2n^2}`,
/// `beta_n = 1/(q;q)_n^2 + gamma(n)/(q;q)_n`.
pub fn pair_double_square() -> BaileyPair {
    fn alpha(n: i64) -> PochFrac {
        let r = VarRegistry::q_only();
        PochFrac::from_poly(SparsePoly::q_pow(
            &r,
            scalar::int(2) * scalar::neg_one_pow(n),
            2 * n * n,
        ))
    }
    fn beta(n: i64) -> PochFrac {
        let r = VarRegistry::q_only();
        let base = inv_q_poch(&PochFrac::one(&r), n);
        inv_q_poch(&PochFrac::one(&r), n)
            .mul(&base)
            .add(&gamma_sum(&r, n).mul(&base))
    }
    BaileyPair {
        name: "double-square-exponent",
        alpha,
        beta,
    }
}

/// `beta_n` reconstructed from the alpha sequence via the defining sum.
pub fn beta_from_alpha(alpha: &dyn Fn(i64) -> PochFrac, n: i64) -> PochFrac {
    let r = VarRegistry::q_only();
    let mut acc = PochFrac::zero(&r);
    for k in 0..=n {
        let term = inv_q_poch(&inv_q_poch(&alpha(k), n - k), n + k);
        acc = acc.add(&term);
    }
    acc
}

/// Check the defining relation for all `n <= n_max`; `None` means the pair
/// verifies, otherwise the failing `n` and a coefficient witness.
pub fn verify_bailey_pair(
    pair: &BaileyPair,
    n_max: i64,
) -> Option<(i64, ExponentVector, ExactScalar, ExactScalar)> {
    for n in 0..=n_max {
        let direct = pair.beta(n);
        let rebuilt = beta_from_alpha(&|k| pair.alpha(k), n);
        if let Some((e, l, r)) = direct.difference_witness(&rebuilt) {
            return Some((n, e, l, r));
        }
    }
    None
}

/// A `rho` slot of the Bailey transform: a finite monomial value (a
/// rational constant or a symbolic variable) or the formal limit, realized
/// by the rewrite `(rho; q)_k * rho^{-k} -> (-1)^k q^{k(k-1)/2}` with every
/// `(q/rho; q)` factor collapsing to 1.
#[derive(Clone, Debug)]
pub enum RhoSpec {
    Finite(MonomialParam),
    Infinite,
}

impl RhoSpec {
    pub fn rational(registry: &Arc<VarRegistry>, c: ExactScalar) -> Self {
        RhoSpec::Finite(MonomialParam::constant(registry, c))
    }

    pub fn variable(registry: &Arc<VarRegistry>, name: &str) -> Self {
        RhoSpec::Finite(MonomialParam::variable(registry, name))
    }

    /// The factor `(rho; q)_k * rho^{-k}` as an exact polynomial.
    fn upper_factor(&self, registry: &Arc<VarRegistry>, k: i64) -> SparsePoly {
        match self {
            RhoSpec::Finite(p) => {
                poly_poch(&p.poly(registry), 1, k).mul(&p.pow_poly(registry, -k))
            }
            RhoSpec::Infinite => tau_factor(registry, 1, k),
        }
    }

    /// Divide `f` by `(q/rho; q)_n` (a no-op in the limit).
    fn div_lower(
        &self,
        f: &PochFrac,
        registry: &Arc<VarRegistry>,
        n: i64,
    ) -> Result<PochFrac, AlgebraError> {
        match self {
            RhoSpec::Finite(p) => {
                let inv = p.inv().times_q(registry, 1);
                frac_div_poch(f, &inv.e, &inv.c, 1, n)
            }
            RhoSpec::Infinite => Ok(f.clone()),
        }
    }
}

/// Both sides of the Bailey transform at `a = 1` for the given pair, rho
/// specializations, and depth `n`, over the given registry:
///
/// LHS: `1/((q/r1;q)_n (q/r2;q)_n) * sum_k (r1;q)_k (r2;q)_k
///       (q/r1r2;q)_{n-k}/(q;q)_{n-k} (q/r1r2)^k beta_k`
/// RHS: `sum_k (r1;q)_k (r2;q)_k /
///       ((q;q)_{n-k}(q;q)_{n+k}(q/r1;q)_k(q/r2;q)_k) (q/r1r2)^k alpha_k`
pub fn bailey_lemma_sides(
    registry: &Arc<VarRegistry>,
    pair: &BaileyPair,
    rho1: &RhoSpec,
    rho2: &RhoSpec,
    n: i64,
) -> Result<(PochFrac, PochFrac), AlgebraError> {
    let r = registry;
    let mut lhs = PochFrac::zero(r);
    let mut rhs = PochFrac::zero(r);
    for k in 0..=n {
        // (r1;q)_k (r2;q)_k (q/(r1 r2))^k, with each rho^{-k} assigned to
        // its own slot so the limit rewrite is local
        let up = rho1
            .upper_factor(r, k)
            .mul(&rho2.upper_factor(r, k))
            .mul(&SparsePoly::q_pow(r, scalar::one(), k));

        // middle factor (q/(r1 r2); q)_{n-k}; collapses to 1 in any limit
        let mid = match (rho1, rho2) {
            (RhoSpec::Finite(p1), RhoSpec::Finite(p2)) => {
                let p = p1.times(p2).inv().times_q(r, 1);
                poly_poch(&p.poly(r), 1, n - k)
            }
            _ => SparsePoly::one(r),
        };

        let beta = pair.beta(k).embed(r)?;
        let alpha = pair.alpha(k).embed(r)?;
        let lterm = inv_q_poch(&beta.mul_poly(&up).mul_poly(&mid), n - k);
        lhs = lhs.add(&lterm);

        let mut rterm = inv_q_poch(&inv_q_poch(&alpha.mul_poly(&up), n - k), n + k);
        rterm = rho1.div_lower(&rterm, r, k)?;
        rterm = rho2.div_lower(&rterm, r, k)?;
        rhs = rhs.add(&rterm);
    }
    lhs = rho1.div_lower(&lhs, r, n)?;
    lhs = rho2.div_lower(&lhs, r, n)?;
    Ok((lhs, rhs))
}

/// `sum_{k=-n}^{n} (-1)^k q^{scale*k^2} / ((q;q)_{n-k} (q;q)_{n+k})`.
pub fn two_sided_alpha_sum(n: i64, scale: i64) -> PochFrac {
    let r = VarRegistry::q_only();
    let mut acc = PochFrac::zero(&r);
    for k in -n..=n {
        let num = SparsePoly::q_pow(&r, scalar::neg_one_pow(k), scale * k * k);
        acc = acc.add(&inv_q_poch(
            &inv_q_poch(&PochFrac::from_poly(num), n - k),
            n + k,
        ));
    }
    acc
}

/// `sum_k q^{k^2} gamma(k) / ((q;q)_k (q;q)_{n-k})`.
pub fn gamma_weighted_sum(n: i64) -> PochFrac {
    let r = VarRegistry::q_only();
    let mut acc = PochFrac::zero(&r);
    for k in 0..=n {
        let num = SparsePoly::q_pow(&r, scalar::one(), k * k);
        let term = inv_q_poch(
            &inv_q_poch(&gamma_sum(&r, k).mul_poly(&num), k),
            n - k,
        );
        acc = acc.add(&term);
    }
    acc
}

/// `sum_k q^{k^2} / ((q^2;q^2)_k (q;q)_{n-k})`.
pub fn square_weighted_sum(n: i64) -> PochFrac {
    let r = VarRegistry::q_only();
    let mut acc = PochFrac::zero(&r);
    for k in 0..=n {
        let num = PochFrac::from_poly(SparsePoly::q_pow(&r, scalar::one(), k * k));
        let term = inv_q_poch(
            &frac_div_poch(&num, &qvec(&r, 2), &scalar::one(), 2, k).expect("(q^2;q^2)_k"),
            n - k,
        );
        acc = acc.add(&term);
    }
    acc
}

/// Both sides of `sum_k q^{k^2}/((q;q)_k^2 (q;q)_{n-k}) = 1/(q;q)_n^2`.
pub fn closing_sum_sides(n: i64) -> (PochFrac, PochFrac) {
    let r = VarRegistry::q_only();
    let mut lhs = PochFrac::zero(&r);
    for k in 0..=n {
        let num = PochFrac::from_poly(SparsePoly::q_pow(&r, scalar::one(), k * k));
        let term = inv_q_poch(&inv_q_poch(&inv_q_poch(&num, k), k), n - k);
        lhs = lhs.add(&term);
    }
    let rhs = inv_q_poch(&inv_q_poch(&PochFrac::one(&r), n), n);
    (lhs, rhs)
}

/// `lambda_k(-q)` as a fraction in `q` alone (over the `[a, q]` registry
/// with `a` eliminated by the substitution `a -> -q`).
pub fn lambda_at_neg_q(k: i64) -> PochFrac {
    let f = lambda_frac(k);
    let r = f.registry().clone();
    let m = qvec(&r, 1);
    f.map_num(|p| {
        p.substitute_monomial("a", &(-scalar::one()), &m)
            .expect("monomial substitution")
    })
}

/// Both sides of `q^{n(n-1)/2} (1 + q^n) sum_k (q^{-n};q)_k (q^n;q)_k q^k
/// lambda_k(-q) = 2 q^{2n^2}`.
pub fn success_sides(n: i64) -> (PochFrac, PochFrac) {
    let r = VarRegistry::with_params(&["a"]);
    let qn_neg = SparsePoly::q_pow(&r, scalar::one(), -n);
    let qn = SparsePoly::q_pow(&r, scalar::one(), n);
    let mut sum = PochFrac::zero(&r);
    for k in 0..=n {
        let w = poly_poch(&qn_neg, 1, k)
            .mul(&poly_poch(&qn, 1, k))
            .mul(&SparsePoly::q_pow(&r, scalar::one(), k));
        sum = sum.add(&lambda_at_neg_q(k).mul_poly(&w));
    }
    let pre = SparsePoly::q_pow(&r, scalar::one(), n * (n - 1) / 2)
        .mul(&SparsePoly::one(&r).add(&qn));
    let lhs = sum.mul_poly(&pre);
    let rhs = PochFrac::from_poly(SparsePoly::q_pow(&r, scalar::int(2), 2 * n * n));
    (lhs, rhs)
}

/// Check the closed evaluation above for all `n <= n_max`.
pub fn verify_success_identity(
    n_max: i64,
) -> Option<(i64, ExponentVector, ExactScalar, ExactScalar)> {
    for n in 0..=n_max {
        let (lhs, rhs) = success_sides(n);
        if let Some((e, l, rr)) = lhs.difference_witness(&rhs) {
            return Some((n, e, l, rr));
        }
    }
    None
}

/// Which of the two built-in pairs a corollary specializes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    /// `alpha_n = 2(-1)^n q^{n^2}`
    Square,
    /// `alpha_n = 2(-1)^n q^{2n^2}`
    DoubleSquare,
}

/// Both sides of the `rho1 = 1/a, rho2 = q` corollary at depth `n >= 1`,
/// with `a` a monomial parameter (symbolic variable or rational), over the
/// given registry:
///
/// LHS(Square):       `sum_k (1/a;q)_k (a;q)_{n-k} / ((q;q)_{n-k} (-q;q)_k) a^k`
/// LHS(DoubleSquare): `sum_k (1/a;q)_k (a;q)_{n-k} / (q;q)_{n-k} a^k gamma(k)`
/// RHS: `2 (q;q)_{n-1} (aq;q)_n * sum_k (1/a;q)_k (1-q^k) q^{c k^2} (-a)^k
///       / ((aq;q)_k (q;q)_{n-k} (q;q)_{n+k})`  with `c = 1` or `2`.
pub fn conc_i_sides(
    kind: PairKind,
    registry: &Arc<VarRegistry>,
    a: &MonomialParam,
    n: i64,
) -> Result<(PochFrac, PochFrac), AlgebraError> {
    assert!(n >= 1);
    let a_inv = a.inv();
    let scale = match kind {
        PairKind::Square => 1,
        PairKind::DoubleSquare => 2,
    };

    let mut lhs = PochFrac::zero(registry);
    for k in 0..=n {
        let num = poly_poch(&a_inv.poly(registry), 1, k)
            .mul(&poly_poch(&a.poly(registry), 1, n - k))
            .mul(&SparsePoly::monomial(
                registry,
                scalar::pow(&a.c, k),
                ExponentVector(a.e.0.iter().map(|x| x * k).collect()),
            ));
        let mut term = inv_q_poch(&PochFrac::from_poly(num), n - k);
        term = match kind {
            PairKind::Square => frac_div_poch(&term, &qvec(registry, 1), &(-scalar::one()), 1, k)?,
            PairKind::DoubleSquare => term.mul(&gamma_sum(registry, k)),
        };
        lhs = lhs.add(&term);
    }

    let aq = a.times_q(registry, 1);
    let mut rsum = PochFrac::zero(registry);
    for k in 0..=n {
        let num = poly_poch(&a_inv.poly(registry), 1, k)
            .mul(&SparsePoly::one(registry).sub(&SparsePoly::q_pow(registry, scalar::one(), k)))
            .mul(&SparsePoly::q_pow(registry, scalar::one(), scale * k * k))
            .mul(&SparsePoly::monomial(
                registry,
                scalar::neg_one_pow(k) * scalar::pow(&a.c, k),
                ExponentVector(a.e.0.iter().map(|x| x * k).collect()),
            ));
        let mut term = inv_q_poch(&inv_q_poch(&PochFrac::from_poly(num), n - k), n + k);
        term = frac_div_poch(&term, &aq.e, &aq.c, 1, k)?;
        rsum = rsum.add(&term);
    }
    let pre = poly_poch(&SparsePoly::q_pow(registry, scalar::one(), 1), 1, n - 1)
        .mul(&poly_poch(&aq.poly(registry), 1, n))
        .scale(&scalar::int(2));
    let rhs = rsum.mul_poly(&pre);
    Ok((lhs, rhs))
}

/// Draw `count` deterministic rational samples from
/// `{p/r : 1 <= p < r <= 17}`, skipping the listed excluded values.
pub fn rational_samples(seed: u64, count: usize, exclude: &[ExactScalar]) -> Vec<ExactScalar> {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let den = 2 + (state >> 33) % 16; // 2..=17
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let num = 1 + (state >> 33) % (den - 1); // 1..den
        let v = scalar::ratio(num as i64, den as i64);
        if !exclude.contains(&v) && !out.contains(&v) {
            out.push(v);
        }
    }
    out
}
