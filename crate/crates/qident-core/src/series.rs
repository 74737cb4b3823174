//! Truncated formal series with per-variable exactness windows.
//!
//! A `TruncatedSeries` stores a sparse Laurent polynomial together with an
//! exactness window `[floor, cap]` per variable. The contract is:
//!
//! * every coefficient whose exponent vector lies componentwise inside the
//!   window is stored exactly (absent terms are exactly zero), and
//! * the true series has no nonzero coefficient with *any* component below
//!   its floor.
//!
//! The second clause makes the floor a support bound, which is what lets
//! multiplication by Laurent factors shift the knowable region instead of
//! silently contaminating low-order coefficients. A cap equal to
//! [`UNBOUNDED`] means the stored polynomial is the complete object in that
//! variable (an "entire" series); exact polynomial work stays lossless
//! until it first meets a genuinely truncated factor.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::poly::SparsePoly;
use crate::scalar::{self, ExactScalar};
use crate::vars::{AlgebraError, ExponentVector, TruncationProfile, VarRegistry};

/// Sentinel cap meaning "exact for all exponents in this variable".
pub const UNBOUNDED: i64 = 1 << 40;

/// Result of comparing two series on the intersection of their exact
/// regions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesCmp {
    Pass,
    /// First mismatch in the canonical term order, with both coefficients.
    Fail {
        exponent: ExponentVector,
        lhs: ExactScalar,
        rhs: ExactScalar,
    },
    /// The requested comparison window is not fully knowable on both
    /// sides; no verdict.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    poly: SparsePoly,
    profile: TruncationProfile,
    exact: TruncationProfile,
}

fn cap_add(cap: i64, shift: i64) -> i64 {
    if cap >= UNBOUNDED {
        UNBOUNDED
    } else {
        (cap + shift).min(UNBOUNDED)
    }
}

impl TruncatedSeries {
    /// Wrap a complete polynomial: exact everywhere at or above its support
    /// floor.
    pub fn from_poly_entire(poly: SparsePoly) -> Self {
        let n = poly.registry().len();
        let min: Vec<i64> = (0..n).map(|i| poly.support_min(i).min(0)).collect();
        let max = alloc::vec![UNBOUNDED; n];
        let w = TruncationProfile::from_bounds(min, max);
        TruncatedSeries {
            poly,
            profile: w.clone(),
            exact: w,
        }
    }

    /// Wrap a polynomial that is only trusted on `profile`: terms above the
    /// caps are discarded, terms below a floor are an error (they would
    /// falsify the support bound).
    pub fn from_poly(poly: SparsePoly, profile: &TruncationProfile) -> Result<Self, AlgebraError> {
        let n = poly.registry().len();
        assert_eq!(profile.len(), n);
        if poly
            .terms()
            .any(|(e, _)| (0..n).any(|i| e.0[i] < profile.min(i)))
        {
            return Err(AlgebraError::BelowProfileFloor);
        }
        let kept = poly.filtered(|e| (0..n).all(|i| e.0[i] <= profile.max(i)));
        Ok(TruncatedSeries {
            poly: kept,
            profile: profile.clone(),
            exact: profile.clone(),
        })
    }

    pub fn zero(registry: &Arc<VarRegistry>) -> Self {
        Self::from_poly_entire(SparsePoly::zero(registry))
    }

    pub fn one(registry: &Arc<VarRegistry>) -> Self {
        Self::from_poly_entire(SparsePoly::one(registry))
    }

    pub fn constant(registry: &Arc<VarRegistry>, c: ExactScalar) -> Self {
        Self::from_poly_entire(SparsePoly::constant(registry, c))
    }

    pub fn poly(&self) -> &SparsePoly {
        &self.poly
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        self.poly.registry()
    }

    pub fn profile(&self) -> &TruncationProfile {
        &self.profile
    }

    pub fn exact_region(&self) -> &TruncationProfile {
        &self.exact
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Exact in every variable (no truncation has occurred).
    pub fn is_entire(&self) -> bool {
        (0..self.exact.len()).all(|i| self.exact.max(i) >= UNBOUNDED)
    }

    fn check_registry(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.registry() == other.registry() {
            Ok(())
        } else {
            Err(AlgebraError::RegistryMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_registry(other)?;
        let n = self.exact.len();
        let floor: Vec<i64> = (0..n)
            .map(|i| self.exact.min(i).min(other.exact.min(i)))
            .collect();
        let cap: Vec<i64> = (0..n)
            .map(|i| self.exact.max(i).min(other.exact.max(i)))
            .collect();
        let kept = self
            .poly
            .add(&other.poly)
            .filtered(|e| (0..n).all(|i| e.0[i] <= cap[i]));
        let w = TruncationProfile::from_bounds(floor, cap);
        Ok(TruncatedSeries {
            poly: kept,
            profile: w.clone(),
            exact: w,
        })
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            poly: self.poly.neg(),
            profile: self.profile.clone(),
            exact: self.exact.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        TruncatedSeries {
            poly: self.poly.scale(c),
            profile: self.profile.clone(),
            exact: self.exact.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_registry(other)?;
        let n = self.exact.len();
        let floor: Vec<i64> = (0..n)
            .map(|i| (self.exact.min(i) + other.exact.min(i)).max(-UNBOUNDED))
            .collect();
        // A coefficient at e is complete iff no unknown term of either
        // factor can contribute, i.e. e_v <= cap_lhs + floor_rhs and
        // symmetrically.
        let cap: Vec<i64> = (0..n)
            .map(|i| {
                cap_add(self.exact.max(i), other.exact.min(i))
                    .min(cap_add(other.exact.max(i), self.exact.min(i)))
            })
            .collect();
        let prod = self.poly.mul_windowed(&other.poly, Some((&floor, &cap)));
        let w = TruncationProfile::from_bounds(floor, cap);
        Ok(TruncatedSeries {
            poly: prod,
            profile: w.clone(),
            exact: w,
        })
    }

    pub fn mul_poly(&self, p: &SparsePoly) -> Result<Self, AlgebraError> {
        self.mul(&TruncatedSeries::from_poly_entire(p.clone()))
    }

    /// Multiplicative inverse on the window `[0, target.max]`. Requires a
    /// nonzero constant term and no negative exponents.
    pub fn invert(&self, target: &TruncationProfile) -> Result<Self, AlgebraError> {
        let n = self.exact.len();
        if (0..n).any(|i| self.exact.min(i) < 0 || self.poly.support_min(i) < 0) {
            return Err(AlgebraError::NegativeExponents);
        }
        let c0 = self.poly.coeff(&ExponentVector::zeros(n));
        if c0.is_zero() {
            return Err(AlgebraError::NonUnitConstantTerm);
        }
        let floor = alloc::vec![0i64; n];
        let cap: Vec<i64> = (0..n)
            .map(|i| target.max(i).min(self.exact.max(i)))
            .collect();
        let c0inv = c0.recip();
        // u = 1 - s/c0, so 1/s = (1/c0) * sum_k u^k; u has no constant term
        // and nonnegative exponents, so the powers leave the window.
        let u = SparsePoly::constant(self.registry(), scalar::one())
            .sub(&self.poly.scale(&c0inv))
            .filtered(|e| (0..n).all(|i| e.0[i] <= cap[i]));
        let mut acc = SparsePoly::one(self.registry());
        let mut pw = SparsePoly::one(self.registry());
        loop {
            pw = pw.mul_windowed(&u, Some((&floor, &cap)));
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw);
        }
        let w = TruncationProfile::from_bounds(floor, cap);
        Ok(TruncatedSeries {
            poly: acc.scale(&c0inv),
            profile: w.clone(),
            exact: w,
        })
    }

    /// Exact coefficient lookup. Exponents with a component strictly below
    /// the floor are exactly zero; components above the cap are not known.
    pub fn coeff(&self, e: &ExponentVector) -> Result<ExactScalar, AlgebraError> {
        let n = self.exact.len();
        assert_eq!(e.len(), n);
        if (0..n).any(|i| e.0[i] < self.exact.min(i)) {
            return Ok(scalar::zero());
        }
        if (0..n).all(|i| e.0[i] <= self.exact.max(i)) {
            return Ok(self.poly.coeff(e));
        }
        Err(AlgebraError::OutsideExactRegion)
    }

    /// Compare on the common knowable region; reports the first mismatch
    /// in the canonical term order.
    pub fn equal(&self, other: &Self) -> Result<SeriesCmp, AlgebraError> {
        self.check_registry(other)?;
        let n = self.exact.len();
        let floor: Vec<i64> = (0..n)
            .map(|i| self.exact.min(i).min(other.exact.min(i)))
            .collect();
        let cap: Vec<i64> = (0..n)
            .map(|i| self.exact.max(i).min(other.exact.max(i)))
            .collect();
        if (0..n).any(|i| cap[i] < floor[i]) {
            return Ok(SeriesCmp::Inconclusive);
        }
        let inside = |e: &ExponentVector| (0..n).all(|i| e.0[i] >= floor[i] && e.0[i] <= cap[i]);
        let mut candidates: alloc::collections::BTreeSet<ExponentVector> =
            alloc::collections::BTreeSet::new();
        for (e, _) in self.poly.terms() {
            if inside(e) {
                candidates.insert(e.clone());
            }
        }
        for (e, _) in other.poly.terms() {
            if inside(e) {
                candidates.insert(e.clone());
            }
        }
        for e in candidates {
            let l = self.poly.coeff(&e);
            let r = other.poly.coeff(&e);
            if l != r {
                return Ok(SeriesCmp::Fail {
                    exponent: e,
                    lhs: l,
                    rhs: r,
                });
            }
        }
        Ok(SeriesCmp::Pass)
    }

    /// Compare like [`Self::equal`], but demand that every coefficient up
    /// to `required.max` be knowable on both sides; otherwise the result is
    /// [`SeriesCmp::Inconclusive`] even if the knowable parts agree.
    /// (Coefficients below a support floor are knowably zero, so only the
    /// caps can render a window unknowable.)
    pub fn equal_on(
        &self,
        other: &Self,
        required: &TruncationProfile,
    ) -> Result<SeriesCmp, AlgebraError> {
        self.check_registry(other)?;
        let n = self.exact.len();
        assert_eq!(required.len(), n);
        if (0..n).any(|i| required.max(i) > self.exact.max(i).min(other.exact.max(i))) {
            return Ok(SeriesCmp::Inconclusive);
        }
        self.equal(other)
    }

    /// Lower the caps to `p.max` (storage and exactness shrink together).
    /// Floors are never raised, since dropping low terms would break the
    /// support bound.
    pub fn truncate_caps(&self, p: &TruncationProfile) -> Self {
        let n = self.exact.len();
        let cap: Vec<i64> = (0..n).map(|i| self.exact.max(i).min(p.max(i))).collect();
        let floor: Vec<i64> = (0..n).map(|i| self.exact.min(i)).collect();
        let kept = self.poly.filtered(|e| (0..n).all(|i| e.0[i] <= cap[i]));
        let w = TruncationProfile::from_bounds(floor, cap);
        TruncatedSeries {
            poly: kept,
            profile: w.clone(),
            exact: w,
        }
    }

    /// Replace `var` by an exact scalar. Only sound on entire series; a
    /// truncated tail would fold unknown coefficients into every residual
    /// monomial.
    pub fn substitute_scalar(&self, var: &str, value: &ExactScalar) -> Result<Self, AlgebraError> {
        if !self.is_entire() {
            return Err(AlgebraError::UnsoundSubstitution);
        }
        Ok(Self::from_poly_entire(self.poly.substitute_scalar(var, value)?))
    }

    /// Replace `var` by a monomial `c * x^m`. Only sound on entire series.
    pub fn substitute_monomial(
        &self,
        var: &str,
        c: &ExactScalar,
        m: &ExponentVector,
    ) -> Result<Self, AlgebraError> {
        if !self.is_entire() {
            return Err(AlgebraError::UnsoundSubstitution);
        }
        Ok(Self::from_poly_entire(self.poly.substitute_monomial(var, c, m)?))
    }

    /// The series coefficient of `var^k`, still over the same registry but
    /// independent of `var`.
    pub fn coeff_of_var_power(&self, var: &str, k: i64) -> Result<Self, AlgebraError> {
        let i = self
            .registry()
            .index_of(var)
            .ok_or_else(|| AlgebraError::UnknownVariable(alloc::string::String::from(var)))?;
        if k < self.exact.min(i) {
            return Ok(Self::zero(self.registry()));
        }
        if k > self.exact.max(i) {
            return Err(AlgebraError::OutsideExactRegion);
        }
        let n = self.exact.len();
        let mut floor: Vec<i64> = (0..n).map(|j| self.exact.min(j)).collect();
        let mut cap: Vec<i64> = (0..n).map(|j| self.exact.max(j)).collect();
        floor[i] = 0;
        cap[i] = UNBOUNDED;
        let w = TruncationProfile::from_bounds(floor, cap);
        Ok(TruncatedSeries {
            poly: self.poly.coeff_of_var_power(var, k),
            profile: w.clone(),
            exact: w,
        })
    }

    /// Move into a larger registry; fresh variables get an unbounded exact
    /// window (the series does not depend on them).
    pub fn embed(&self, target: &Arc<VarRegistry>) -> Result<Self, AlgebraError> {
        let poly = self.poly.embed(target)?;
        let mut floor = alloc::vec![0i64; target.len()];
        let mut cap = alloc::vec![UNBOUNDED; target.len()];
        for (j, name) in self.registry().names().enumerate() {
            if let Some(t) = target.index_of(name) {
                floor[t] = self.exact.min(j);
                cap[t] = self.exact.max(j);
            }
        }
        let w = TruncationProfile::from_bounds(floor, cap);
        Ok(TruncatedSeries {
            poly,
            profile: w.clone(),
            exact: w,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn reg_a() -> Arc<VarRegistry> {
        VarRegistry::with_params(&["a"])
    }

    fn geom_profile(r: &VarRegistry, qcap: i64, acap: i64) -> TruncationProfile {
        TruncationProfile::caps(r, &[("a", acap), ("q", qcap)])
    }

    #[test]
    fn one_minus_q_times_geometric_is_one() {
        let r = reg_a();
        let p = geom_profile(&r, 10, 4);
        let one_minus_q =
            TruncatedSeries::from_poly_entire(SparsePoly::one(&r).sub(&SparsePoly::q_pow(&r, int(1), 1)));
        let geo = one_minus_q.invert(&p).unwrap();
        // 1 + q + ... + q^10
        assert_eq!(geo.poly().num_terms(), 11);
        let prod = one_minus_q.mul(&geo).unwrap();
        assert_eq!(prod.equal(&TruncatedSeries::one(&r)).unwrap(), SeriesCmp::Pass);
    }

    #[test]
    fn invert_in_parameter_variable() {
        let r = reg_a();
        let p = geom_profile(&r, 6, 5);
        let s = TruncatedSeries::from_poly_entire(SparsePoly::one(&r).sub(&SparsePoly::var(&r, "a")));
        let inv = s.invert(&p).unwrap();
        for k in 0..=5 {
            let mut e = ExponentVector::zeros(2);
            e.0[0] = k;
            assert_eq!(inv.coeff(&e).unwrap(), int(1));
        }
    }

    #[test]
    fn invert_rejects_non_unit() {
        let r = reg_a();
        let p = geom_profile(&r, 6, 2);
        let s = TruncatedSeries::from_poly_entire(SparsePoly::var(&r, "a"));
        assert_eq!(s.invert(&p).unwrap_err(), AlgebraError::NonUnitConstantTerm);
    }

    #[test]
    fn invert_rejects_negative_exponents() {
        let r = reg_a();
        let p = geom_profile(&r, 6, 2);
        let s = TruncatedSeries::from_poly_entire(
            SparsePoly::one(&r).add(&SparsePoly::q_pow(&r, int(1), -1)),
        );
        assert_eq!(s.invert(&p).unwrap_err(), AlgebraError::NegativeExponents);
    }

    #[test]
    fn laurent_shift_moves_the_cap() {
        let r = reg_a();
        let p = geom_profile(&r, 10, 2);
        let geo = TruncatedSeries::from_poly_entire(
            SparsePoly::one(&r).sub(&SparsePoly::q_pow(&r, int(1), 1)),
        )
        .invert(&p)
        .unwrap();
        let shift = TruncatedSeries::from_poly_entire(SparsePoly::q_pow(&r, int(1), -3));
        let shifted = geo.mul(&shift).unwrap();
        let qi = r.q_index();
        assert_eq!(shifted.exact_region().min(qi), -3);
        assert_eq!(shifted.exact_region().max(qi), 7);
    }

    #[test]
    fn mismatch_witness_is_first_in_order() {
        let r = VarRegistry::q_only();
        let p = TruncationProfile::caps(&r, &[("q", 10)]);
        let a = TruncatedSeries::from_poly(
            SparsePoly::one(&r).add(&SparsePoly::q_pow(&r, int(1), 1)),
            &p,
        )
        .unwrap();
        let b = TruncatedSeries::from_poly(
            SparsePoly::one(&r)
                .add(&SparsePoly::q_pow(&r, int(1), 1))
                .add(&SparsePoly::q_pow(&r, int(1), 9))
                .add(&SparsePoly::q_pow(&r, int(2), 10)),
            &p,
        )
        .unwrap();
        match a.equal(&b).unwrap() {
            SeriesCmp::Fail { exponent, lhs, rhs } => {
                assert_eq!(exponent.0, alloc::vec![9]);
                assert_eq!(lhs, int(0));
                assert_eq!(rhs, int(1));
            }
            other => panic!("expected Fail, got {other:?}"),
        }
    }

    #[test]
    fn support_floor_makes_low_coefficients_knowable() {
        let r = VarRegistry::q_only();
        let lo = TruncationProfile::caps(&r, &[("q", 3)]);
        let s1 = TruncatedSeries::from_poly(SparsePoly::one(&r), &lo).unwrap();
        // support bound q >= 5: coefficients below q^5 are knowably zero,
        // so the comparison is decidable and fails at q^0
        let hi = TruncationProfile::from_bounds(alloc::vec![5], alloc::vec![8]);
        let s2 = TruncatedSeries::from_poly(SparsePoly::q_pow(&r, int(1), 5), &hi).unwrap();
        match s1.equal(&s2).unwrap() {
            SeriesCmp::Fail { exponent, lhs, rhs } => {
                assert_eq!(exponent.0, alloc::vec![0]);
                assert_eq!(lhs, int(1));
                assert_eq!(rhs, int(0));
            }
            other => panic!("expected Fail, got {other:?}"),
        }
    }

    #[test]
    fn insufficient_exactness_is_inconclusive() {
        let r = VarRegistry::q_only();
        let lo = TruncationProfile::caps(&r, &[("q", 3)]);
        let s1 = TruncatedSeries::from_poly(SparsePoly::one(&r), &lo).unwrap();
        let s2 = TruncatedSeries::one(&r);
        // both sides agree where known, but the requested window q <= 6
        // exceeds s1's exact cap
        let want = TruncationProfile::caps(&r, &[("q", 6)]);
        assert_eq!(s1.equal_on(&s2, &want).unwrap(), SeriesCmp::Inconclusive);
        let modest = TruncationProfile::caps(&r, &[("q", 3)]);
        assert_eq!(s1.equal_on(&s2, &modest).unwrap(), SeriesCmp::Pass);
    }

    #[test]
    fn substitution_only_on_entire_series() {
        let r = reg_a();
        let p = geom_profile(&r, 5, 5);
        let trunc = TruncatedSeries::from_poly_entire(
            SparsePoly::one(&r).sub(&SparsePoly::var(&r, "a")),
        )
        .invert(&p)
        .unwrap();
        assert_eq!(
            trunc.substitute_scalar("a", &int(2)).unwrap_err(),
            AlgebraError::UnsoundSubstitution
        );
        let poly = TruncatedSeries::from_poly_entire(
            SparsePoly::var(&r, "a").add(&SparsePoly::var(&r, "a").pow(2)),
        );
        let v = poly.substitute_scalar("a", &crate::scalar::ratio(2, 3)).unwrap();
        assert_eq!(
            v.poly().coeff(&ExponentVector::zeros(2)),
            crate::scalar::ratio(10, 9)
        );
    }
}
