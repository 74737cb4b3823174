//! Sparse multivariate Laurent polynomials over exact rationals.
//!
//! All arithmetic here is exact and untruncated; the truncated-series layer
//! builds on top of this. Terms are kept in a `BTreeMap` keyed by the
//! graded-lexicographic exponent order, so equality is structural and
//! iteration order is canonical.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::scalar::{self, ExactScalar};
use crate::vars::{AlgebraError, ExponentVector, VarRegistry};

/// Sparse Laurent polynomial: a map from exponent vectors to nonzero
/// rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    registry: Arc<VarRegistry>,
    terms: BTreeMap<ExponentVector, ExactScalar>,
}

impl SparsePoly {
    pub fn zero(registry: &Arc<VarRegistry>) -> Self {
        SparsePoly {
            registry: registry.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(registry: &Arc<VarRegistry>, c: ExactScalar) -> Self {
        let mut p = Self::zero(registry);
        if !c.is_zero() {
            p.terms.insert(ExponentVector::zeros(registry.len()), c);
        }
        p
    }

    pub fn one(registry: &Arc<VarRegistry>) -> Self {
        Self::constant(registry, scalar::one())
    }

    /// The monomial `c * x^e`.
    pub fn monomial(registry: &Arc<VarRegistry>, c: ExactScalar, e: ExponentVector) -> Self {
        assert_eq!(e.len(), registry.len());
        let mut p = Self::zero(registry);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// The variable `name` to the first power.
    pub fn var(registry: &Arc<VarRegistry>, name: &str) -> Self {
        let i = registry
            .index_of(name)
            .unwrap_or_else(|| panic!("unknown variable `{name}`"));
        Self::monomial(
            registry,
            scalar::one(),
            ExponentVector::unit(registry.len(), i),
        )
    }

    /// `c * name^e` (e may be negative).
    pub fn var_pow(registry: &Arc<VarRegistry>, c: ExactScalar, name: &str, e: i64) -> Self {
        let i = registry
            .index_of(name)
            .unwrap_or_else(|| panic!("unknown variable `{name}`"));
        let mut ev = ExponentVector::zeros(registry.len());
        ev.0[i] = e;
        Self::monomial(registry, c, ev)
    }

    /// `c * q^e`.
    pub fn q_pow(registry: &Arc<VarRegistry>, c: ExactScalar, e: i64) -> Self {
        let mut ev = ExponentVector::zeros(registry.len());
        ev.0[registry.q_index()] = e;
        Self::monomial(registry, c, ev)
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.registry
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &ExponentVector) -> ExactScalar {
        self.terms.get(e).cloned().unwrap_or_else(scalar::zero)
    }

    /// Is this a single term (or zero)?
    pub fn as_monomial(&self) -> Option<(&ExponentVector, &ExactScalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Smallest exponent of `var` over the support; `0` for the zero
    /// polynomial.
    pub fn support_min(&self, var_index: usize) -> i64 {
        self.terms
            .keys()
            .map(|e| e.0[var_index])
            .min()
            .unwrap_or(0)
    }

    pub fn support_max(&self, var_index: usize) -> i64 {
        self.terms
            .keys()
            .map(|e| e.0[var_index])
            .max()
            .unwrap_or(0)
    }

    fn insert_term(terms: &mut BTreeMap<ExponentVector, ExactScalar>, e: ExponentVector, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        match terms.entry(e) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(
            Arc::ptr_eq(&self.registry, &other.registry) || self.registry == other.registry,
            "registry mismatch"
        );
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::insert_term(&mut terms, e.clone(), c.clone());
        }
        SparsePoly {
            registry: self.registry.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            registry: self.registry.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.registry);
        }
        SparsePoly {
            registry: self.registry.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, t)| (e.clone(), t.clone() * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_windowed(other, None)
    }

    /// Product, optionally discarding any term whose exponent exceeds
    /// `cap` (componentwise) or drops below `floor`. Used by the series
    /// layer; `None` keeps everything.
    pub fn mul_windowed(&self, other: &Self, window: Option<(&[i64], &[i64])>) -> Self {
        assert!(
            Arc::ptr_eq(&self.registry, &other.registry) || self.registry == other.registry,
            "registry mismatch"
        );
        let (small, big) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut terms = BTreeMap::new();
        for (e1, c1) in &small.terms {
            for (e2, c2) in &big.terms {
                let e = e1.add(e2);
                if let Some((floor, cap)) = window {
                    let inside = e
                        .0
                        .iter()
                        .zip(floor.iter().zip(cap.iter()))
                        .all(|(x, (lo, hi))| lo <= x && x <= hi);
                    if !inside {
                        continue;
                    }
                }
                Self::insert_term(&mut terms, e, c1.clone() * c2.clone());
            }
        }
        SparsePoly {
            registry: self.registry.clone(),
            terms,
        }
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut acc = Self::one(&self.registry);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Keep only the terms whose exponent satisfies the predicate.
    pub fn filtered<F: Fn(&ExponentVector) -> bool>(&self, keep: F) -> Self {
        SparsePoly {
            registry: self.registry.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Replace `var` by the scalar `value`, exactly. A negative exponent of
    /// `var` requires `value != 0`.
    pub fn substitute_scalar(&self, var: &str, value: &ExactScalar) -> Result<Self, AlgebraError> {
        let i = self
            .registry
            .index_of(var)
            .ok_or_else(|| AlgebraError::UnknownVariable(String::from(var)))?;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e.0[i];
            if k < 0 && value.is_zero() {
                return Err(AlgebraError::ZeroDenominator);
            }
            let factor = if k == 0 && value.is_zero() {
                scalar::one()
            } else if value.is_zero() {
                // k > 0, term vanishes
                continue;
            } else {
                scalar::pow(value, k)
            };
            let mut e2 = e.clone();
            e2.0[i] = 0;
            Self::insert_term(&mut terms, e2, c.clone() * factor);
        }
        Ok(SparsePoly {
            registry: self.registry.clone(),
            terms,
        })
    }

    /// Replace `var` by the monomial `c * x^m` (over the same registry,
    /// with `m` having exponent 0 for `var` itself). Negative powers of
    /// `var` invert the monomial, which is always possible for `c != 0`.
    pub fn substitute_monomial(
        &self,
        var: &str,
        c: &ExactScalar,
        m: &ExponentVector,
    ) -> Result<Self, AlgebraError> {
        let i = self
            .registry
            .index_of(var)
            .ok_or_else(|| AlgebraError::UnknownVariable(String::from(var)))?;
        assert_eq!(m.0[i], 0, "replacement monomial may not contain the variable itself");
        let mut terms = BTreeMap::new();
        for (e, k_coeff) in &self.terms {
            let k = e.0[i];
            if k != 0 && c.is_zero() {
                if k < 0 {
                    return Err(AlgebraError::ZeroDenominator);
                }
                continue;
            }
            let factor = if k == 0 { scalar::one() } else { scalar::pow(c, k) };
            let mut e2 = e.clone();
            e2.0[i] = 0;
            for (j, mj) in m.0.iter().enumerate() {
                e2.0[j] += k * mj;
            }
            Self::insert_term(&mut terms, e2, k_coeff.clone() * factor);
        }
        Ok(SparsePoly {
            registry: self.registry.clone(),
            terms,
        })
    }

    /// Coefficient of `var^k`, as a polynomial with the `var` exponent
    /// zeroed out.
    pub fn coeff_of_var_power(&self, var: &str, k: i64) -> Self {
        let i = self.registry.index_of(var).expect("unknown variable");
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e.0[i] == k {
                let mut e2 = e.clone();
                e2.0[i] = 0;
                terms.insert(e2, c.clone());
            }
        }
        SparsePoly {
            registry: self.registry.clone(),
            terms,
        }
    }

    /// Move this polynomial into another registry; every variable occurring
    /// in the support must exist (by name) in the target.
    pub fn embed(&self, target: &Arc<VarRegistry>) -> Result<Self, AlgebraError> {
        let mut map: Vec<Option<usize>> = Vec::with_capacity(self.registry.len());
        for name in self.registry.names() {
            map.push(target.index_of(name));
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = ExponentVector::zeros(target.len());
            for (j, &x) in e.0.iter().enumerate() {
                if x != 0 {
                    match map[j] {
                        Some(t) => e2.0[t] = x,
                        None => {
                            return Err(AlgebraError::UnknownVariable(String::from(
                                self.registry.name(j),
                            )))
                        }
                    }
                }
            }
            terms.insert(e2, c.clone());
        }
        Ok(SparsePoly {
            registry: target.clone(),
            terms,
        })
    }

    /// Evaluate at a full scalar assignment (one value per variable).
    pub fn eval(&self, values: &[ExactScalar]) -> Result<ExactScalar, AlgebraError> {
        assert_eq!(values.len(), self.registry.len());
        let mut acc = scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (j, &k) in e.0.iter().enumerate() {
                if k != 0 {
                    if values[j].is_zero() && k < 0 {
                        return Err(AlgebraError::ZeroDenominator);
                    }
                    t *= scalar::pow(&values[j], k);
                }
            }
            acc += t;
        }
        Ok(acc)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (j, &k) in e.0.iter().enumerate() {
                if k != 0 {
                    write!(f, "*{}^{}", self.registry.name(j), k)?;
                }
            }
        }
        Ok(())
    }
}
