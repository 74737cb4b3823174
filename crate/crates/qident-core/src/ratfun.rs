//! Exact rational functions: quotients of sparse Laurent polynomials.
//!
//! No multivariate gcd is performed; equality is decided by
//! cross-multiplication, which is exact and complete. Normalization is
//! light: a common monomial shift makes all exponents nonnegative with at
//! least one zero per variable, and the denominator's leading coefficient
//! (in the canonical term order) is scaled to one.

use core::fmt;

use num_traits::One;

use crate::poly::SparsePoly;
use crate::scalar::{self, ExactScalar};
use crate::vars::{AlgebraError, ExponentVector};

#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: SparsePoly,
    den: SparsePoly,
}

impl RationalFunction {
    pub fn new(num: SparsePoly, den: SparsePoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        let mut rf = RationalFunction { num, den };
        rf.normalize();
        Ok(rf)
    }

    pub fn from_poly(p: SparsePoly) -> Self {
        let one = SparsePoly::one(p.registry());
        RationalFunction { num: p, den: one }
    }

    pub fn one(registry: &alloc::sync::Arc<crate::vars::VarRegistry>) -> Self {
        Self::from_poly(SparsePoly::one(registry))
    }

    pub fn zero(registry: &alloc::sync::Arc<crate::vars::VarRegistry>) -> Self {
        Self::from_poly(SparsePoly::zero(registry))
    }

    pub fn num(&self) -> &SparsePoly {
        &self.num
    }

    pub fn den(&self) -> &SparsePoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = SparsePoly::one(self.den.registry());
            return;
        }
        let n = self.num.registry().len();
        // shift out the common monomial so exponents start at zero
        let shift: alloc::vec::Vec<i64> = (0..n)
            .map(|i| self.num.support_min(i).min(self.den.support_min(i)))
            .collect();
        if shift.iter().any(|&s| s != 0) {
            let m = ExponentVector(shift.iter().map(|s| -s).collect());
            let mono = SparsePoly::monomial(self.num.registry(), scalar::one(), m);
            self.num = self.num.mul(&mono);
            self.den = self.den.mul(&mono);
        }
        // scale so the denominator's leading coefficient is one
        let lead = self
            .den
            .terms()
            .last()
            .map(|(_, c)| c.clone())
            .expect("nonzero denominator");
        if !lead.is_one() {
            let inv = lead.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RationalFunction::new(num, den).expect("product of nonzero denominators")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalFunction::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("product of nonzero denominators")
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: i64) -> Result<Self, AlgebraError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::one(self.num.registry());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
}

/// `p/q = r/s  iff  p*s = r*q`; exact and gcd-free.
impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RationalFunction {}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}
