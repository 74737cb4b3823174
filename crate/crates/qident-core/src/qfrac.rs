//! Fractions with factored q-Pochhammer denominators.
//!
//! Every denominator occurring in the finite identities of this crate is a
//! product of binomial factors `1 - c*x^e` (Pochhammer factors, possibly
//! with rational `c` and Laurent monomial `x^e`). Keeping the denominator
//! as a multiset of such factors gives cheap least-common-denominator
//! addition — the alternative, blind cross-multiplication, makes the sums
//! over `k` in the Bailey and T-sum identities quadratically expensive.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;

use num_traits::One;

use crate::poly::SparsePoly;
use crate::ratfun::RationalFunction;
use crate::scalar::ExactScalar;
use crate::series::TruncatedSeries;
use crate::vars::{AlgebraError, ExponentVector, TruncationProfile, VarRegistry};

/// A binomial factor `1 - c * x^e`.
type Factor = (ExponentVector, ExactScalar);

#[derive(Clone, Debug)]
pub struct PochFrac {
    num: SparsePoly,
    den: BTreeMap<Factor, u32>,
}

fn factor_poly(registry: &Arc<VarRegistry>, f: &Factor) -> SparsePoly {
    SparsePoly::one(registry).sub(&SparsePoly::monomial(registry, f.1.clone(), f.0.clone()))
}

impl PochFrac {
    pub fn from_poly(num: SparsePoly) -> Self {
        PochFrac {
            num,
            den: BTreeMap::new(),
        }
    }

    pub fn one(registry: &Arc<VarRegistry>) -> Self {
        Self::from_poly(SparsePoly::one(registry))
    }

    pub fn zero(registry: &Arc<VarRegistry>) -> Self {
        Self::from_poly(SparsePoly::zero(registry))
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        self.num.registry()
    }

    pub fn num(&self) -> &SparsePoly {
        &self.num
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul_poly(&self, p: &SparsePoly) -> Self {
        PochFrac {
            num: self.num.mul(p),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        PochFrac {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        PochFrac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    /// Divide by `1 - c * x^e`. Fails when the factor is identically zero
    /// (`e = 0`, `c = 1`).
    pub fn div_factor(&self, e: ExponentVector, c: ExactScalar) -> Result<Self, AlgebraError> {
        if e.is_zero() && c.is_one() {
            return Err(AlgebraError::ZeroDenominator);
        }
        let mut den = self.den.clone();
        *den.entry((e, c)).or_insert(0) += 1;
        Ok(PochFrac {
            num: self.num.clone(),
            den,
        })
    }

    /// Multiply by `1 - c * x^e`, cancelling against the denominator when
    /// possible.
    pub fn mul_factor(&self, e: ExponentVector, c: ExactScalar) -> Self {
        let key = (e, c);
        let mut den = self.den.clone();
        if let Some(m) = den.get_mut(&key) {
            *m -= 1;
            if *m == 0 {
                den.remove(&key);
            }
            return PochFrac {
                num: self.num.clone(),
                den,
            };
        }
        PochFrac {
            num: self.num.mul(&factor_poly(self.registry(), &key)),
            den,
        }
    }

    fn expand(registry: &Arc<VarRegistry>, factors: &BTreeMap<Factor, u32>) -> SparsePoly {
        let mut acc = SparsePoly::one(registry);
        for (f, &m) in factors {
            let fp = factor_poly(registry, f);
            for _ in 0..m {
                acc = acc.mul(&fp);
            }
        }
        acc
    }

    /// Multiset difference `all \ sub` (assumes containment).
    fn cofactor(&self, lcm: &BTreeMap<Factor, u32>) -> SparsePoly {
        let mut diff = BTreeMap::new();
        for (f, &m) in lcm {
            let have = self.den.get(f).copied().unwrap_or(0);
            if m > have {
                diff.insert(f.clone(), m - have);
            }
        }
        Self::expand(self.registry(), &diff)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut lcm = self.den.clone();
        for (f, &m) in &other.den {
            let e = lcm.entry(f.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        let num = self
            .num
            .mul(&self.cofactor(&lcm))
            .add(&other.num.mul(&other.cofactor(&lcm)));
        PochFrac { num, den: lcm }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        // cancel shared factors pairwise before multiplying numerators
        let mut r = PochFrac {
            num: self.num.mul(&other.num),
            den: self.den.clone(),
        };
        for (f, &m) in &other.den {
            let e = r.den.entry(f.clone()).or_insert(0);
            *e += m;
        }
        r
    }

    /// Exact equality (complete, gcd-free): the difference over the common
    /// denominator has a zero numerator.
    pub fn equal(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Apply a polynomial transformation (e.g. a substitution) to the
    /// numerator, keeping the factored denominator.
    pub fn map_num<F: FnOnce(&SparsePoly) -> SparsePoly>(&self, f: F) -> Self {
        PochFrac {
            num: f(&self.num),
            den: self.den.clone(),
        }
    }

    /// When `self != other`, the first exponent (canonical order) where the
    /// cross-multiplied numerators over the common denominator disagree,
    /// with both coefficients.
    pub fn difference_witness(
        &self,
        other: &Self,
    ) -> Option<(ExponentVector, ExactScalar, ExactScalar)> {
        let mut lcm = self.den.clone();
        for (f, &m) in &other.den {
            let e = lcm.entry(f.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        let l = self.num.mul(&self.cofactor(&lcm));
        let r = other.num.mul(&other.cofactor(&lcm));
        let mut keys: alloc::collections::BTreeSet<ExponentVector> = alloc::collections::BTreeSet::new();
        keys.extend(l.terms().map(|(e, _)| e.clone()));
        keys.extend(r.terms().map(|(e, _)| e.clone()));
        for e in keys {
            let lc = l.coeff(&e);
            let rc = r.coeff(&e);
            if lc != rc {
                return Some((e, lc, rc));
            }
        }
        None
    }

    /// Re-express over a larger registry (every current variable must exist
    /// in the target).
    pub fn embed(&self, target: &Arc<VarRegistry>) -> Result<Self, AlgebraError> {
        let src = self.registry();
        let mut map: alloc::vec::Vec<usize> = alloc::vec::Vec::with_capacity(src.len());
        for name in src.names() {
            map.push(
                target
                    .index_of(name)
                    .ok_or_else(|| AlgebraError::UnknownVariable(alloc::string::String::from(name)))?,
            );
        }
        let mut den = BTreeMap::new();
        for ((e, c), &m) in &self.den {
            let mut e2 = ExponentVector::zeros(target.len());
            for (j, &x) in e.0.iter().enumerate() {
                e2.0[map[j]] = x;
            }
            den.insert((e2, c.clone()), m);
        }
        Ok(PochFrac {
            num: self.num.embed(target)?,
            den,
        })
    }

    pub fn to_ratfun(&self) -> Result<RationalFunction, AlgebraError> {
        RationalFunction::new(self.num.clone(), Self::expand(self.registry(), &self.den))
    }

    /// Expand into a truncated series on `profile`. All denominator
    /// factors must have nonnegative exponents and a unit constant term.
    pub fn to_series(&self, profile: &TruncationProfile) -> Result<TruncatedSeries, AlgebraError> {
        let mut acc = TruncatedSeries::from_poly_entire(self.num.clone());
        for ((e, c), &m) in &self.den {
            if e.0.iter().any(|&x| x < 0) {
                return Err(AlgebraError::NegativeExponents);
            }
            let f = TruncatedSeries::from_poly_entire(factor_poly(
                self.registry(),
                &(e.clone(), c.clone()),
            ));
            let inv = f.invert(profile)?;
            for _ in 0..m {
                acc = acc.mul(&inv)?;
            }
        }
        Ok(acc.truncate_caps(profile))
    }
}
