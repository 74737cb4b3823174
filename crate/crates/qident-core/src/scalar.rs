//! The coefficient field: arbitrary-precision rationals.
//!
//! `BigRational` already maintains the invariants we need (lowest terms,
//! positive denominator, exact arithmetic), so the kernel uses it directly
//! under a domain alias.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational scalar. Always stored in lowest terms with a positive
/// denominator; arithmetic never rounds.
pub type ExactScalar = BigRational;

/// Integer scalar.
pub fn int(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact quotient `num / den`. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> ExactScalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> ExactScalar {
    BigRational::zero()
}

pub fn one() -> ExactScalar {
    BigRational::one()
}

/// `s^e` for a (possibly negative) integer exponent. Panics when `s = 0`
/// and `e < 0`.
pub fn pow(s: &ExactScalar, e: i64) -> ExactScalar {
    if e >= 0 {
        num_traits::pow::pow(s.clone(), e as usize)
    } else {
        assert!(!s.is_zero(), "zero has no negative power");
        num_traits::pow::pow(s.clone(), (-e) as usize).recip()
    }
}

/// `(-1)^n` as a scalar.
pub fn neg_one_pow(n: i64) -> ExactScalar {
    if n.rem_euclid(2) == 0 {
        one()
    } else {
        -one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_is_reduced() {
        assert_eq!(ratio(4, 6), ratio(2, 3));
        assert_eq!(ratio(-4, -6), ratio(2, 3));
        assert_eq!(ratio(4, -6), ratio(-2, 3));
    }

    #[test]
    fn negative_powers() {
        assert_eq!(pow(&ratio(2, 3), -2), ratio(9, 4));
        assert_eq!(pow(&int(5), 0), one());
    }
}
