//! Exact computer-algebra kernel for truncated formal power series in `q`
//! with multivariate Laurent-polynomial coefficients over arbitrary-precision
//! rationals, together with a catalog of q-series identities (Pochhammer
//! products, Rogers-Szegő polynomials, basic hypergeometric sums, Bailey
//! pairs, partial theta functions) that are verified by exact coefficient
//! comparison.
//!
//! The crate is `no_std` (with `alloc`); all arithmetic is exact and every
//! value is immutable after construction, so everything here can be shared
//! freely across threads by a driver.

#![no_std]

extern crate alloc;

pub mod scalar;
pub mod vars;
pub mod poly;
pub mod series;
pub mod ratfun;
pub mod qfrac;
pub mod qtools;
pub mod inversion;
pub mod finite;
pub mod bailey;
pub mod catalog;

pub use scalar::ExactScalar;
pub use vars::{AlgebraError, ExponentVector, TruncationProfile, VarRegistry};
pub use poly::SparsePoly;
pub use series::TruncatedSeries;
pub use ratfun::RationalFunction;
pub use catalog::{IdentityRecord, VerificationOutcome, VerifyStatus};
