//! Variable registries, exponent vectors, and truncation profiles.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Errors raised by the algebra layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraError {
    /// Two operands live over different variable registries.
    RegistryMismatch,
    /// A variable name is unknown to the registry.
    UnknownVariable(String),
    /// Inversion of a series whose constant term is zero.
    NonUnitConstantTerm,
    /// Inversion (or another operation) met negative exponents it cannot
    /// handle soundly.
    NegativeExponents,
    /// Division by the zero polynomial.
    ZeroDenominator,
    /// A coefficient was requested outside the exact region.
    OutsideExactRegion,
    /// Substitution result cannot be bounded soundly on this profile.
    UnsoundSubstitution,
    /// A polynomial had support below the target profile floor; the profile
    /// must be widened, silently dropping low terms would be unsound.
    BelowProfileFloor,
    /// A Pochhammer factor degenerates to zero (e.g. `(1;q)_inf`).
    VanishingFactor,
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::RegistryMismatch => write!(f, "variable registries differ"),
            AlgebraError::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            AlgebraError::NonUnitConstantTerm => write!(f, "constant term is not invertible"),
            AlgebraError::NegativeExponents => write!(f, "negative exponents not permitted here"),
            AlgebraError::ZeroDenominator => write!(f, "division by the zero polynomial"),
            AlgebraError::OutsideExactRegion => write!(f, "exponent outside the exact region"),
            AlgebraError::UnsoundSubstitution => write!(f, "substitution not sound on this profile"),
            AlgebraError::BelowProfileFloor => write!(f, "support below the profile floor"),
            AlgebraError::VanishingFactor => write!(f, "a product factor vanishes identically"),
        }
    }
}

/// Ordered list of variable names. The position of `q` is distinguished;
/// by convention the catalog always registers `q` as the *last* variable so
/// that the graded-lexicographic term order compares `q` last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarRegistry {
    names: Vec<String>,
    q_index: usize,
}

impl VarRegistry {
    /// Build a registry from explicit names. `q` must be present and names
    /// must be unique.
    pub fn new(names: &[&str]) -> Arc<Self> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            assert!(
                !names[..i].contains(n),
                "duplicate variable name `{n}` in registry"
            );
        }
        let q_index = names
            .iter()
            .position(|n| n == "q")
            .expect("registry must contain `q`");
        Arc::new(VarRegistry { names, q_index })
    }

    /// Registry holding the given parameters followed by `q`.
    pub fn with_params(params: &[&str]) -> Arc<Self> {
        let mut names: Vec<&str> = params.to_vec();
        names.push("q");
        Self::new(&names)
    }

    /// Registry over `q` alone.
    pub fn q_only() -> Arc<Self> {
        Self::new(&["q"])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn q_index(&self) -> usize {
        self.q_index
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(|s| s.as_str())
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// One integer exponent per registry variable; negative exponents are
/// allowed (Laurent variables).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn zeros(n: usize) -> Self {
        ExponentVector(alloc::vec![0; n])
    }

    /// Unit vector: exponent 1 in position `i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = alloc::vec![0i64; n];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        ExponentVector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

/// Graded-lexicographic order over the registry's variable order. Since the
/// catalog registers `q` last, ties in total degree are broken on the
/// parameter variables first and on `q` last.
impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Per-variable exponent window `[min, max]`. Used both as the storage
/// window of a truncated series and as its exactness certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationProfile {
    min: Vec<i64>,
    max: Vec<i64>,
}

impl TruncationProfile {
    /// Window `[0, cap]` for every variable, caps given by name.
    /// Every registry variable must receive a cap.
    pub fn caps(registry: &VarRegistry, caps: &[(&str, i64)]) -> Self {
        let mut max = alloc::vec![i64::MIN; registry.len()];
        for (name, cap) in caps {
            let i = registry
                .index_of(name)
                .unwrap_or_else(|| panic!("unknown variable `{name}` in caps"));
            max[i] = *cap;
        }
        assert!(
            max.iter().all(|&m| m != i64::MIN),
            "every variable needs a cap"
        );
        TruncationProfile {
            min: alloc::vec![0; registry.len()],
            max,
        }
    }

    /// Lower the floor of one variable (Laurent window).
    pub fn with_min(mut self, registry: &VarRegistry, name: &str, min: i64) -> Self {
        let i = registry.index_of(name).expect("unknown variable");
        self.min[i] = min;
        assert!(self.min[i] <= self.max[i]);
        self
    }

    pub fn from_bounds(min: Vec<i64>, max: Vec<i64>) -> Self {
        assert_eq!(min.len(), max.len());
        TruncationProfile { min, max }
    }

    pub fn len(&self) -> usize {
        self.min.len()
    }

    pub fn is_empty(&self) -> bool {
        self.min.is_empty()
    }

    pub fn min(&self, i: usize) -> i64 {
        self.min[i]
    }

    pub fn max(&self, i: usize) -> i64 {
        self.max[i]
    }

    pub fn mins(&self) -> &[i64] {
        &self.min
    }

    pub fn maxs(&self) -> &[i64] {
        &self.max
    }

    /// True when `min <= max` holds for every variable.
    pub fn is_nonempty_window(&self) -> bool {
        self.min.iter().zip(&self.max).all(|(lo, hi)| lo <= hi)
    }

    pub fn contains(&self, e: &ExponentVector) -> bool {
        e.0.iter()
            .zip(self.min.iter().zip(&self.max))
            .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    /// Componentwise window intersection. May produce an empty window
    /// (`min > max` somewhere); callers check `is_nonempty_window`.
    pub fn intersect(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        TruncationProfile {
            min: self
                .min
                .iter()
                .zip(&other.min)
                .map(|(a, b)| (*a).max(*b))
                .collect(),
            max: self
                .max
                .iter()
                .zip(&other.max)
                .map(|(a, b)| (*a).min(*b))
                .collect(),
        }
    }

    /// True when `self` is contained in `other` componentwise.
    pub fn contained_in(&self, other: &Self) -> bool {
        self.min
            .iter()
            .zip(&other.min)
            .all(|(a, b)| a >= b)
            && self.max.iter().zip(&other.max).all(|(a, b)| a <= b)
    }
}
