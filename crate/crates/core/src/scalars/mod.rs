//! Exact scalar domains: rationals, integer polynomials, the rational
//! function field `Q(t)` and quadratic extensions `Q(sqrt d)`.

mod poly;
mod quadratic;
mod ratfunc;
mod rational;

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

pub use num_bigint::BigInt;
pub use poly::{divisors, IntPoly};
pub use quadratic::{square_free_part, QuadElem};
pub use ratfunc::RatFunc;
pub use rational::{parse_rational, BigRat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("{0} is not a valid quadratic field parameter (must be square-free and not 0 or 1)")]
    BadDiscriminant(i64),
    #[error("cannot parse scalar from {0:?}")]
    Parse(String),
}

/// An exact field with decidable equality and a `Q`-algebra structure.
///
/// Method names avoid `add`/`mul` so they never collide with the
/// `std::ops` impls that some element types already carry.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;
    fn from_rational(r: &BigRat) -> Self;
    /// A fixed total order used only for deterministic sorting.
    fn canonical_cmp(&self, other: &Self) -> Ordering;
    /// Inverse of `Display`.
    fn parse_text(s: &str) -> Result<Self, ScalarError>;

    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negate())
    }

    fn divide(&self, rhs: &Self) -> Option<Self> {
        rhs.inverse().map(|inv| self.times(&inv))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_int(i: i64) -> Self {
        Self::from_rational(&BigRat::from_integer(BigInt::from(i)))
    }

    fn from_bigint(i: &BigInt) -> Self {
        Self::from_rational(&BigRat::from_integer(i.clone()))
    }
}

#[cfg(test)]
pub(crate) mod field_laws {
    use super::Scalar;

    /// Checks the field axioms on one triple.
    pub fn check<F: Scalar>(a: &F, b: &F, c: &F) {
        assert_eq!(a.plus(b), b.plus(a));
        assert_eq!(a.times(b), b.times(a));
        assert_eq!(a.plus(b).plus(c), a.plus(&b.plus(c)));
        assert_eq!(a.times(b).times(c), a.times(&b.times(c)));
        assert_eq!(a.times(&b.plus(c)), a.times(b).plus(&a.times(c)));
        assert_eq!(a.plus(&F::zero()), *a);
        assert_eq!(a.times(&F::one()), *a);
        assert!(a.minus(a).is_zero());
        assert_eq!(a.is_zero(), *a == F::zero());
        match a.inverse() {
            Some(inv) => assert!(a.times(&inv).is_one()),
            None => assert!(a.is_zero()),
        }
        assert_eq!(F::parse_text(&a.to_string()).unwrap(), *a);
    }
}
