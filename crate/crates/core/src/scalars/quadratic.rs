use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{parse_rational, BigRat, ScalarError};

/// `a + b*sqrt(d)` in the quadratic field `Q(sqrt d)`.
///
/// Elements with `b = 0` are plain rationals and combine with any field;
/// `field == 0` marks an element that was never tied to a particular `d`.
/// Combining two irrational elements of different fields panics.
#[derive(Clone, Debug)]
pub struct QuadElem {
    field: i64,
    a: BigRat,
    b: BigRat,
}

/// Square-free part of a nonzero integer, keeping the sign: `-12 -> -3`, `8 -> 2`.
pub fn square_free_part(n: &BigInt) -> BigInt {
    assert!(!n.is_zero(), "square-free part of zero");
    let mut rest = n.abs();
    let mut out = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut count = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            count += 1;
        }
        if count % 2 == 1 {
            out *= &p;
        }
        p += 1;
    }
    out *= rest;
    if n.is_negative() {
        -out
    } else {
        out
    }
}

fn is_valid_field(d: i64) -> bool {
    d != 0 && d != 1 && square_free_part(&BigInt::from(d)) == BigInt::from(d)
}

impl QuadElem {
    pub fn new(d: i64, a: BigRat, b: BigRat) -> Result<Self, ScalarError> {
        if !is_valid_field(d) {
            return Err(ScalarError::BadDiscriminant(d));
        }
        Ok(QuadElem { field: d, a, b })
    }

    pub fn rational(a: BigRat) -> Self {
        QuadElem { field: 0, a, b: <BigRat as Zero>::zero() }
    }

    /// `sqrt(d)` itself.
    pub fn sqrt(d: i64) -> Result<Self, ScalarError> {
        Self::new(d, <BigRat as Zero>::zero(), <BigRat as One>::one())
    }

    /// The field parameter `d`, or `None` for rationals not yet tied to a field.
    pub fn field(&self) -> Option<i64> {
        (self.field != 0).then_some(self.field)
    }

    pub fn rational_part(&self) -> &BigRat {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRat {
        &self.b
    }

    pub fn conjugate(&self) -> Self {
        QuadElem { field: self.field, a: self.a.clone(), b: -&self.b }
    }

    /// `a^2 - d b^2`.
    pub fn norm(&self) -> BigRat {
        &self.a * &self.a - &self.b * &self.b * BigRat::from_integer(self.field.into())
    }

    fn join(&self, other: &Self) -> i64 {
        match (self.field, other.field) {
            (0, d) | (d, 0) => d,
            (d, e) if d == e => d,
            (d, e) => {
                if Zero::is_zero(&self.b) {
                    e
                } else if Zero::is_zero(&other.b) {
                    d
                } else {
                    panic!("mixed quadratic fields Q(sqrt {d}) and Q(sqrt {e})")
                }
            }
        }
    }
}

impl PartialEq for QuadElem {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
            && self.b == other.b
            && (Zero::is_zero(&self.b) || self.field == other.field)
    }
}

impl Eq for QuadElem {}

impl super::Scalar for QuadElem {
    fn zero() -> Self {
        QuadElem::rational(<BigRat as Zero>::zero())
    }

    fn one() -> Self {
        QuadElem::rational(<BigRat as One>::one())
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }

    fn plus(&self, rhs: &Self) -> Self {
        QuadElem { field: self.join(rhs), a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }

    fn times(&self, rhs: &Self) -> Self {
        let d = self.join(rhs);
        if Zero::is_zero(&self.b) {
            return QuadElem { field: d, a: &self.a * &rhs.a, b: &self.a * &rhs.b };
        }
        if Zero::is_zero(&rhs.b) {
            return QuadElem { field: d, a: &self.a * &rhs.a, b: &self.b * &rhs.a };
        }
        let dq = BigRat::from_integer(d.into());
        QuadElem {
            field: d,
            a: &self.a * &rhs.a + &self.b * &rhs.b * dq,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }

    fn negate(&self) -> Self {
        QuadElem { field: self.field, a: -&self.a, b: -&self.b }
    }

    fn inverse(&self) -> Option<Self> {
        if super::Scalar::is_zero(self) {
            return None;
        }
        // d is not a rational square, so the norm vanishes only at zero
        let n = self.norm();
        Some(QuadElem { field: self.field, a: &self.a / &n, b: -&self.b / &n })
    }

    fn from_rational(r: &BigRat) -> Self {
        QuadElem::rational(r.clone())
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.a.cmp(&other.a).then_with(|| self.b.cmp(&other.b))
    }

    /// Accepts `a`, `a + b*sqrt(d)`, `a - sqrt(d)`, `b*sqrt(d)`.
    fn parse_text(s: &str) -> Result<Self, ScalarError> {
        let err = || ScalarError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(pos) = compact.find("sqrt(") else {
            return Ok(QuadElem::rational(parse_rational(&compact)?));
        };
        let inner = compact[pos + 5..].strip_suffix(')').ok_or_else(err)?;
        let d: i64 = inner.parse().map_err(|_| err())?;
        let head = &compact[..pos];
        let head = head.strip_suffix('*').unwrap_or(head);
        // split head into rational part and the signed coefficient of sqrt
        let split = head
            .char_indices()
            .rev()
            .find(|&(i, c)| (c == '+' || c == '-') && i > 0)
            .map(|(i, _)| i);
        let (a_txt, b_txt) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None => ("0", head),
        };
        let b = match b_txt {
            "" | "+" => <BigRat as One>::one(),
            "-" => -<BigRat as One>::one(),
            t => parse_rational(t.strip_prefix('+').unwrap_or(t))?,
        };
        QuadElem::new(d, parse_rational(a_txt)?, b)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.b) {
            return write!(f, "{}", self.a);
        }
        let coef = if One::is_one(&self.b.abs()) { String::new() } else { format!("{}*", self.b.abs()) };
        if Zero::is_zero(&self.a) {
            let sign = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{sign}{coef}sqrt({})", self.field)
        } else {
            let sign = if self.b.is_negative() { '-' } else { '+' };
            write!(f, "{} {sign} {coef}sqrt({})", self.a, self.field)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{field_laws, Scalar};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRat {
        BigRat::new(n.into(), d.into())
    }

    fn elem(d: i64) -> impl Strategy<Value = QuadElem> {
        (-20i64..20, 1i64..6, -20i64..20, 1i64..6)
            .prop_map(move |(a, b, c, e)| QuadElem::new(d, q(a, b), q(c, e)).unwrap())
    }

    #[test]
    fn validates_field_parameter() {
        assert!(QuadElem::new(2, q(1, 1), q(1, 1)).is_ok());
        assert!(QuadElem::new(-3, q(1, 1), q(1, 1)).is_ok());
        assert_eq!(QuadElem::new(1, q(1, 1), q(1, 1)), Err(ScalarError::BadDiscriminant(1)));
        assert_eq!(QuadElem::new(8, q(1, 1), q(1, 1)), Err(ScalarError::BadDiscriminant(8)));
        assert_eq!(QuadElem::new(0, q(1, 1), q(1, 1)), Err(ScalarError::BadDiscriminant(0)));
    }

    #[test]
    fn square_free_parts() {
        assert_eq!(square_free_part(&BigInt::from(-12)), BigInt::from(-3));
        assert_eq!(square_free_part(&BigInt::from(32)), BigInt::from(2));
        assert_eq!(square_free_part(&BigInt::from(20)), BigInt::from(5));
        assert_eq!(square_free_part(&BigInt::from(49)), BigInt::from(1));
    }

    #[test]
    fn omega_is_a_root_of_unity_polynomial() {
        // (1 + sqrt(-3))/2 satisfies w^2 - w + 1 = 0
        let w = QuadElem::new(-3, q(1, 2), q(1, 2)).unwrap();
        let val = w.times(&w).minus(&w).plus(&QuadElem::one());
        assert!(val.is_zero());
    }

    #[test]
    fn display_round_trips() {
        for (a, b) in [(q(3, 2), q(1, 1)), (q(0, 1), q(-1, 2)), (q(-1, 2), q(-1, 1)), (q(5, 1), q(0, 1))] {
            let x = QuadElem::new(5, a, b).unwrap();
            assert_eq!(QuadElem::parse_text(&x.to_string()).unwrap(), x);
        }
        assert_eq!(QuadElem::new(2, q(3, 2), q(1, 1)).unwrap().to_string(), "3/2 + sqrt(2)");
    }

    #[test]
    #[should_panic(expected = "mixed quadratic fields")]
    fn mixed_fields_are_rejected() {
        let _ = QuadElem::sqrt(2).unwrap().plus(&QuadElem::sqrt(5).unwrap());
    }

    #[test]
    fn rationals_mix_with_any_field() {
        let half = QuadElem::rational(q(1, 2));
        let s = QuadElem::sqrt(2).unwrap();
        assert_eq!(half.plus(&s).field(), Some(2));
        assert_eq!(s.minus(&s), QuadElem::zero());
    }

    proptest! {
        #[test]
        fn field_axioms_real(a in elem(2), b in elem(2), c in elem(2)) {
            field_laws::check(&a, &b, &c);
        }

        #[test]
        fn field_axioms_imaginary(a in elem(-3), b in elem(-3), c in elem(-3)) {
            field_laws::check(&a, &b, &c);
        }

        #[test]
        fn norm_identity(x in elem(5)) {
            let prod = x.times(&x.conjugate());
            prop_assert_eq!(prod, QuadElem::rational(x.norm()));
        }
    }
}
