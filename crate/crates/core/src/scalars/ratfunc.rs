use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{BigRat, IntPoly, Scalar, ScalarError};

/// Element of `Q(t)` as a reduced fraction of integer polynomials.
///
/// Numerator and denominator are coprime in `Q[t]`, their integer contents
/// are coprime and the denominator has positive leading coefficient, so
/// equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: IntPoly,
    den: IntPoly,
}

impl RatFunc {
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::ZeroPolynomial);
        }
        Ok(Self::reduce(num, den))
    }

    pub fn from_poly(p: IntPoly) -> Self {
        RatFunc { num: p, den: IntPoly::one() }
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.den
    }

    fn reduce(num: IntPoly, den: IntPoly) -> Self {
        if num.is_zero() {
            return RatFunc { num, den: IntPoly::one() };
        }
        // g is primitive, so both quotients stay integral (Gauss)
        let g = num.gcd(&den);
        let num = num.div_exact(&g).expect("gcd divides numerator");
        let den = den.div_exact(&g).expect("gcd divides denominator");
        let mut c = num_integer::Integer::gcd(&num.content(), &den.content());
        if den.leading().is_negative() {
            c = -c;
        }
        let shrink = |p: &IntPoly| IntPoly::new(p.coeffs().iter().map(|a| a / &c).collect());
        RatFunc { num: shrink(&num), den: shrink(&den) }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Evaluates at a point where the denominator does not vanish.
    pub fn eval<F: Scalar>(&self, x: &F) -> Option<F> {
        self.num.eval(x).divide(&self.den.eval(x))
    }
}

impl Scalar for RatFunc {
    fn zero() -> Self {
        RatFunc::from_poly(IntPoly::zero())
    }

    fn one() -> Self {
        RatFunc::from_poly(IntPoly::one())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn plus(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::reduce(&self.num + &rhs.num, self.den.clone());
        }
        Self::reduce(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }

    fn times(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        Self::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    fn negate(&self) -> Self {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::reduce(self.den.clone(), self.num.clone()))
        }
    }

    fn from_rational(r: &BigRat) -> Self {
        Self::reduce(IntPoly::constant(r.numer().clone()), IntPoly::constant(r.denom().clone()))
    }

    fn from_bigint(i: &BigInt) -> Self {
        RatFunc::from_poly(IntPoly::constant(i.clone()))
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        let key = |p: &IntPoly| (p.degree(), p.coeffs().to_vec());
        key(&self.num).cmp(&key(&other.num)).then_with(|| key(&self.den).cmp(&key(&other.den)))
    }

    /// Accepts `p` or `(p)/(q)` with `p`, `q` integer polynomials in `t`.
    fn parse_text(s: &str) -> Result<Self, ScalarError> {
        let s = s.trim();
        let err = || ScalarError::Parse(s.to_string());
        if let Some(rest) = s.strip_prefix('(') {
            if let Some((num, den)) = rest.split_once(")/(") {
                let den = den.strip_suffix(')').ok_or_else(err)?;
                return RatFunc::new(IntPoly::parse(num)?, IntPoly::parse(den)?);
            }
            let inner = rest.strip_suffix(')').ok_or_else(err)?;
            return Ok(RatFunc::from_poly(IntPoly::parse(inner)?));
        }
        Ok(RatFunc::from_poly(IntPoly::parse(s)?))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl IntPoly {
    fn is_one_poly(&self) -> bool {
        self.coeffs().len() == 1 && self.coeffs()[0].is_one()
    }
}
