use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{BigRat, Scalar, ScalarError};

/// Univariate polynomial in `t` with arbitrary-precision integer coefficients,
/// stored in ascending degree. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn var() -> Self {
        Self::from_i64s(&[0, 1])
    }

    /// `den * t - num`, the primitive linear polynomial vanishing at `r`.
    pub fn linear_with_root(r: &BigRat) -> Self {
        Self::new(vec![-r.numer().clone(), r.denom().clone()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Gcd of the coefficients, non-negative.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Pseudo-remainder: `lc(q)^(deg p - deg q + 1) * p mod q`.
    pub fn pseudo_rem(&self, q: &IntPoly) -> IntPoly {
        let dq = q.degree().expect("pseudo-remainder by zero polynomial");
        let lq = q.leading();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dq {
                break;
            }
            let lr = r.leading();
            let shift = dr - dq;
            let mut next: Vec<BigInt> = r.coeffs.iter().map(|c| c * &lq).collect();
            for (i, c) in q.coeffs.iter().enumerate() {
                next[i + shift] -= c * &lr;
            }
            r = IntPoly::new(next);
        }
        r
    }

    /// Exact quotient over the integers, `None` unless `q` divides `self` in `Z[t]`.
    pub fn div_exact(&self, q: &IntPoly) -> Option<IntPoly> {
        let dq = q.degree()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let dp = self.degree()?;
        if dp < dq {
            return None;
        }
        let lq = q.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); dp - dq + 1];
        for shift in (0..=dp - dq).rev() {
            let top = &rem[shift + dq];
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(&lq);
            if !r.is_zero() {
                return None;
            }
            for (i, qc) in q.coeffs.iter().enumerate() {
                rem[i + shift] -= qc * &c;
            }
            quot[shift] = c;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(IntPoly::new(quot))
        } else {
            None
        }
    }

    /// Primitive gcd in `Q[t]` with positive leading coefficient; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    /// Horner evaluation in any `Q`-algebra.
    pub fn eval<F: Scalar>(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc.times(x).plus(&F::from_bigint(c)))
    }

    /// The rational roots, sorted ascending and without repetition.
    pub fn rational_roots(&self) -> Result<Vec<BigRat>, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::ZeroPolynomial);
        }
        let mut p = self.primitive_part();
        let mut roots = Vec::new();
        if p.coeffs[0].is_zero() {
            roots.push(<BigRat as Zero>::zero());
            let k = p.coeffs.iter().take_while(|c| c.is_zero()).count();
            p = IntPoly::new(p.coeffs[k..].to_vec());
        }
        if p.degree().unwrap_or(0) > 0 {
            let lead = divisors(&p.leading());
            for num in divisors(&p.coeffs[0]) {
                for den in &lead {
                    for sign in [1, -1] {
                        let r = BigRat::new(&num * sign, den.clone());
                        if !roots.contains(&r) && Zero::is_zero(&p.eval(&r)) {
                            roots.push(r);
                        }
                    }
                }
            }
        }
        roots.sort();
        Ok(roots)
    }

    /// Splits off linear factors and irreducible quadratic factors.
    ///
    /// Factors are primitive with positive leading coefficient, listed by
    /// degree then coefficients. The remainder is primitive (1 when nothing
    /// is left) and has no rational root; when its degree is at least 4 it
    /// may still hide factors of degree 3 or more, never of degree 2.
    pub fn factor_low_degree(&self) -> Result<(Vec<(IntPoly, usize)>, IntPoly), ScalarError> {
        let mut rest = self.primitive_part();
        let mut factors = Vec::new();
        for r in rest.rational_roots()? {
            let lin = IntPoly::linear_with_root(&r);
            let mut mult = 0;
            while let Some(q) = rest.div_exact(&lin) {
                rest = q;
                mult += 1;
            }
            factors.push((lin, mult));
        }
        loop {
            match rest.degree() {
                Some(2) => {
                    factors.push((rest.primitive_part(), 1));
                    rest = IntPoly::one();
                    break;
                }
                Some(d) if d >= 4 => match rest.find_quadratic_factor() {
                    Some(q) => {
                        let mut mult = 0;
                        while let Some(next) = rest.div_exact(&q) {
                            rest = next;
                            mult += 1;
                        }
                        factors.push((q, mult));
                    }
                    None => break,
                },
                _ => break,
            }
        }
        // Repeated quadratics found at degree 4 land in the loop twice.
        let mut merged: Vec<(IntPoly, usize)> = Vec::new();
        for (f, m) in factors {
            match merged.iter_mut().find(|(g, _)| *g == f) {
                Some(entry) => entry.1 += m,
                None => merged.push((f, m)),
            }
        }
        merged.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then_with(|| a.coeffs.cmp(&b.coeffs)));
        let rest = if rest.is_constant() { IntPoly::one() } else { rest.primitive_part() };
        Ok((merged, rest))
    }

    /// Kronecker search for a primitive quadratic divisor of a polynomial
    /// without rational roots, using the values at 0, 1 and -1.
    fn find_quadratic_factor(&self) -> Option<IntPoly> {
        let v0 = self.coeff(0);
        let v1 = self.eval(&<BigRat as One>::one()).to_integer();
        let vm1 = self.eval(&-<BigRat as One>::one()).to_integer();
        if v0.is_zero() || v1.is_zero() || vm1.is_zero() {
            return None;
        }
        let signed = |n: &BigInt| {
            divisors(n)
                .into_iter()
                .flat_map(|d| [d.clone(), -d])
                .collect::<Vec<_>>()
        };
        let c_values = signed(&v0);
        let q1_values = signed(&v1);
        for a in divisors(&self.leading()) {
            for c in &c_values {
                for q1 in &q1_values {
                    let b = q1 - &a - c;
                    let qm1 = &a - &b + c;
                    if qm1.is_zero() || !(&vm1 % &qm1).is_zero() {
                        continue;
                    }
                    let q = IntPoly::new(vec![c.clone(), b.clone(), a.clone()]);
                    if q.content() != BigInt::one() {
                        continue;
                    }
                    if self.div_exact(&q).is_some() {
                        return Some(q);
                    }
                }
            }
        }
        None
    }

    /// Discriminant `b^2 - 4ac` of a quadratic.
    pub fn discriminant(&self) -> Option<BigInt> {
        if self.degree() != Some(2) {
            return None;
        }
        let (c, b, a) = (&self.coeffs[0], &self.coeffs[1], &self.coeffs[2]);
        Some(b * b - BigInt::from(4) * a * c)
    }

    pub fn parse(s: &str) -> Result<IntPoly, ScalarError> {
        let err = || ScalarError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut coeffs: Vec<BigInt> = Vec::new();
        for (sign, term) in split_signed_terms(&compact).ok_or_else(err)? {
            let (coef, power) = match term.find('t') {
                None => (term.parse::<BigInt>().map_err(|_| err())?, 0usize),
                Some(pos) => {
                    let coef = match &term[..pos] {
                        "" => BigInt::one(),
                        c => c.strip_suffix('*').ok_or_else(err)?.parse().map_err(|_| err())?,
                    };
                    let power = match &term[pos + 1..] {
                        "" => 1,
                        e => e.strip_prefix('^').ok_or_else(err)?.parse().map_err(|_| err())?,
                    };
                    (coef, power)
                }
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, BigInt::zero());
            }
            coeffs[power] += coef * sign;
        }
        Ok(IntPoly::new(coeffs))
    }
}

/// Splits `a+b-c` into signed pieces, leaving signs after `^` alone.
pub(crate) fn split_signed_terms(s: &str) -> Option<Vec<(i32, &str)>> {
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut start = 0;
    let mut sign = 1;
    if let Some(&b) = bytes.first() {
        if b == b'+' || b == b'-' {
            sign = if b == b'-' { -1 } else { 1 };
            start = 1;
        }
    }
    let mut depth = 0i32;
    let mut i = start;
    while i < bytes.len() {
        match bytes[i] {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > start && bytes[i - 1] != b'^' && bytes[i - 1] != b'*' && bytes[i - 1] != b'/' => {
                let piece = &s[start..i];
                if piece.is_empty() {
                    return None;
                }
                out.push((sign, piece));
                sign = if bytes[i] == b'-' { -1 } else { 1 };
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    let piece = &s[start..];
    if piece.is_empty() {
        return None;
    }
    out.push((sign, piece));
    Some(out)
}

/// Positive divisors of a nonzero integer, ascending, by trial division.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return Vec::new();
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let root = n.sqrt();
    let mut d = BigInt::one();
    while d <= root {
        if (&n % &d).is_zero() {
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::QuadElem;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn q(n: i64, d: i64) -> BigRat {
        BigRat::new(n.into(), d.into())
    }

    fn small_poly() -> impl Strategy<Value = IntPoly> {
        proptest::collection::vec(-6i64..6, 0..5).prop_map(|c| IntPoly::from_i64s(&c))
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(p(&[4, -6, 2]).gcd(&IntPoly::zero()), p(&[2, -3, 1]));
        // Euclid by hand: 2t^2-2t = 2t(t-1), 4t = 4t, gcd t.
        assert_eq!(p(&[0, -2, 2]).gcd(&p(&[0, 4])), p(&[0, 1]));
        assert_eq!(IntPoly::zero().gcd(&IntPoly::zero()), IntPoly::zero());
    }

    #[test]
    fn rational_root_examples() {
        assert_eq!(p(&[1, -3, 2]).rational_roots().unwrap(), vec![q(1, 2), q(1, 1)]);
        assert!(p(&[1, -1, 1]).rational_roots().unwrap().is_empty());
        // (t-1)(t+1)(t-2) expanded by hand
        let cubic = &(&p(&[-1, 1]) * &p(&[1, 1])) * &p(&[-2, 1]);
        assert_eq!(cubic, p(&[2, -1, -2, 1]));
        assert_eq!(cubic.rational_roots().unwrap(), vec![q(-1, 1), q(1, 1), q(2, 1)]);
        assert_eq!(IntPoly::zero().rational_roots(), Err(ScalarError::ZeroPolynomial));
        assert_eq!(p(&[0, 0, 3]).rational_roots().unwrap(), vec![q(0, 1)]);
    }

    #[test]
    fn factor_examples() {
        let (f, r) = p(&[1, -1, 1]).factor_low_degree().unwrap();
        assert_eq!(f, vec![(p(&[1, -1, 1]), 1)]);
        assert_eq!(r, IntPoly::one());

        let (f, r) = p(&[1, -12, 4]).factor_low_degree().unwrap();
        assert_eq!(f, vec![(p(&[1, -12, 4]), 1)]);
        assert_eq!(r, IntPoly::one());

        let lin = p(&[-1, 1]);
        let quad = p(&[-1, 1, 1]);
        let prod = &(&lin * &lin) * &quad;
        let (f, r) = prod.factor_low_degree().unwrap();
        assert_eq!(f, vec![(lin, 2), (quad, 1)]);
        assert_eq!(r, IntPoly::one());
    }

    #[test]
    fn factor_finds_quadratics_inside_quartics() {
        let a = p(&[1, -1, 1]);
        let b = p(&[-1, 1, 1]);
        let (f, r) = (&(&a * &b) * &a).scale(&BigInt::from(-3)).factor_low_degree().unwrap();
        assert_eq!(f, vec![(b, 1), (a, 2)]);
        assert_eq!(r, IntPoly::one());
    }

    #[test]
    fn factor_leaves_irreducible_cubic() {
        let cubic = p(&[-2, 0, 0, 1]);
        let (f, r) = (&cubic * &p(&[-1, 2])).factor_low_degree().unwrap();
        assert_eq!(f, vec![(p(&[-1, 2]), 1)]);
        assert_eq!(r, cubic);
    }

    #[test]
    fn evaluate_examples() {
        let x = QuadElem::new(-3, q(1, 2), q(1, 2)).unwrap();
        assert!(p(&[1, -1, 1]).eval(&x).is_zero());
        assert!(Zero::is_zero(&p(&[-1, 1]).eval(&q(1, 1))));
        assert_eq!(p(&[1, -1, 1]).eval(&q(2, 1)), q(3, 1));
    }

    #[test]
    fn display_and_parse() {
        let f = p(&[1, -3, 0, -2]);
        assert_eq!(f.to_string(), "-2*t^3 - 3*t + 1");
        assert_eq!(IntPoly::parse(&f.to_string()).unwrap(), f);
        assert_eq!(IntPoly::parse("t^2-t+1").unwrap(), p(&[1, -1, 1]));
        assert_eq!(IntPoly::parse("0").unwrap(), IntPoly::zero());
        assert!(IntPoly::parse("t^").is_err());
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(&BigInt::from(-12)), [1, 2, 3, 4, 6, 12].map(BigInt::from).to_vec());
        assert_eq!(divisors(&BigInt::from(1)), vec![BigInt::from(1)]);
    }

    proptest! {
        #[test]
        fn gcd_divides_both(a in small_poly(), b in small_poly(), c in small_poly()) {
            let a = &a * &c;
            let b = &b * &c;
            let g = a.gcd(&b);
            if !g.is_zero() {
                prop_assert_eq!(a.pseudo_rem(&g), IntPoly::zero());
                prop_assert_eq!(b.pseudo_rem(&g), IntPoly::zero());
                if !c.is_zero() {
                    prop_assert_eq!(g.pseudo_rem(&c.primitive_part()), IntPoly::zero());
                }
            } else {
                prop_assert!(a.is_zero() && b.is_zero());
            }
        }

        #[test]
        fn eval_is_a_ring_homomorphism(a in small_poly(), b in small_poly(), n in -9i64..9, d in 1i64..5) {
            let x = q(n, d);
            prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        }

        #[test]
        fn factorization_reassembles(roots in proptest::collection::vec((-4i64..4, 1i64..3), 0..3), quad in 0usize..3) {
            let quads = [p(&[1]), p(&[1, -1, 1]), p(&[1, -12, 4])];
            let mut f = quads[quad].clone();
            for (n, d) in &roots {
                f = &f * &IntPoly::linear_with_root(&q(*n, *d));
            }
            let (factors, rest) = f.factor_low_degree().unwrap();
            let mut prod = rest.clone();
            for (g, m) in &factors {
                for _ in 0..*m {
                    prod = &prod * g;
                }
            }
            prop_assert_eq!(prod.primitive_part(), f.primitive_part());
            prop_assert!(rest.rational_roots().unwrap().is_empty() || rest.is_constant());
        }
    }
}
