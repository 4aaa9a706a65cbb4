//! Sparse polynomials in `x1, x2, x3` over a [`Scalar`] field.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalars::{Scalar, ScalarError};

pub type Exponent = [u32; 3];

#[derive(Clone, Debug, PartialEq)]
pub struct Poly3<F> {
    terms: BTreeMap<Exponent, F>,
}

impl<F: Scalar> Default for Poly3<F> {
    fn default() -> Self {
        Poly3::zero()
    }
}

impl<F: Scalar> Poly3<F> {
    pub fn zero() -> Self {
        Poly3 { terms: BTreeMap::new() }
    }

    pub fn constant(c: F) -> Self {
        Poly3::monomial([0, 0, 0], c)
    }

    pub fn monomial(e: Exponent, c: F) -> Self {
        let mut p = Poly3::zero();
        p.add_term(e, c);
        p
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Poly3::monomial(e, F::one())
    }

    /// `a1 x1 + a2 x2 + a3 x3`.
    pub fn linear(a: &[F; 3]) -> Self {
        let mut p = Poly3::zero();
        for (i, c) in a.iter().enumerate() {
            let mut e = [0; 3];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn add_term(&mut self, e: Exponent, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = v.plus(&c);
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponent) -> F {
        self.terms.get(e).cloned().unwrap_or_else(F::zero)
    }

    /// Total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    pub fn plus(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn minus(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.negate());
        }
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Poly3::zero();
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.add_term(*e, v.times(c));
        }
        out
    }

    pub fn times(&self, rhs: &Self) -> Self {
        let mut out = Poly3::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], x.times(y));
            }
        }
        out
    }

    pub fn eval(&self, pt: &[F; 3]) -> F {
        let mut acc = F::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..3 {
                for _ in 0..e[i] {
                    t = t.times(&pt[i]);
                }
            }
            acc = acc.plus(&t);
        }
        acc
    }

    /// Exact quotient by the nonzero linear form `a`, or `None` when `a`
    /// does not divide. Eliminates the pivot variable (first nonzero
    /// coefficient of `a`) term by term.
    pub fn div_linear(&self, a: &[F; 3]) -> Option<Self> {
        let q = a.iter().position(|c| !c.is_zero()).expect("nonzero linear form");
        let inv = a[q].inverse().expect("nonzero pivot");
        let mut rem = self.clone();
        let mut quot = Poly3::zero();
        // highest pivot degree first so every step removes the current top
        while let Some((&e, c)) = rem.terms.iter().filter(|(e, _)| e[q] > 0).max_by_key(|(e, _)| e[q]) {
            let mut f = e;
            f[q] -= 1;
            let t = c.times(&inv);
            for (i, ai) in a.iter().enumerate() {
                let mut g = f;
                g[i] += 1;
                rem.add_term(g, ai.times(&t).negate());
            }
            quot.add_term(f, t);
        }
        rem.is_zero().then_some(quot)
    }

    /// Inverse of `Display`.
    pub fn parse(s: &str) -> Result<Self, ScalarError> {
        let s = s.trim();
        let err = || ScalarError::Parse(s.to_string());
        let mut p = Poly3::zero();
        if s == "0" {
            return Ok(p);
        }
        for term in split_top_level(s).ok_or_else(err)? {
            let (neg, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest.trim()),
                None => (false, term.trim()),
            };
            let (coeff, mono) = if let Some(rest) = body.strip_prefix('(') {
                let close = matching_paren(rest).ok_or_else(err)?;
                let c = F::parse_text(&rest[..close])?;
                let after = rest[close + 1..].trim();
                (c, after.strip_prefix('*').unwrap_or(after).trim())
            } else {
                (F::one(), body)
            };
            let mut e = [0u32; 3];
            if !mono.is_empty() && mono != "1" {
                for factor in mono.split('*') {
                    let factor = factor.trim();
                    let (var, pow) = match factor.split_once('^') {
                        Some((v, k)) => (v, k.parse::<u32>().map_err(|_| err())?),
                        None => (factor, 1),
                    };
                    let i = match var {
                        "x1" => 0,
                        "x2" => 1,
                        "x3" => 2,
                        _ => return Err(err()),
                    };
                    e[i] += pow;
                }
            }
            p.add_term(e, if neg { coeff.negate() } else { coeff });
        }
        Ok(p)
    }
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 1usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Splits `a + b - c` into `["a", "b", "-c"]` outside parentheses.
fn split_top_level(s: &str) -> Option<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    let bytes: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && (ch == '+' || ch == '-') && i > 0 && bytes[i - 1] == ' ' {
            out.push(cur.trim().to_string());
            cur = if ch == '-' { "-".into() } else { String::new() };
        } else {
            cur.push(ch);
        }
        if depth < 0 {
            return None;
        }
        i += 1;
    }
    out.push(cur.trim().to_string());
    (depth == 0 && out.iter().all(|t| !t.is_empty() && t != "-")).then_some(out)
}

/// Terms in descending lexicographic order of exponents; each coefficient
/// is parenthesized so that any field's display survives.
impl<F: Scalar> fmt::Display for Poly3<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let mono: Vec<String> = (0..3)
                .filter(|&i| e[i] > 0)
                .map(|i| if e[i] == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e[i]) })
                .collect();
            if mono.is_empty() {
                write!(f, "({c})")?;
            } else if c.is_one() {
                f.write_str(&mono.join("*"))?;
            } else {
                write!(f, "({c})*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{BigRat, QuadElem};
    use proptest::prelude::*;

    fn r(n: i64) -> BigRat {
        BigRat::from_integer(n.into())
    }

    fn poly_strategy() -> impl Strategy<Value = Poly3<BigRat>> {
        proptest::collection::vec(((0u32..3, 0u32..3, 0u32..3), -5i64..6, 1i64..4), 0..6).prop_map(|ts| {
            let mut p = Poly3::zero();
            for ((a, b, c), n, d) in ts {
                p.add_term([a, b, c], BigRat::new(n.into(), d.into()));
            }
            p
        })
    }

    #[test]
    fn display_and_parse() {
        let p = Poly3::linear(&[r(1), r(-2), r(0)]).times(&Poly3::var(2));
        assert_eq!(p.to_string(), "x1*x3 + (-2)*x2*x3");
        assert_eq!(Poly3::parse(&p.to_string()).unwrap(), p);
        assert_eq!(Poly3::<BigRat>::parse("x1^2 - x2 + (3/2)").unwrap().to_string(), "x1^2 + (-1)*x2 + (3/2)");
        let q = Poly3::monomial([1, 0, 2], QuadElem::new(2, r(1), r(-1)).unwrap());
        assert_eq!(Poly3::parse(&q.to_string()).unwrap(), q);
    }

    #[test]
    fn division_by_linear_forms() {
        let a = [r(0), r(2), r(-1)];
        let l = Poly3::linear(&a);
        let g = Poly3::var(0).times(&Poly3::var(0)).plus(&Poly3::var(2));
        assert_eq!(l.times(&g).div_linear(&a), Some(g.clone()));
        assert_eq!(g.div_linear(&a), None);
    }

    proptest! {
        #[test]
        fn product_divides_back(p in poly_strategy(), a in -3i64..4, b in -3i64..4, c in 1i64..4) {
            let form = [r(a), r(b), r(c)];
            let prod = p.times(&Poly3::linear(&form));
            prop_assert_eq!(prod.div_linear(&form), Some(p.clone()));
        }

        #[test]
        fn parse_round_trip(p in poly_strategy()) {
            prop_assert_eq!(Poly3::parse(&p.to_string()).unwrap(), p);
        }

        #[test]
        fn eval_is_a_ring_map(p in poly_strategy(), q in poly_strategy(), x in -3i64..4, y in -3i64..4, z in -3i64..4) {
            let pt = [r(x), r(y), r(z)];
            prop_assert_eq!(p.times(&q).eval(&pt), p.eval(&pt) * q.eval(&pt));
            prop_assert_eq!(p.plus(&q).eval(&pt), p.eval(&pt) + q.eval(&pt));
        }
    }
}
