//! Freeness of rank-3 arrangements: graded pieces of the derivation module
//! by exact linear algebra, certified by Saito's determinant criterion.

mod poly3;

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arrangement::Arrangement;
use crate::linalg::{det3, Matrix};
use crate::scalars::{Scalar, ScalarError};

pub use poly3::{Exponent, Poly3};

/// A polynomial vector field `f1 d1 + f2 d2 + f3 d3` with homogeneous
/// coordinates of degree `pdeg`.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation<F> {
    pub coords: [Poly3<F>; 3],
    pub pdeg: usize,
}

impl<F: Scalar> Derivation<F> {
    pub fn new(coords: [Poly3<F>; 3], pdeg: usize) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_homogeneous_of(pdeg as u32)));
        Derivation { coords, pdeg }
    }

    /// `theta(alpha) = a1 f1 + a2 f2 + a3 f3`.
    pub fn apply(&self, alpha: &[F; 3]) -> Poly3<F> {
        let mut out = Poly3::zero();
        for (a, f) in alpha.iter().zip(&self.coords) {
            out = out.plus(&f.scale(a));
        }
        out
    }

    pub fn eval(&self, pt: &[F; 3]) -> [F; 3] {
        std::array::from_fn(|i| self.coords[i].eval(pt))
    }

    /// Membership in `D(A)` by exact division of `theta(alpha_H)` by `alpha_H`.
    pub fn is_member(&self, a: &Arrangement<F>) -> bool {
        a.columns().iter().all(|alpha| self.apply(alpha).div_linear(alpha).is_some())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Poly3::is_zero)
    }

    pub fn combine(&self, c: &F, other: &Self, d: &F) -> Self {
        debug_assert_eq!(self.pdeg, other.pdeg);
        Derivation {
            coords: std::array::from_fn(|i| self.coords[i].scale(c).plus(&other.coords[i].scale(d))),
            pdeg: self.pdeg,
        }
    }
}

/// `x1 d1 + x2 d2 + x3 d3`.
pub fn euler_derivation<F: Scalar>(_a: &Arrangement<F>) -> Derivation<F> {
    Derivation::new([Poly3::var(0), Poly3::var(1), Poly3::var(2)], 1)
}

/// Basis of `D(A)_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedBasis<F> {
    pub p: usize,
    pub basis: Vec<Derivation<F>>,
}

impl<F> GradedBasis<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Monomials of degree `p` in descending lexicographic order.
pub fn monomials(p: usize) -> Vec<Exponent> {
    let p = p as u32;
    let mut out = Vec::new();
    for a in (0..=p).rev() {
        for b in (0..=p - a).rev() {
            out.push([a, b, p - a - b]);
        }
    }
    out
}

/// Two vectors spanning `ker alpha`: with pivot `q` the first nonzero
/// entry, `e_j - (alpha_j / alpha_q) e_q` for the two `j != q`.
pub fn spanning_vectors<F: Scalar>(alpha: &[F; 3]) -> [[F; 3]; 2] {
    let q = alpha.iter().position(|c| !c.is_zero()).expect("nonzero covector");
    let inv = alpha[q].inverse().expect("nonzero pivot");
    let mut others = (0..3).filter(|&j| j != q);
    let make = |j: usize| {
        let mut v: [F; 3] = std::array::from_fn(|_| F::zero());
        v[j] = F::one();
        v[q] = alpha[j].times(&inv).negate();
        v
    };
    let u = make(others.next().unwrap());
    let v = make(others.next().unwrap());
    [u, v]
}

/// Coefficients of `s^(p-i) r^i` in `(s u + r v)^e` as a vector indexed by `i`.
fn binary_expansion<F: Scalar>(e: &Exponent, u: &[F; 3], v: &[F; 3]) -> Vec<F> {
    let mut acc = vec![F::one()];
    for k in 0..3 {
        for _ in 0..e[k] {
            let mut next = vec![F::zero(); acc.len() + 1];
            for (i, c) in acc.iter().enumerate() {
                next[i] = next[i].plus(&c.times(&u[k]));
                next[i + 1] = next[i + 1].plus(&c.times(&v[k]));
            }
            acc = next;
        }
    }
    acc
}

/// Basis of the degree-`p` piece of `D(A)`. For each hyperplane the binary
/// form `theta(alpha)(s u + r v)` must vanish identically, which gives
/// `p + 1` linear conditions on the `3 * C(p+2, 2)` unknown coefficients.
pub fn derivation_space<F: Scalar>(a: &Arrangement<F>, p: usize) -> GradedBasis<F> {
    let monos = monomials(p);
    let m = monos.len();
    let mut rows = Vec::with_capacity(a.len() * (p + 1));
    for alpha in a.columns() {
        let [u, v] = spanning_vectors(alpha);
        let expansions: Vec<Vec<F>> = monos.iter().map(|e| binary_expansion(e, &u, &v)).collect();
        for i in 0..=p {
            let mut row = vec![F::zero(); 3 * m];
            for k in 0..3 {
                if alpha[k].is_zero() {
                    continue;
                }
                for (j, exp) in expansions.iter().enumerate() {
                    row[k * m + j] = alpha[k].times(&exp[i]);
                }
            }
            rows.push(row);
        }
    }
    let kernel = if rows.is_empty() {
        (0..3 * m)
            .map(|j| {
                let mut v = vec![F::zero(); 3 * m];
                v[j] = F::one();
                v
            })
            .collect()
    } else {
        Matrix::from_rows(rows).nullspace()
    };
    let basis = kernel
        .into_iter()
        .map(|vec| {
            let coords = std::array::from_fn(|k| {
                let mut f = Poly3::zero();
                for (j, e) in monos.iter().enumerate() {
                    f.add_term(*e, vec[k * m + j].clone());
                }
                f
            });
            let d = Derivation::new(coords, p);
            debug_assert!(d.is_member(a));
            d
        })
        .collect();
    GradedBasis { p, basis }
}

/// `dim D(A)_p` of a free arrangement with the given exponents:
/// the sum of `C(p - e + 2, 2)` over `e <= p`.
pub fn expected_graded_dim(exponents: &[u64], p: usize) -> usize {
    exponents
        .iter()
        .filter(|&&e| e as usize <= p)
        .map(|&e| {
            let k = p - e as usize + 2;
            k * (k - 1) / 2
        })
        .sum()
}

/// `Q(A)`, the product of the defining linear forms.
pub fn defining_polynomial<F: Scalar>(a: &Arrangement<F>) -> Poly3<F> {
    a.columns()
        .iter()
        .fold(Poly3::constant(F::one()), |acc, alpha| acc.times(&Poly3::linear(alpha)))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreenessError {
    #[error("polynomial degrees sum to {sum}, but the arrangement has {n} hyperplanes")]
    DegreeMismatch { sum: usize, n: usize },
    #[error("certificate line {line}: {msg}")]
    Certificate { line: usize, msg: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

fn det_poly<F: Scalar>(t: [&Derivation<F>; 3]) -> Poly3<F> {
    let e = |r: usize, c: usize| &t[c].coords[r];
    let minor = |r1: usize, r2: usize| e(r1, 1).times(e(r2, 2)).minus(&e(r2, 1).times(e(r1, 2)));
    e(0, 0)
        .times(&minor(1, 2))
        .minus(&e(1, 0).times(&minor(0, 2)))
        .plus(&e(2, 0).times(&minor(0, 1)))
}

/// The constant `c != 0` with `det(theta_1, theta_2, theta_3) = c Q(A)`,
/// checked by full polynomial expansion.
pub fn saito_check<F: Scalar>(
    a: &Arrangement<F>,
    t1: &Derivation<F>,
    t2: &Derivation<F>,
    t3: &Derivation<F>,
) -> Result<Option<F>, FreenessError> {
    let sum = t1.pdeg + t2.pdeg + t3.pdeg;
    if sum != a.len() {
        return Err(FreenessError::DegreeMismatch { sum, n: a.len() });
    }
    Ok(saito_constant(&defining_polynomial(a), [t1, t2, t3]))
}

fn saito_constant<F: Scalar>(q: &Poly3<F>, t: [&Derivation<F>; 3]) -> Option<F> {
    let det = det_poly(t);
    let (lead, qc) = q.terms().next_back().expect("Q is nonzero");
    let c = det.coeff(lead).divide(qc)?;
    (!c.is_zero() && det == q.scale(&c)).then_some(c)
}

/// Three derivations and the constant with `det = c Q(A)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SaitoCertificate<F> {
    pub derivations: [Derivation<F>; 3],
    pub constant: F,
}

impl<F: Scalar> SaitoCertificate<F> {
    pub fn exponents(&self) -> [u64; 3] {
        self.derivations.each_ref().map(|d| d.pdeg as u64)
    }

    /// Full re-verification: membership of each derivation and the
    /// determinant identity.
    pub fn verify(&self, a: &Arrangement<F>) -> bool {
        let [t1, t2, t3] = &self.derivations;
        self.derivations.iter().all(|d| d.is_member(a))
            && matches!(saito_check(a, t1, t2, t3), Ok(Some(c)) if c == self.constant)
    }

    /// Text form read back by [`SaitoCertificate::parse`].
    pub fn to_text(&self) -> String {
        let e = self.exponents();
        let mut s = format!("exponents: {} {} {}\nconstant: {}\n", e[0], e[1], e[2], self.constant);
        for (i, d) in self.derivations.iter().enumerate() {
            for (k, f) in d.coords.iter().enumerate() {
                s.push_str(&format!("theta{}[{}] = {}\n", i + 1, k + 1, f));
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, FreenessError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let mut next = |prefix: &str| -> Result<(usize, String), FreenessError> {
            let (i, l) = lines.next().ok_or(FreenessError::Certificate { line: 0, msg: format!("missing {prefix:?}") })?;
            let rest = l.trim().strip_prefix(prefix).ok_or(FreenessError::Certificate {
                line: i + 1,
                msg: format!("expected {prefix:?}"),
            })?;
            Ok((i + 1, rest.trim().to_string()))
        };
        let (line, exps) = next("exponents:")?;
        let exps: Vec<usize> = exps
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| FreenessError::Certificate { line, msg: "bad exponent".into() })?;
        if exps.len() != 3 {
            return Err(FreenessError::Certificate { line, msg: "expected three exponents".into() });
        }
        let (_, c) = next("constant:")?;
        let constant = F::parse_text(&c)?;
        let mut derivations = Vec::new();
        for (i, &pdeg) in exps.iter().enumerate() {
            let mut coords = Vec::new();
            for k in 0..3 {
                let (line, body) = next(&format!("theta{}[{}] =", i + 1, k + 1))?;
                let f = Poly3::parse(&body)?;
                if !f.is_homogeneous_of(pdeg as u32) {
                    return Err(FreenessError::Certificate { line, msg: format!("not homogeneous of degree {pdeg}") });
                }
                coords.push(f);
            }
            let coords: [Poly3<F>; 3] = coords.try_into().expect("three coordinates");
            derivations.push(Derivation { coords, pdeg });
        }
        let derivations: [Derivation<F>; 3] = derivations.try_into().expect("three derivations");
        Ok(SaitoCertificate { derivations, constant })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NotFreeReason {
    ChiDoesNotSplit,
    GradedDimensionMismatch { p: usize, expected: usize, actual: usize },
}

impl fmt::Display for NotFreeReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotFreeReason::ChiDoesNotSplit => f.write_str("characteristic polynomial does not split over the integers"),
            NotFreeReason::GradedDimensionMismatch { p, expected, actual } => {
                write!(f, "dim D_{p} is {actual}, a free arrangement would have {expected}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FreenessVerdict<F> {
    Free { exponents: [u64; 3], certificate: SaitoCertificate<F> },
    NotFree(NotFreeReason),
    /// `(p, expected, actual)` for every degree examined.
    Inconclusive { dims: Vec<(usize, usize, usize)> },
}

impl<F> FreenessVerdict<F> {
    pub fn is_free(&self) -> bool {
        matches!(self, FreenessVerdict::Free { .. })
    }

    pub fn is_not_free(&self) -> bool {
        matches!(self, FreenessVerdict::NotFree(_))
    }

    pub fn exponents(&self) -> Option<[u64; 3]> {
        match self {
            FreenessVerdict::Free { exponents, .. } => Some(*exponents),
            _ => None,
        }
    }
}

impl<F> fmt::Display for FreenessVerdict<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreenessVerdict::Free { exponents: [a, b, c], .. } => write!(f, "Free({a}, {b}, {c})"),
            FreenessVerdict::NotFree(r) => write!(f, "NotFree: {r}"),
            FreenessVerdict::Inconclusive { .. } => f.write_str("Inconclusive"),
        }
    }
}

/// Points `(1, k, k^2)` avoid any finite union of planes for some small `k`.
fn generic_point<F: Scalar>(q: &Poly3<F>) -> [F; 3] {
    (1i64..)
        .map(|k| [F::one(), F::from_int(k), F::from_int(k * k)])
        .find(|pt| !q.eval(pt).is_zero())
        .expect("Q is a nonzero polynomial")
}

/// Searches for `theta_2, theta_3` completing the Euler derivation to a
/// Saito basis. Pairs are screened by evaluating the determinant at a point
/// off every hyperplane, then confirmed by full expansion.
pub fn find_saito_pair<F: Scalar>(
    a: &Arrangement<F>,
    low: &GradedBasis<F>,
    high: &GradedBasis<F>,
) -> Option<SaitoCertificate<F>> {
    let q = defining_polynomial(a);
    let pt = generic_point(&q);
    let euler = euler_derivation(a);
    let ev = euler.eval(&pt);
    let try_pair = |x: &Derivation<F>, y: &Derivation<F>| -> Option<SaitoCertificate<F>> {
        if det3(&ev, &x.eval(&pt), &y.eval(&pt)).is_zero() {
            return None;
        }
        let c = saito_constant(&q, [&euler, x, y])?;
        Some(SaitoCertificate { derivations: [euler.clone(), x.clone(), y.clone()], constant: c })
    };
    let same = low.p == high.p;
    for (i, x) in low.basis.iter().enumerate() {
        for (j, y) in high.basis.iter().enumerate() {
            if same && j <= i {
                continue;
            }
            if let Some(cert) = try_pair(x, y) {
                return Some(cert);
            }
        }
    }
    // small integer combinations of consecutive basis elements
    let coeffs: Vec<F> = [1i64, -1, 2, -2].iter().map(|&c| F::from_int(c)).collect();
    let combos = |b: &GradedBasis<F>| -> Vec<Derivation<F>> {
        let mut out = Vec::new();
        for w in b.basis.windows(2) {
            for c in &coeffs {
                out.push(w[0].combine(&F::one(), &w[1], c));
            }
        }
        out
    };
    let (lc, hc) = (combos(low), combos(high));
    for x in low.basis.iter().chain(&lc) {
        for y in high.basis.iter().chain(&hc) {
            if let Some(cert) = try_pair(x, y) {
                return Some(cert);
            }
        }
    }
    None
}

/// Three-valued freeness decision: `NotFree` only from a non-splitting
/// characteristic polynomial or a graded dimension that a free module
/// could not have, `Free` only with a verified Saito certificate.
pub fn decide_freeness<F: Scalar>(a: &Arrangement<F>) -> FreenessVerdict<F> {
    let chi = a.char_poly();
    let Some(exps) = chi.exponents() else {
        return FreenessVerdict::NotFree(NotFreeReason::ChiDoesNotSplit);
    };
    let [_, e2, e3] = exps;
    let bases: Vec<GradedBasis<F>> = (0..=e3 as usize).into_par_iter().map(|p| derivation_space(a, p)).collect();
    let mut dims = Vec::new();
    for b in &bases {
        let expected = expected_graded_dim(&exps, b.p);
        let actual = b.dim();
        if expected != actual {
            return FreenessVerdict::NotFree(NotFreeReason::GradedDimensionMismatch { p: b.p, expected, actual });
        }
        dims.push((b.p, expected, actual));
    }
    match find_saito_pair(a, &bases[e2 as usize], &bases[e3 as usize]) {
        Some(certificate) => {
            debug_assert!(certificate.verify(a));
            FreenessVerdict::Free { exponents: exps, certificate }
        }
        None => FreenessVerdict::Inconclusive { dims },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::BigRat;

    fn arr(cols: &[[i64; 3]]) -> Arrangement<BigRat> {
        Arrangement::build(cols.iter().map(|c| c.map(|x| BigRat::from_integer(x.into()))).collect()).unwrap()
    }

    fn boolean() -> Arrangement<BigRat> {
        arr(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    #[test]
    fn monomial_order() {
        assert_eq!(monomials(1), vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(monomials(2).len(), 6);
    }

    #[test]
    fn euler_is_always_a_member() {
        let a = arr(&[[1, 2, 3], [0, 1, -1], [4, 0, 1], [1, 1, 1]]);
        let e = euler_derivation(&a);
        assert_eq!(e.pdeg, 1);
        assert!(e.is_member(&a));
        for alpha in a.columns() {
            assert_eq!(e.apply(alpha), Poly3::linear(alpha));
        }
    }

    #[test]
    fn graded_dimensions() {
        assert_eq!(derivation_space(&boolean(), 0).dim(), 0);
        assert_eq!(derivation_space(&boolean(), 1).dim(), 3);
        let near_pencil = arr(&[[1, 0, 0], [0, 1, 0], [1, -1, 0], [0, 0, 1]]);
        assert_eq!(derivation_space(&near_pencil, 1).dim(), 2);
    }

    #[test]
    fn expected_dims() {
        assert_eq!(expected_graded_dim(&[1, 1, 1], 1), 3);
        assert_eq!(expected_graded_dim(&[1, 6, 6], 6), 23);
        assert_eq!(expected_graded_dim(&[1, 5, 7], 5), 16);
        assert_eq!(expected_graded_dim(&[1, 5, 7], 0), 0);
    }

    #[test]
    fn saito_on_diagonal_basis() {
        let a = boolean();
        let diag = |i: usize| {
            let mut coords = [Poly3::zero(), Poly3::zero(), Poly3::zero()];
            coords[i] = Poly3::var(i);
            Derivation::new(coords, 1)
        };
        let one = BigRat::from_integer(1.into());
        assert_eq!(saito_check(&a, &diag(0), &diag(1), &diag(2)).unwrap(), Some(one));
        assert_eq!(saito_check(&a, &diag(0), &diag(1), &diag(1)).unwrap(), None);
        let e = euler_derivation(&a);
        let quad = Derivation::new([Poly3::zero(), Poly3::zero(), Poly3::var(2).times(&Poly3::var(2))], 2);
        assert_eq!(
            saito_check(&a, &e, &diag(0), &quad),
            Err(FreenessError::DegreeMismatch { sum: 4, n: 3 })
        );
    }

    #[test]
    fn verdicts() {
        let v = decide_freeness(&boolean());
        assert_eq!(v.exponents(), Some([1, 1, 1]));
        let generic4 = arr(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]);
        assert_eq!(decide_freeness(&generic4), FreenessVerdict::NotFree(NotFreeReason::ChiDoesNotSplit));
        let near_pencil = arr(&[[1, 0, 0], [0, 1, 0], [1, -1, 0], [0, 0, 1]]);
        assert_eq!(decide_freeness(&near_pencil).exponents(), Some([1, 1, 2]));
    }

    #[test]
    fn certificate_text_round_trips() {
        let a = arr(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]]);
        let FreenessVerdict::Free { certificate, .. } = decide_freeness(&a) else {
            panic!("braid-like arrangement should be free");
        };
        let text = certificate.to_text();
        let back = SaitoCertificate::<BigRat>::parse(&text).unwrap();
        assert_eq!(back, certificate);
        assert!(back.verify(&a));
    }

    #[test]
    fn spanning_vectors_lie_in_the_plane() {
        let alpha = [BigRat::from_integer(0.into()), BigRat::new(2.into(), 3.into()), BigRat::from_integer((-5).into())];
        for v in spanning_vectors(&alpha) {
            assert!(crate::linalg::dot(&alpha, &v).is_zero());
        }
    }
}
