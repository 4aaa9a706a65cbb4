//! One-parameter families of arrangements over `Z[t]`: the generic lattice
//! over `Q(t)`, specialization at rational or quadratic parameter values,
//! and the finite set of exceptional parameters.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{lattice_iso, proportional, Arrangement, ArrangementError, IntersectionLattice};
use crate::scalars::{square_free_part, BigInt, BigRat, IntPoly, QuadElem, RatFunc, Scalar};
use crate::ser_display;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuliError {
    #[error("family is degenerate over Q(t): {0}")]
    Generic(#[from] ArrangementError),
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown builtin family {0:?} (expected paper13 or paper15)")]
    UnknownBuiltin(String),
}

/// A `3 x n` matrix over `Z[t]`; column `i` is the covector of hyperplane `i`.
#[derive(Clone, Debug)]
pub struct Family {
    name: String,
    columns: Vec<[IntPoly; 3]>,
    generic: OnceLock<IntersectionLattice>,
}

fn polys(entries: [&[i64]; 3]) -> [IntPoly; 3] {
    entries.map(IntPoly::from_i64s)
}

impl Family {
    /// Validates that over `Q(t)` no column vanishes, no two are
    /// proportional, and the matrix has rank 3.
    pub fn new(name: impl Into<String>, columns: Vec<[IntPoly; 3]>) -> Result<Self, ModuliError> {
        let family = Family { name: name.into(), columns, generic: OnceLock::new() };
        family.generic_arrangement()?;
        Ok(family)
    }

    /// The 13-hyperplane family, columns in their published order.
    pub fn paper13() -> Family {
        let cols = vec![
            polys([&[1], &[0], &[0]]),
            polys([&[0], &[1], &[0]]),
            polys([&[0], &[0], &[1]]),
            polys([&[1], &[0], &[-1]]),
            polys([&[0], &[1], &[-1]]),
            polys([&[1], &[1], &[-1]]),
            polys([&[1], &[0], &[0, -1]]),
            polys([&[0], &[1], &[0, -1]]),
            polys([&[1], &[1], &[0, -1]]),
            polys([&[1], &[1], &[-1, -1]]),
            polys([&[0, 1], &[1], &[0, -1]]),
            polys([&[1], &[1, -1], &[-1]]),
            polys([&[-1, 1], &[0, 1], &[0, 0, -1]]),
        ];
        Family::new("paper13", cols).expect("paper13 is generically valid")
    }

    /// The 15-hyperplane family, columns in their published order.
    pub fn paper15() -> Family {
        let cols = vec![
            polys([&[1], &[0], &[0]]),
            polys([&[1], &[1], &[0]]),
            polys([&[1], &[0], &[1]]),
            polys([&[1], &[1], &[1]]),
            polys([&[1], &[0, 1], &[1]]),
            polys([&[0], &[1], &[0]]),
            polys([&[2], &[1], &[1]]),
            polys([&[1, 1], &[0, 1], &[1]]),
            polys([&[1, 1], &[1], &[1]]),
            polys([&[0, 2], &[0, 1], &[1]]),
            polys([&[1], &[1, -1], &[1]]),
            polys([&[1, -3], &[1, -3, 1], &[0, -1]]),
            polys([&[-1, 3], &[0, 1], &[0, 1]]),
            polys([&[1, -3], &[0, 0, -1], &[0, -1]]),
            polys([&[-1, 3], &[-1, 2], &[0, 1]]),
        ];
        Family::new("paper15", cols).expect("paper15 is generically valid")
    }

    pub fn builtin(name: &str) -> Result<Family, ModuliError> {
        match name {
            "paper13" => Ok(Family::paper13()),
            "paper15" => Ok(Family::paper15()),
            other => Err(ModuliError::UnknownBuiltin(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[[IntPoly; 3]] {
        &self.columns
    }

    /// True when no entry depends on `t`.
    pub fn is_constant(&self) -> bool {
        self.columns.iter().flatten().all(IntPoly::is_constant)
    }

    pub fn generic_arrangement(&self) -> Result<Arrangement<RatFunc>, ArrangementError> {
        Arrangement::build(
            self.columns
                .iter()
                .map(|c| c.clone().map(RatFunc::from_poly))
                .collect(),
        )
    }

    /// Lattice of the family as an arrangement over `Q(t)`.
    pub fn generic_lattice(&self) -> &IntersectionLattice {
        self.generic.get_or_init(|| {
            // integer-polynomial determinants give the same flats as Q(t)
            // arithmetic without any fraction reduction
            let n = self.len();
            let mut covered = vec![false; n * n];
            let mut flats = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if covered[i * n + j] {
                        continue;
                    }
                    let mut flat = vec![i, j];
                    for k in j + 1..n {
                        if self.triple_det(i, j, k).is_zero() {
                            flat.push(k);
                        }
                    }
                    for (x, &a) in flat.iter().enumerate() {
                        for &b in &flat[x + 1..] {
                            covered[a * n + b] = true;
                        }
                    }
                    flats.push(flat);
                }
            }
            IntersectionLattice::from_flats(n, flats).expect("valid generic lattice")
        })
    }

    /// `det(col_i, col_j, col_k)` in `Z[t]`.
    pub fn triple_det(&self, i: usize, j: usize, k: usize) -> IntPoly {
        let (a, b, c) = (&self.columns[i], &self.columns[j], &self.columns[k]);
        let minor = |x: usize, y: usize| &(&b[x] * &c[y]) - &(&b[y] * &c[x]);
        let t0 = &a[0] * &minor(1, 2);
        let t1 = &a[1] * &minor(0, 2);
        let t2 = &a[2] * &minor(0, 1);
        &(&t0 - &t1) + &t2
    }

    fn pair_minors(&self, i: usize, j: usize) -> [IntPoly; 3] {
        let (a, b) = (&self.columns[i], &self.columns[j]);
        let m = |x: usize, y: usize| &(&a[x] * &b[y]) - &(&a[y] * &b[x]);
        [m(1, 2), m(0, 2), m(0, 1)]
    }

    pub fn evaluate<F: Scalar>(&self, omega: &F) -> Vec<[F; 3]> {
        self.columns
            .iter()
            .map(|c| std::array::from_fn(|r| c[r].eval(omega)))
            .collect()
    }

    /// Evaluates every entry at `omega`, drops zero columns and merges
    /// proportional ones (the first occurrence survives).
    pub fn specialize<F: Scalar>(&self, omega: &F) -> Specialization<F> {
        let cols = self.evaluate(omega);
        let mut kept: Vec<usize> = Vec::new();
        let mut dropped = Vec::new();
        let mut merged = Vec::new();
        for (i, c) in cols.iter().enumerate() {
            if c.iter().all(Scalar::is_zero) {
                dropped.push(i);
            } else if let Some(&j) = kept.iter().find(|&&j| proportional(&cols[j], c)) {
                merged.push((i, j));
            } else {
                kept.push(i);
            }
        }
        let arrangement = Arrangement::build(kept.iter().map(|&i| cols[i].clone()).collect()).ok();
        let count = kept.len();
        let matches_generic = count == self.len()
            && arrangement
                .as_ref()
                .is_some_and(|a| lattice_iso(&a.lattice(), self.generic_lattice()).is_some());
        Specialization {
            value: omega.to_string(),
            kept,
            dropped,
            merged,
            count,
            arrangement,
            matches_generic,
        }
    }

    /// Membership of `A_omega` in the realization space of `l`: full count
    /// and isomorphic lattice.
    pub fn vl_membership<F: Scalar>(&self, l: &IntersectionLattice, omega: &F) -> bool {
        let s = self.specialize(omega);
        s.count == self.len()
            && s.arrangement
                .as_ref()
                .is_some_and(|a| lattice_iso(&a.lattice(), l).is_some())
    }

    /// Polynomials in `t` whose roots contain every parameter at which a
    /// column vanishes, two columns become proportional, or a generically
    /// independent triple becomes dependent.
    pub fn degeneracy_polynomials(&self) -> Vec<IntPoly> {
        let n = self.len();
        let mut set: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        let mut keep = |p: IntPoly| {
            if !p.is_constant() {
                set.insert(p.primitive_part().coeffs().to_vec());
            }
        };
        for c in &self.columns {
            keep(c[0].gcd(&c[1]).gcd(&c[2]));
        }
        for i in 0..n {
            for j in i + 1..n {
                let [x, y, z] = self.pair_minors(i, j);
                keep(x.gcd(&y).gcd(&z));
                for k in j + 1..n {
                    let d = self.triple_det(i, j, k);
                    if !d.is_zero() {
                        keep(d);
                    }
                }
            }
        }
        set.into_iter().map(IntPoly::new).collect()
    }

    /// Classifies every candidate exceptional value by actually specializing.
    pub fn degeneracy_set(&self) -> DegeneracyReport {
        let mut roots: BTreeSet<BigRat> = BTreeSet::new();
        let mut quadratics: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        let mut unresolved: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        for p in self.degeneracy_polynomials() {
            let (factors, rest) = p.factor_low_degree().expect("nonzero");
            for (f, _) in factors {
                match f.degree() {
                    Some(1) => {
                        roots.insert(BigRat::new(-f.coeff(0), f.coeff(1)));
                    }
                    Some(2) => {
                        quadratics.insert(f.coeffs().to_vec());
                    }
                    _ => unreachable!("factor_low_degree returns degrees 1 and 2"),
                }
            }
            if !rest.is_constant() {
                unresolved.insert(rest.coeffs().to_vec());
            }
        }

        let mut report = DegeneracyReport::default();
        for r in roots {
            let spec = self.specialize(&r);
            match spec.tag(self.len()) {
                Some(tag) => report.rational.push(RationalException { value: r, tag, count: spec.count }),
                None => report.discarded.push(r.to_string()),
            }
        }
        for coeffs in quadratics {
            let factor = IntPoly::new(coeffs);
            let root = quadratic_root(&factor);
            let spec = self.specialize(&root);
            match spec.tag(self.len()) {
                Some(tag) => report.quadratic.push(QuadraticException {
                    d: root.field().expect("irrational root"),
                    factor,
                    root,
                    tag,
                    count: spec.count,
                }),
                None => report.discarded.push(factor.to_string()),
            }
        }
        report.unresolved = unresolved.into_iter().map(IntPoly::new).collect();
        report
    }
}

/// One root `(-b + s sqrt(d)) / 2a` of an irreducible quadratic
/// `a t^2 + b t + c`, with `b^2 - 4ac = s^2 d` and `d` square-free.
pub fn quadratic_root(f: &IntPoly) -> QuadElem {
    let disc = f.discriminant().expect("quadratic");
    let d = square_free_part(&disc);
    let s = (&disc / &d).sqrt();
    debug_assert_eq!(&s * &s * &d, disc);
    let two_a = BigInt::from(2) * f.coeff(2);
    let d = i64::try_from(&d).expect("small discriminant");
    QuadElem::new(d, BigRat::new(-f.coeff(1), two_a.clone()), BigRat::new(s, two_a))
        .expect("square-free discriminant of an irreducible quadratic")
}

#[derive(Clone, Debug)]
pub struct Specialization<F> {
    pub value: String,
    /// Original labels that survive, in order; label `kept[i]` becomes `i`.
    pub kept: Vec<usize>,
    /// Columns that evaluate to zero.
    pub dropped: Vec<usize>,
    /// `(i, j)`: column `i` became proportional to the earlier column `j`.
    pub merged: Vec<(usize, usize)>,
    pub count: usize,
    /// `None` when the surviving columns have rank below 3.
    pub arrangement: Option<Arrangement<F>>,
    pub matches_generic: bool,
}

impl<F> Specialization<F> {
    pub fn tag(&self, n: usize) -> Option<DegeneracyTag> {
        if self.count < n {
            Some(DegeneracyTag::CountDrops)
        } else if !self.matches_generic {
            Some(DegeneracyTag::LatticeChanges)
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DegeneracyTag {
    CountDrops,
    LatticeChanges,
}

impl fmt::Display for DegeneracyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DegeneracyTag::CountDrops => "CountDrops",
            DegeneracyTag::LatticeChanges => "LatticeChanges",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalException {
    #[serde(serialize_with = "ser_display")]
    pub value: BigRat,
    pub tag: DegeneracyTag,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadraticException {
    #[serde(serialize_with = "ser_display")]
    pub factor: IntPoly,
    pub d: i64,
    /// The root that was specialized; its conjugate behaves the same way.
    #[serde(serialize_with = "ser_display")]
    pub root: QuadElem,
    pub tag: DegeneracyTag,
    pub count: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DegeneracyReport {
    pub rational: Vec<RationalException>,
    pub quadratic: Vec<QuadraticException>,
    /// Factors of degree at least 3 that were not examined.
    #[serde(serialize_with = "ser_display_vec")]
    pub unresolved: Vec<IntPoly>,
    /// Candidates from vanishing minors whose specialization is still generic.
    pub discarded: Vec<String>,
}

fn ser_display_vec<S: serde::Serializer>(v: &[IntPoly], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

impl DegeneracyReport {
    pub fn rational_values(&self) -> Vec<BigRat> {
        self.rational.iter().map(|e| e.value.clone()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.rational.is_empty() && self.quadratic.is_empty() && self.unresolved.is_empty()
    }
}

impl fmt::Display for DegeneracyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.rational {
            writeln!(f, "t = {}: {} (count {})", e.value, e.tag, e.count)?;
        }
        for e in &self.quadratic {
            writeln!(f, "{} = 0, t = {}: {} (count {})", e.factor, e.root, e.tag, e.count)?;
        }
        for p in &self.unresolved {
            writeln!(f, "{p} = 0: unresolved")?;
        }
        if self.is_empty() {
            writeln!(f, "no exceptional parameters")?;
        }
        Ok(())
    }
}

/// Parses the family file format: one hyperplane per line as three
/// bracketed integer coefficient lists in ascending powers of `t`,
/// e.g. `[-1, 1] [0, 1] [0, 0, -1]` for `(t-1, t, -t^2)`. Blank lines and
/// `#` comments are ignored; `name: <id>` sets the family name.
pub fn parse_family(text: &str) -> Result<Family, ModuliError> {
    let mut name = String::from("file");
    let mut columns = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.trim().strip_prefix("name:") {
            name = rest.trim().to_string();
            continue;
        }
        let mut entries: Vec<IntPoly> = Vec::new();
        let mut pos = 0;
        while let Some(open) = line[pos..].find('[') {
            let open = pos + open;
            let gap = line[pos..open].trim().trim_matches(',');
            if !gap.trim().is_empty() {
                return Err(ModuliError::Parse { line: line_no, col: pos + 1, msg: format!("unexpected {gap:?}") });
            }
            let close = line[open..].find(']').map(|c| c + open).ok_or(ModuliError::Parse {
                line: line_no,
                col: open + 1,
                msg: "missing ']'".into(),
            })?;
            let mut coeffs = Vec::new();
            let body = &line[open + 1..close];
            let mut offset = open + 1;
            for item in body.split(',') {
                let trimmed = item.trim();
                if !trimmed.is_empty() {
                    let col = offset + item.find(trimmed).unwrap_or(0) + 1;
                    let c: BigInt = trimmed.parse().map_err(|_| ModuliError::Parse {
                        line: line_no,
                        col,
                        msg: format!("expected an integer, found {trimmed:?}"),
                    })?;
                    coeffs.push(c);
                }
                offset += item.len() + 1;
            }
            entries.push(IntPoly::new(coeffs));
            pos = close + 1;
        }
        if !line[pos..].trim().trim_matches(',').trim().is_empty() {
            return Err(ModuliError::Parse { line: line_no, col: pos + 1, msg: "trailing characters".into() });
        }
        let Ok(column) = <[IntPoly; 3]>::try_from(entries) else {
            return Err(ModuliError::Parse { line: line_no, col: 1, msg: "expected exactly three coefficient lists".into() });
        };
        columns.push(column);
    }
    Family::new(name, columns)
}

/// Renders a family in the format read by [`parse_family`].
pub fn format_family(f: &Family) -> String {
    let mut s = format!("name: {}\n", f.name());
    for c in f.columns() {
        let lists: Vec<String> = c
            .iter()
            .map(|p| {
                let v: Vec<String> = if p.is_zero() {
                    vec!["0".into()]
                } else {
                    p.coeffs().iter().map(ToString::to_string).collect()
                };
                format!("[{}]", v.join(", "))
            })
            .collect();
        s.push_str(&lists.join(" "));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRat {
        BigRat::new(n.into(), d.into())
    }

    #[test]
    fn published_columns() {
        let f = Family::paper13();
        assert_eq!(f.len(), 13);
        assert_eq!(f.columns()[0], polys([&[1], &[0], &[0]]));
        let last = &f.columns()[12];
        assert_eq!(last[0].to_string(), "t - 1");
        assert_eq!(last[1].to_string(), "t");
        assert_eq!(last[2].to_string(), "-t^2");
        let g = Family::paper15();
        assert_eq!(g.len(), 15);
        let last = &g.columns()[14];
        assert_eq!(last.each_ref().map(ToString::to_string), ["3*t - 1", "2*t - 1", "t"]);
    }

    #[test]
    fn constant_family_has_no_exceptions() {
        let f = parse_family("[1] [0] [0]\n[0] [1] [0]\n[0] [0] [1]\n[1] [1] [1]\n").unwrap();
        assert!(f.is_constant());
        assert!(f.degeneracy_set().is_empty());
        let at = f.specialize(&q(7, 1));
        assert!(at.matches_generic);
        assert_eq!(at.arrangement.unwrap().lattice(), *f.generic_lattice());
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_family("[1] [0] [0]\n[0] [x] [0]\n").unwrap_err();
        assert_eq!(err, ModuliError::Parse { line: 2, col: 6, msg: "expected an integer, found \"x\"".into() });
        let err = parse_family("[1] [0]\n").unwrap_err();
        assert!(matches!(err, ModuliError::Parse { line: 1, .. }));
        let err = parse_family("[1] [0] [0]\n[2] [0] [0]\n[0] [0] [1]\n").unwrap_err();
        assert_eq!(err, ModuliError::Generic(ArrangementError::ProportionalColumns(0, 1)));
    }

    #[test]
    fn format_round_trips() {
        let f = Family::paper15();
        let g = parse_family(&format_family(&f)).unwrap();
        assert_eq!(g.columns(), f.columns());
        assert_eq!(g.name(), "paper15");
    }

    #[test]
    fn quadratic_roots_are_roots() {
        for coeffs in [[1, -1, 1], [1, -12, 4], [-1, 1, 1]] {
            let f = IntPoly::from_i64s(&coeffs);
            assert!(Scalar::is_zero(&f.eval(&quadratic_root(&f))));
        }
        let r = quadratic_root(&IntPoly::from_i64s(&[1, -12, 4]));
        assert_eq!(r.to_string(), "3/2 + sqrt(2)");
    }
}
