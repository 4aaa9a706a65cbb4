use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::scalars::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("flat {0:?} has fewer than two hyperplanes")]
    SmallFlat(Vec<usize>),
    #[error("hyperplane {} out of range", .0 + 1)]
    OutOfRange(usize),
    #[error("hyperplanes {a} and {b} lie in {c} flats (expected exactly one)", a = .0 + 1, b = .1 + 1, c = .2)]
    PairCoverage(usize, usize, usize),
    #[error("malformed lattice listing: {0}")]
    Listing(String),
}

/// The rank-2 part of the intersection lattice of a central rank-3
/// arrangement: every pair of hyperplanes lies in exactly one flat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionLattice {
    n: usize,
    /// Sorted members of each flat; flats in lexicographic order.
    flats: Vec<Vec<usize>>,
    per_hyperplane: Vec<Vec<usize>>,
    pair_flat: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictionProfile {
    /// `|A^H|`, the number of flats on `H`.
    pub size: usize,
    /// Multiplicities of those flats, ascending.
    pub multiplicities: Vec<usize>,
}

impl IntersectionLattice {
    pub fn from_flats(n: usize, flats: Vec<Vec<usize>>) -> Result<Self, LatticeError> {
        let mut flats: Vec<Vec<usize>> = flats
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect();
        flats.sort();
        let mut count = vec![0usize; n * n];
        let mut pair_flat = vec![usize::MAX; n * n];
        let mut per_hyperplane = vec![Vec::new(); n];
        for (idx, f) in flats.iter().enumerate() {
            if f.len() < 2 {
                return Err(LatticeError::SmallFlat(f.clone()));
            }
            if let Some(&bad) = f.iter().find(|&&h| h >= n) {
                return Err(LatticeError::OutOfRange(bad));
            }
            for (x, &a) in f.iter().enumerate() {
                per_hyperplane[a].push(idx);
                for &b in &f[x + 1..] {
                    count[a * n + b] += 1;
                    pair_flat[a * n + b] = idx;
                    pair_flat[b * n + a] = idx;
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if count[a * n + b] != 1 {
                    return Err(LatticeError::PairCoverage(a, b, count[a * n + b]));
                }
            }
        }
        Ok(IntersectionLattice { n, flats, per_hyperplane, pair_flat })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flats(&self) -> &[Vec<usize>] {
        &self.flats
    }

    pub fn flat(&self, idx: usize) -> &[usize] {
        &self.flats[idx]
    }

    /// Indices of the flats on hyperplane `h`, ascending.
    pub fn incident(&self, h: usize) -> &[usize] {
        &self.per_hyperplane[h]
    }

    /// The flat containing two distinct hyperplanes.
    pub fn flat_of(&self, a: usize, b: usize) -> usize {
        debug_assert_ne!(a, b);
        self.pair_flat[a * self.n + b]
    }

    pub fn max_multiplicity(&self) -> usize {
        self.flats.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn restriction_size(&self, h: usize) -> usize {
        self.per_hyperplane[h].len()
    }

    pub fn restriction_profile(&self, h: usize) -> RestrictionProfile {
        RestrictionProfile { size: self.restriction_size(h), multiplicities: self.invariant(h) }
    }

    /// Sorted multiplicities of the flats on `h`; preserved by isomorphisms.
    pub fn invariant(&self, h: usize) -> Vec<usize> {
        let mut m: Vec<usize> = self.per_hyperplane[h].iter().map(|&f| self.flats[f].len()).collect();
        m.sort_unstable();
        m
    }

    /// Rank 3 iff at least three hyperplanes and no flat holds all of them.
    pub fn is_essential(&self) -> bool {
        self.n >= 3 && self.flats.iter().all(|f| f.len() < self.n)
    }

    /// `x^3 - n x^2 + (sum (m_X - 1)) x + mu_0` with `mu_0` forced by `chi(1) = 0`.
    pub fn char_poly(&self) -> CharPoly {
        let n = self.n as i64;
        let b: i64 = self.flats.iter().map(|f| f.len() as i64 - 1).sum();
        CharPoly { coeffs: [-(1 - n + b), b, -n, 1] }
    }

    /// Lattice of the arrangement with `h` removed, labels above `h` shifted down.
    pub fn delete(&self, h: usize) -> IntersectionLattice {
        let flats = self
            .flats
            .iter()
            .filter_map(|f| {
                let g: Vec<usize> = f
                    .iter()
                    .filter(|&&x| x != h)
                    .map(|&x| if x > h { x - 1 } else { x })
                    .collect();
                (g.len() >= 2).then_some(g)
            })
            .collect();
        IntersectionLattice::from_flats(self.n - 1, flats).expect("deletion preserves pair coverage")
    }

    /// Relabels hyperplane `h` as `perm[h]`.
    pub fn relabel(&self, perm: &[usize]) -> IntersectionLattice {
        let flats = self.flats.iter().map(|f| f.iter().map(|&h| perm[h]).collect()).collect();
        IntersectionLattice::from_flats(self.n, flats).expect("relabeling preserves pair coverage")
    }

    /// Flats through `h`, ordered by their smallest other member.
    fn flats_through_in_scan_order(&self, h: usize) -> Vec<usize> {
        let mut fs = self.per_hyperplane[h].clone();
        fs.sort_by_key(|&f| self.flats[f].iter().copied().find(|&x| x != h));
        fs
    }

    /// Per-hyperplane flat lists with flats numbered `1..` by first
    /// appearance, scanning hyperplanes in label order.
    pub fn listing(&self) -> Vec<Vec<usize>> {
        let mut number = vec![0usize; self.flats.len()];
        let mut next = 1;
        let mut out = Vec::with_capacity(self.n);
        for h in 0..self.n {
            let mut line = Vec::new();
            for f in self.flats_through_in_scan_order(h) {
                if number[f] == 0 {
                    number[f] = next;
                    next += 1;
                }
                line.push(number[f]);
            }
            line.sort_unstable();
            out.push(line);
        }
        out
    }

    /// One `[a, b, ...]` line per hyperplane.
    pub fn listing_text(&self) -> String {
        let mut s = String::new();
        for line in self.listing() {
            let items: Vec<String> = line.iter().map(ToString::to_string).collect();
            s.push('[');
            s.push_str(&items.join(", "));
            s.push_str("]\n");
        }
        s
    }

    /// Parses bracketed lists, one per hyperplane; anything outside the
    /// brackets (commas, `\left`, line breaks) is ignored.
    pub fn parse_listing(text: &str) -> Result<IntersectionLattice, LatticeError> {
        let mut lists: Vec<Vec<usize>> = Vec::new();
        let mut rest = text;
        while let Some(open) = rest.find('[') {
            let close = rest[open..]
                .find(']')
                .ok_or_else(|| LatticeError::Listing("unterminated '['".into()))?
                + open;
            let items = rest[open + 1..close]
                .split(',')
                .map(|s| {
                    let s = s.trim().trim_end_matches("\\right");
                    s.trim().parse::<usize>().map_err(|_| LatticeError::Listing(format!("bad flat number {s:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            lists.push(items);
            rest = &rest[close + 1..];
        }
        if lists.is_empty() {
            return Err(LatticeError::Listing("no lists found".into()));
        }
        let k = lists.iter().flatten().copied().max().unwrap_or(0);
        let mut flats = vec![Vec::new(); k + 1];
        for (h, list) in lists.iter().enumerate() {
            for &f in list {
                flats[f].push(h);
            }
        }
        if !flats[0].is_empty() {
            return Err(LatticeError::Listing("flat numbers start at 1".into()));
        }
        IntersectionLattice::from_flats(lists.len(), flats.into_iter().skip(1).collect())
    }
}

/// Characteristic polynomial of a rank-3 lattice, ascending integer
/// coefficients of a monic cubic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CharPoly {
    coeffs: [i64; 4],
}

impl CharPoly {
    pub fn coeffs(&self) -> [i64; 4] {
        self.coeffs
    }

    pub fn eval(&self, x: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, c| acc * x + c)
    }

    pub fn as_poly(&self) -> IntPoly {
        IntPoly::from_i64s(&self.coeffs)
    }

    /// `chi(x) / (x - 1)`, a monic quadratic.
    pub fn reduced(&self) -> IntPoly {
        let [_, _, c2, _] = self.coeffs;
        let p = c2 + 1;
        let q = -self.coeffs[0];
        IntPoly::from_i64s(&[q, p, 1])
    }

    /// `[1, e2, e3]` with `e2 <= e3` when `chi = (x-1)(x-e2)(x-e3)` over the
    /// non-negative integers.
    pub fn exponents(&self) -> Option<[u64; 3]> {
        let r = self.reduced();
        let sum = -r.coeffs().get(1).map_or(0, |c| i64::try_from(c).unwrap());
        let prod = r.coeffs().first().map_or(0, |c| i64::try_from(c).unwrap());
        let disc = sum * sum - 4 * prod;
        if disc < 0 {
            return None;
        }
        let s = num_integer::Roots::sqrt(&disc);
        if s * s != disc {
            return None;
        }
        if (sum - s) % 2 != 0 || sum - s < 0 {
            return None;
        }
        Some([1, ((sum - s) / 2) as u64, ((sum + s) / 2) as u64])
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lin = |r: u64| if r == 0 { "x".to_string() } else { format!("(x-{r})") };
        if let Some([a, b, c]) = self.exponents() {
            let mut roots = vec![a, b, c];
            roots.sort_unstable();
            roots.dedup();
            for r in roots {
                let m = [a, b, c].iter().filter(|&&x| x == r).count();
                write!(f, "{}", lin(r))?;
                if m > 1 {
                    write!(f, "^{m}")?;
                }
            }
            return Ok(());
        }
        // (x-1) times an integer quadratic that does not split
        let r = self.reduced();
        let p = i64::try_from(&r.coeffs()[1]).unwrap();
        let q = i64::try_from(&r.coeffs()[0]).unwrap();
        write!(f, "(x-1)(x^2")?;
        match p {
            0 => {}
            1 => write!(f, "+x")?,
            -1 => write!(f, "-x")?,
            p if p > 0 => write!(f, "+{p}x")?,
            p => write!(f, "{p}x")?,
        }
        match q {
            0 => {}
            q if q > 0 => write!(f, "+{q}")?,
            q => write!(f, "{q}")?,
        }
        write!(f, ")")
    }
}

/// `chi` of a rank-2 arrangement of `k` lines: `x^2 - k x + (k - 1)`.
pub fn rank2_char_poly(k: usize) -> [i64; 3] {
    let k = k as i64;
    [k - 1, -k, 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_flat_lists() {
        assert_eq!(
            IntersectionLattice::from_flats(3, vec![vec![0, 1], vec![1, 2]]).unwrap_err(),
            LatticeError::PairCoverage(0, 2, 0)
        );
        assert_eq!(
            IntersectionLattice::from_flats(3, vec![vec![0, 1, 2], vec![1, 2]]).unwrap_err(),
            LatticeError::PairCoverage(1, 2, 2)
        );
        assert!(matches!(
            IntersectionLattice::from_flats(2, vec![vec![0]]),
            Err(LatticeError::SmallFlat(_))
        ));
    }

    #[test]
    fn chi_vanishes_at_one_and_factors() {
        let l = IntersectionLattice::from_flats(3, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap();
        assert_eq!(l.char_poly().eval(1), 0);
        assert_eq!(l.char_poly().exponents(), Some([1, 1, 1]));
    }

    #[test]
    fn exponents_from_chi() {
        // (x-1)(x-6)^2 = x^3 - 13x^2 + 48x - 36
        let chi = CharPoly { coeffs: [-36, 48, -13, 1] };
        assert_eq!(chi.exponents(), Some([1, 6, 6]));
        assert_eq!(chi.to_string(), "(x-1)(x-6)^2");
        // (x-1)(x-5)(x-7) = x^3 - 13x^2 + 47x - 35
        let chi = CharPoly { coeffs: [-35, 47, -13, 1] };
        assert_eq!(chi.exponents(), Some([1, 5, 7]));
        assert_eq!(chi.to_string(), "(x-1)(x-5)(x-7)");
        // (x-1)(x^2 - 11x + 31)
        let chi = CharPoly { coeffs: [-31, 42, -12, 1] };
        assert_eq!(chi.exponents(), None);
        assert_eq!(chi.to_string(), "(x-1)(x^2-11x+31)");
    }

    #[test]
    fn listing_round_trips_up_to_isomorphism() {
        let l = IntersectionLattice::from_flats(
            5,
            vec![vec![0, 1, 2], vec![0, 3], vec![0, 4], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]],
        )
        .unwrap();
        let text = l.listing_text();
        assert!(text.starts_with("[1, 2, 3]\n"));
        let back = IntersectionLattice::parse_listing(&text).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn parses_latex_style_lists() {
        let l = IntersectionLattice::parse_listing(r"&\left[1, 2\right],\left[1, 3\right],\\ \left[2, 3\right]").unwrap();
        assert_eq!(l.n(), 3);
        assert_eq!(l.flats().len(), 3);
    }

    #[test]
    fn deletion_compacts_labels() {
        let l = IntersectionLattice::from_flats(
            4,
            vec![vec![0, 1, 2], vec![0, 3], vec![1, 3], vec![2, 3]],
        )
        .unwrap();
        let d = l.delete(3);
        assert_eq!(d.n(), 3);
        assert!(!d.is_essential());
        let d = l.delete(0);
        assert_eq!(d.flats(), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert!(d.is_essential());
    }
}
