//! Central rank-3 arrangements stored as their normal covectors.

mod canon;
mod iso;
mod lattice;

use thiserror::Error;

use crate::linalg::{cross, det3, Matrix};
use crate::scalars::Scalar;

pub use canon::canonical_key;
pub use iso::{aut_group, find_isomorphism_with_prefix, is_isomorphism, lattice_iso, AutGroup};
pub use lattice::{rank2_char_poly, CharPoly, IntersectionLattice, LatticeError, RestrictionProfile};

/// Errors from building or editing an arrangement. Labels are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrangementError {
    #[error("column {} is zero", .0 + 1)]
    ZeroColumn(usize),
    #[error("columns {} and {} are proportional", .0 + 1, .1 + 1)]
    ProportionalColumns(usize, usize),
    #[error("arrangement is not essential (rank < 3)")]
    NotEssential,
    #[error("no hyperplane with label {}", .0 + 1)]
    UnknownLabel(usize),
}

/// A central essential arrangement in `K^3`: hyperplane `i` is the kernel of
/// column `i`. Columns are nonzero and pairwise non-proportional.
#[derive(Clone, Debug, PartialEq)]
pub struct Arrangement<F> {
    columns: Vec<[F; 3]>,
}

pub(crate) fn proportional<F: Scalar>(a: &[F; 3], b: &[F; 3]) -> bool {
    cross(a, b).iter().all(Scalar::is_zero)
}

impl<F: Scalar> Arrangement<F> {
    pub fn build(columns: Vec<[F; 3]>) -> Result<Self, ArrangementError> {
        for (i, c) in columns.iter().enumerate() {
            if c.iter().all(Scalar::is_zero) {
                return Err(ArrangementError::ZeroColumn(i));
            }
        }
        for i in 0..columns.len() {
            for j in i + 1..columns.len() {
                if proportional(&columns[i], &columns[j]) {
                    return Err(ArrangementError::ProportionalColumns(i, j));
                }
            }
        }
        let rows = (0..3).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect();
        if columns.len() < 3 || Matrix::from_rows(rows).rank() < 3 {
            return Err(ArrangementError::NotEssential);
        }
        Ok(Arrangement { columns })
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[[F; 3]] {
        &self.columns
    }

    pub fn column(&self, h: usize) -> Result<&[F; 3], ArrangementError> {
        self.columns.get(h).ok_or(ArrangementError::UnknownLabel(h))
    }

    /// Rank-2 flats by determinant clustering: `{i, j}` and `k` share a flat
    /// iff `det(a_i, a_j, a_k) = 0`.
    pub fn lattice(&self) -> IntersectionLattice {
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
                    if det3(&self.columns[i], &self.columns[j], &self.columns[k]).is_zero() {
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
        IntersectionLattice::from_flats(n, flats).expect("determinant clustering yields a valid lattice")
    }

    pub fn char_poly(&self) -> CharPoly {
        self.lattice().char_poly()
    }

    pub fn restriction_profile(&self, h: usize) -> Result<RestrictionProfile, ArrangementError> {
        self.column(h)?;
        Ok(self.lattice().restriction_profile(h))
    }

    /// Removes hyperplane `h`; labels above `h` shift down by one.
    pub fn delete(&self, h: usize) -> Result<Arrangement<F>, ArrangementError> {
        self.column(h)?;
        let mut columns = self.columns.clone();
        columns.remove(h);
        Arrangement::build(columns)
    }

    /// Appends a hyperplane as the last label.
    pub fn add(&self, covector: [F; 3]) -> Result<Arrangement<F>, ArrangementError> {
        let mut columns = self.columns.clone();
        columns.push(covector);
        Arrangement::build(columns)
    }

    /// Position of the column proportional to `covector`, if any.
    pub fn find(&self, covector: &[F; 3]) -> Option<usize> {
        self.columns.iter().position(|c| proportional(c, covector))
    }

    /// Applies the linear coordinate change `x -> M x` on `V`; covectors
    /// transform by `a -> a M^{-1}`, given here as `m_inv`.
    pub fn transform(&self, m_inv: &[[F; 3]; 3]) -> Result<Arrangement<F>, ArrangementError> {
        let cols = self
            .columns
            .iter()
            .map(|a| {
                std::array::from_fn(|j| {
                    (0..3).fold(F::zero(), |acc, i| acc.plus(&a[i].times(&m_inv[i][j])))
                })
            })
            .collect();
        Arrangement::build(cols)
    }

    /// Coordinates with every column scaled to first nonzero entry 1, sorted.
    /// Two arrangements with the same hyperplane set get the same string.
    pub fn normalized_key(&self) -> String {
        let mut cols: Vec<[F; 3]> = self.columns.iter().map(normalize).collect();
        cols.sort_by(|a, b| {
            a.iter()
                .zip(b.iter())
                .map(|(x, y)| x.canonical_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        cols.iter()
            .map(|c| format!("({},{},{})", c[0], c[1], c[2]))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Scales a nonzero covector so its first nonzero entry is 1.
pub fn normalize<F: Scalar>(c: &[F; 3]) -> [F; 3] {
    let lead = c.iter().find(|x| !x.is_zero()).expect("nonzero covector");
    let inv = lead.inverse().expect("nonzero lead");
    std::array::from_fn(|i| c[i].times(&inv))
}
