//! Backtracking isomorphism search between rank-3 lattices.
//!
//! A bijection of hyperplanes is a lattice isomorphism iff it carries every
//! flat onto a flat. The search assigns hyperplanes one at a time and keeps
//! a partial flat bijection consistent with every assigned pair.

use serde::Serialize;

use super::IntersectionLattice;

const FREE: usize = usize::MAX;

struct Search<'a> {
    a: &'a IntersectionLattice,
    b: &'a IntersectionLattice,
    inv_a: Vec<Vec<usize>>,
    inv_b: Vec<Vec<usize>>,
    order: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
    flat_map: Vec<usize>,
    flat_used: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(a: &'a IntersectionLattice, b: &'a IntersectionLattice) -> Self {
        Search {
            a,
            b,
            inv_a: (0..a.n()).map(|h| a.invariant(h)).collect(),
            inv_b: (0..b.n()).map(|h| b.invariant(h)).collect(),
            order: Vec::with_capacity(a.n()),
            map: vec![FREE; a.n()],
            used: vec![false; b.n()],
            flat_map: vec![FREE; a.flats().len()],
            flat_used: vec![false; b.flats().len()],
        }
    }

    /// Tries `v -> w` against the assigned prefix; on success returns the
    /// flats newly mapped so the caller can undo them.
    fn assign(&mut self, v: usize, w: usize) -> Option<Vec<usize>> {
        if self.used[w] || self.inv_a[v] != self.inv_b[w] {
            return None;
        }
        let mut fresh = Vec::new();
        for &u in &self.order {
            let fa = self.a.flat_of(v, u);
            let fb = self.b.flat_of(w, self.map[u]);
            let ok = if self.flat_map[fa] == FREE {
                if !self.flat_used[fb] && self.a.flat(fa).len() == self.b.flat(fb).len() {
                    self.flat_map[fa] = fb;
                    self.flat_used[fb] = true;
                    fresh.push(fa);
                    true
                } else {
                    false
                }
            } else {
                self.flat_map[fa] == fb
            };
            if !ok {
                self.undo_flats(&fresh);
                return None;
            }
        }
        self.map[v] = w;
        self.used[w] = true;
        self.order.push(v);
        Some(fresh)
    }

    fn undo_flats(&mut self, fresh: &[usize]) {
        for &fa in fresh {
            self.flat_used[self.flat_map[fa]] = false;
            self.flat_map[fa] = FREE;
        }
    }

    fn unassign(&mut self, v: usize, fresh: &[usize]) {
        self.undo_flats(fresh);
        self.used[self.map[v]] = false;
        self.map[v] = FREE;
        self.order.pop();
    }

    fn run(&mut self, pending: &[usize]) -> bool {
        let Some((&v, rest)) = pending.split_first() else {
            return true;
        };
        for w in 0..self.b.n() {
            if let Some(fresh) = self.assign(v, w) {
                if self.run(rest) {
                    return true;
                }
                self.unassign(v, &fresh);
            }
        }
        false
    }
}

/// An isomorphism extending the forced assignments `prefix`, as
/// `perm[h_a] = h_b`.
pub fn find_isomorphism_with_prefix(
    a: &IntersectionLattice,
    b: &IntersectionLattice,
    prefix: &[(usize, usize)],
) -> Option<Vec<usize>> {
    if a.n() != b.n() || a.flats().len() != b.flats().len() {
        return None;
    }
    let mut s = Search::new(a, b);
    for &(v, w) in prefix {
        s.assign(v, w)?;
    }
    let pending: Vec<usize> = (0..a.n()).filter(|&v| s.map[v] == FREE).collect();
    if s.run(&pending) {
        let perm = s.map.clone();
        debug_assert!(is_isomorphism(a, b, &perm));
        Some(perm)
    } else {
        None
    }
}

pub fn lattice_iso(a: &IntersectionLattice, b: &IntersectionLattice) -> Option<Vec<usize>> {
    find_isomorphism_with_prefix(a, b, &[])
        .filter(|perm| is_isomorphism(a, b, perm))
}

/// Direct witness check: `perm` is a bijection and maps the flat set of `a`
/// onto the flat set of `b`.
pub fn is_isomorphism(a: &IntersectionLattice, b: &IntersectionLattice, perm: &[usize]) -> bool {
    if a.n() != b.n() || perm.len() != a.n() {
        return false;
    }
    let mut seen = vec![false; b.n()];
    for &p in perm {
        if p >= b.n() || std::mem::replace(&mut seen[p], true) {
            return false;
        }
    }
    a.relabel(perm).flats() == b.flats()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutGroup {
    pub order: u128,
    /// Coset representatives along the stabilizer chain of `0, 1, 2, ...`;
    /// together they generate the group.
    pub generators: Vec<Vec<usize>>,
    /// Orbit length of hyperplane `k` under the pointwise stabilizer of `0..k`.
    pub orbit_lengths: Vec<usize>,
}

/// Automorphism group via the stabilizer chain: the order is the product
/// of the orbit lengths of `k` under the stabilizer of `0..k`.
pub fn aut_group(l: &IntersectionLattice) -> AutGroup {
    let n = l.n();
    let mut prefix: Vec<(usize, usize)> = Vec::new();
    let mut order: u128 = 1;
    let mut generators = Vec::new();
    let mut orbit_lengths = Vec::new();
    for k in 0..n {
        let mut orbit = 1;
        for y in k + 1..n {
            let mut attempt = prefix.clone();
            attempt.push((k, y));
            if let Some(g) = find_isomorphism_with_prefix(l, l, &attempt) {
                orbit += 1;
                generators.push(g);
            }
        }
        order *= orbit as u128;
        orbit_lengths.push(orbit);
        prefix.push((k, k));
    }
    AutGroup { order, generators, orbit_lengths }
}
