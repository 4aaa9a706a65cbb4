//! Canonical form of a lattice by individualization and refinement.
//!
//! Hyperplanes are colored by an ordered partition that is refined with
//! label-independent signatures until stable; non-singleton cells are split
//! by individualizing each member in turn. Every leaf is a labeling, and the
//! key is the lexicographically smallest flat encoding over all leaves.
//! Subtrees that are images of explored ones under automorphisms found so
//! far are skipped.

use std::collections::BTreeMap;

use super::IntersectionLattice;

type Encoding = Vec<Vec<usize>>;

/// A string equal for two lattices iff they are isomorphic.
pub fn canonical_key(l: &IntersectionLattice) -> String {
    let mut search = Canon { l, best: None, autos: Vec::new() };
    let mut prefix = Vec::new();
    search.explore(vec![(0..l.n()).collect()], &mut prefix);
    let (enc, _) = search.best.expect("at least one leaf");
    let flats: Vec<String> = enc
        .iter()
        .map(|f| f.iter().map(ToString::to_string).collect::<Vec<_>>().join("."))
        .collect();
    format!("n{}:{}", l.n(), flats.join("|"))
}

struct Canon<'a> {
    l: &'a IntersectionLattice,
    /// Smallest encoding so far and its position map.
    best: Option<(Encoding, Vec<usize>)>,
    autos: Vec<Vec<usize>>,
}

impl Canon<'_> {
    fn refine(&self, cells: &mut Vec<Vec<usize>>) {
        loop {
            let mut color = vec![0; self.l.n()];
            for (c, cell) in cells.iter().enumerate() {
                for &v in cell {
                    color[v] = c;
                }
            }
            let mut next = Vec::with_capacity(cells.len());
            let mut changed = false;
            for cell in cells.iter() {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut groups: BTreeMap<Vec<(usize, Vec<usize>)>, Vec<usize>> = BTreeMap::new();
                for &v in cell {
                    let mut sig: Vec<(usize, Vec<usize>)> = self
                        .l
                        .incident(v)
                        .iter()
                        .map(|&f| {
                            let flat = self.l.flat(f);
                            let mut cs: Vec<usize> =
                                flat.iter().filter(|&&u| u != v).map(|&u| color[u]).collect();
                            cs.sort_unstable();
                            (flat.len(), cs)
                        })
                        .collect();
                    sig.sort();
                    groups.entry(sig).or_default().push(v);
                }
                changed |= groups.len() > 1;
                next.extend(groups.into_values());
            }
            *cells = next;
            if !changed {
                return;
            }
        }
    }

    fn encode(&self, pos: &[usize]) -> Encoding {
        let mut enc: Encoding = self
            .l
            .flats()
            .iter()
            .filter(|f| f.len() >= 3)
            .map(|f| {
                let mut g: Vec<usize> = f.iter().map(|&h| pos[h]).collect();
                g.sort_unstable();
                g
            })
            .collect();
        enc.sort();
        enc
    }

    fn leaf(&mut self, cells: &[Vec<usize>]) {
        let mut pos = vec![0; self.l.n()];
        for (i, cell) in cells.iter().enumerate() {
            pos[cell[0]] = i;
        }
        let enc = self.encode(&pos);
        match &self.best {
            None => self.best = Some((enc, pos)),
            Some((best, best_pos)) => match enc.cmp(best) {
                std::cmp::Ordering::Less => self.best = Some((enc, pos)),
                std::cmp::Ordering::Equal => {
                    let mut at = vec![0; self.l.n()];
                    for (v, &p) in best_pos.iter().enumerate() {
                        at[p] = v;
                    }
                    let gamma: Vec<usize> = pos.iter().map(|&p| at[p]).collect();
                    if gamma.iter().enumerate().any(|(i, &g)| i != g) {
                        self.autos.push(gamma);
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }

    /// Orbit representatives under the found automorphisms fixing `prefix`.
    fn orbit_roots(&self, prefix: &[usize]) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.l.n()).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for g in self.autos.iter().filter(|g| prefix.iter().all(|&p| g[p] == p)) {
            for (v, &w) in g.iter().enumerate() {
                let (a, b) = (root(&mut parent, v), root(&mut parent, w));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        (0..self.l.n()).map(|v| root(&mut parent, v)).collect()
    }

    fn explore(&mut self, mut cells: Vec<Vec<usize>>, prefix: &mut Vec<usize>) {
        self.refine(&mut cells);
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            self.leaf(&cells);
            return;
        };
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cells[target].clone() {
            let roots = self.orbit_roots(prefix);
            if explored.iter().any(|&u| roots[u] == roots[v]) {
                continue;
            }
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(vec![v]);
            child.push(cells[target].iter().copied().filter(|&u| u != v).collect());
            child.extend_from_slice(&cells[target + 1..]);
            prefix.push(v);
            self.explore(child, prefix);
            prefix.pop();
            explored.push(v);
        }
    }
}
