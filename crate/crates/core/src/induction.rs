//! Addition-deletion bookkeeping: inductive freeness, a bounded search for
//! recursive freeness, and the deletion-pair root check.
//!
//! In rank 3 the restriction `A^H` is always free with exponents
//! `{1, |A^H| - 1}`, so both inductive and recursive freeness reduce to
//! exponent arithmetic on characteristic polynomials once the starting
//! arrangement is known to be free.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{canonical_key, normalize, Arrangement, ArrangementError, IntersectionLattice};
use crate::freeness::{decide_freeness, FreenessVerdict};
use crate::linalg::{cross, dot};
use crate::scalars::{Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InductionError {
    #[error("deleting hyperplane {} leaves a non-essential arrangement", .0 + 1)]
    NotEssential(usize),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error("chain line {line}: {msg}")]
    Chain { line: usize, msg: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

fn check_deletion<F: Scalar>(a: &Arrangement<F>, h: usize) -> Result<Arrangement<F>, InductionError> {
    a.column(h)?;
    a.delete(h).map_err(|e| match e {
        ArrangementError::NotEssential => InductionError::NotEssential(h),
        other => other.into(),
    })
}

/// Whether `k - 1` is one of the two non-trivial exponents.
fn admits(exps: [u64; 3], k: usize) -> bool {
    let e = k as u64 - 1;
    exps[1] == e || exps[2] == e
}

/// Evidence that a free arrangement is not inductively free: no hyperplane
/// has a restriction of size `e + 1` for a non-trivial exponent `e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonIfWitness {
    pub exponents: [u64; 3],
    /// `|A^H|` for every hyperplane, by label.
    pub restriction_sizes: Vec<usize>,
}

pub fn non_if_witness(l: &IntersectionLattice, exponents: [u64; 3]) -> Option<NonIfWitness> {
    let sizes: Vec<usize> = (0..l.n()).map(|h| l.restriction_size(h)).collect();
    sizes
        .iter()
        .all(|&k| !admits(exponents, k))
        .then_some(NonIfWitness { exponents, restriction_sizes: sizes })
}

/// Runs the freeness decision and, for a free arrangement, checks every
/// restriction size against the exponents.
pub fn quick_non_if<F: Scalar>(a: &Arrangement<F>) -> Option<NonIfWitness> {
    match decide_freeness(a) {
        FreenessVerdict::Free { exponents, .. } => non_if_witness(&a.lattice(), exponents),
        _ => None,
    }
}

/// The three statements for `(A, A \ H, A^H)` with the exponents forced by
/// `k = |A^H|`: `A` free with `{1, k-1, n-k}`, `A'` free with
/// `{1, k-1, n-k-1}`, `A^H` free with `{1, k-1}` (always true in rank 3).
/// `None` marks an inconclusive freeness decision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleVerdict {
    pub h: usize,
    pub exps_a: Option<[u64; 3]>,
    pub exps_deletion: Option<[u64; 3]>,
    pub exps_restriction: [u64; 2],
    pub statements: [Option<bool>; 3],
    /// False only if two statements hold and the third fails.
    pub consistent: bool,
}

fn sorted3(mut e: [u64; 3]) -> [u64; 3] {
    e.sort_unstable();
    e
}

fn statement(v: &FreenessVerdict<impl Scalar>, expected: [u64; 3]) -> Option<bool> {
    match v {
        FreenessVerdict::Free { exponents, .. } => Some(*exponents == expected),
        FreenessVerdict::NotFree(_) => Some(false),
        FreenessVerdict::Inconclusive { .. } => None,
    }
}

pub fn triple_check<F: Scalar>(a: &Arrangement<F>, h: usize) -> Result<TripleVerdict, InductionError> {
    let del = check_deletion(a, h)?;
    let n = a.len() as u64;
    let k = a.lattice().restriction_size(h) as u64;
    let (va, vd) = rayon::join(|| decide_freeness(a), || decide_freeness(&del));
    let statements = [
        statement(&va, sorted3([1, k - 1, n - k])),
        statement(&vd, sorted3([1, k - 1, n - k - 1])),
        Some(true),
    ];
    let holding = statements.iter().filter(|s| **s == Some(true)).count();
    let failing = statements.iter().filter(|s| **s == Some(false)).count();
    Ok(TripleVerdict {
        h,
        exps_a: va.exponents(),
        exps_deletion: vd.exponents(),
        exps_restriction: [1, k - 1],
        statements,
        consistent: !(holding == 2 && failing == 1),
    })
}

/// One deletion in an inductive chain. `removed` is the label in the
/// arrangement the chain started from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IfStep {
    pub removed: usize,
    pub restriction_size: usize,
    pub exps_before: [u64; 3],
    pub exps_after: [u64; 3],
}

/// Deletions from the arrangement down to three hyperplanes in general
/// position; read backwards it is a sequence of admissible additions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IfCertificate {
    pub steps: Vec<IfStep>,
    pub base: Vec<usize>,
}

impl fmt::Display for IfCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base: Vec<String> = self.base.iter().map(|h| (h + 1).to_string()).collect();
        write!(f, "base {{{}}}", base.join(", "))?;
        for s in self.steps.iter().rev() {
            let [a, b, c] = s.exps_before;
            write!(f, "; add {} (|A^H| = {}) -> ({a}, {b}, {c})", s.removed + 1, s.restriction_size)?;
        }
        Ok(())
    }
}

/// Memoized inductive-freeness search over lattices, keyed by canonical key.
#[derive(Default)]
pub struct IfSearch {
    refuted: HashSet<String>,
}

impl IfSearch {
    pub fn new() -> Self {
        IfSearch::default()
    }

    pub fn run(&mut self, l: &IntersectionLattice) -> Option<IfCertificate> {
        let labels: Vec<usize> = (0..l.n()).collect();
        self.search(l, &labels)
    }

    fn search(&mut self, l: &IntersectionLattice, labels: &[usize]) -> Option<IfCertificate> {
        if !l.is_essential() {
            return None;
        }
        if l.n() == 3 {
            return Some(IfCertificate { steps: Vec::new(), base: labels.to_vec() });
        }
        let exps = l.char_poly().exponents()?;
        let key = canonical_key(l);
        if self.refuted.contains(&key) {
            return None;
        }
        for h in 0..l.n() {
            let k = l.restriction_size(h);
            if !admits(exps, k) {
                continue;
            }
            let sub = l.delete(h);
            let mut rest = labels.to_vec();
            rest.remove(h);
            if let Some(mut cert) = self.search(&sub, &rest) {
                let exps_after = sub.char_poly().exponents().expect("inductively free implies split");
                cert.steps.insert(0, IfStep { removed: labels[h], restriction_size: k, exps_before: exps, exps_after });
                return Some(cert);
            }
        }
        self.refuted.insert(key);
        None
    }
}

pub fn inductively_free_lattice(l: &IntersectionLattice) -> Option<IfCertificate> {
    IfSearch::new().run(l)
}

/// Inductive freeness depends only on the lattice in rank 3.
pub fn inductively_free<F: Scalar>(a: &Arrangement<F>) -> Option<IfCertificate> {
    inductively_free_lattice(&a.lattice())
}

/// New hyperplanes through at least two flats of `a` whose restriction
/// size lies in `targets`.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateSet<F> {
    pub candidates: Vec<[F; 3]>,
    /// Every admissible hyperplane is in `candidates`: a line through at
    /// most one flat has restriction size at least `n - (m* - 1)`, which
    /// exceeds every target.
    pub complete: bool,
    pub max_multiplicity: usize,
}

fn cmp_covector<F: Scalar>(a: &[F; 3], b: &[F; 3]) -> Ordering {
    a.iter().zip(b).map(|(x, y)| x.canonical_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

/// `|(A + H)^H| = n - sum of (m_X - 1)` over flats `X` of `A` on `H`.
fn restriction_after_adding<F: Scalar>(n: usize, points: &[([F; 3], usize)], h: &[F; 3]) -> usize {
    n - points
        .iter()
        .filter(|(p, _)| dot(h, p).is_zero())
        .map(|(_, m)| m - 1)
        .sum::<usize>()
}

fn flat_points<F: Scalar>(a: &Arrangement<F>, l: &IntersectionLattice) -> Vec<([F; 3], usize)> {
    l.flats()
        .iter()
        .map(|f| (cross(&a.columns()[f[0]], &a.columns()[f[1]]), f.len()))
        .collect()
}

pub fn candidate_additions<F: Scalar>(a: &Arrangement<F>, targets: &BTreeSet<usize>) -> CandidateSet<F> {
    let l = a.lattice();
    let n = a.len();
    let points = flat_points(a, &l);
    let mut lines: Vec<[F; 3]> = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let h = cross(&points[i].0, &points[j].0);
            if h.iter().all(Scalar::is_zero) {
                continue;
            }
            lines.push(normalize(&h));
        }
    }
    lines.sort_by(cmp_covector);
    lines.dedup();
    let candidates = lines
        .into_iter()
        .filter(|h| a.find(h).is_none())
        .filter(|h| targets.contains(&restriction_after_adding(n, &points, h)))
        .collect();
    let m_star = l.max_multiplicity();
    let max_target = targets.iter().max().copied().unwrap_or(0);
    CandidateSet {
        candidates,
        complete: n >= max_target && n - max_target > m_star - 1,
        max_multiplicity: m_star,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MoveKind {
    Add,
    Delete,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Move<F> {
    pub kind: MoveKind,
    pub covector: [F; 3],
}

impl<F: Scalar> fmt::Display for Move<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verb = match self.kind {
            MoveKind::Add => "add",
            MoveKind::Delete => "delete",
        };
        let [a, b, c] = &self.covector;
        write!(f, "{verb} {a}; {b}; {c}")
    }
}

/// One line per move: `add a; b; c` or `delete a; b; c`.
pub fn format_chain<F: Scalar>(moves: &[Move<F>]) -> String {
    moves.iter().map(|m| format!("{m}\n")).collect()
}

pub fn parse_chain<F: Scalar>(text: &str) -> Result<Vec<Move<F>>, InductionError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| InductionError::Chain { line: i + 1, msg: msg.to_string() };
        let (verb, rest) = line.split_once(' ').ok_or_else(|| err("expected `add` or `delete` and a covector"))?;
        let kind = match verb {
            "add" => MoveKind::Add,
            "delete" => MoveKind::Delete,
            _ => return Err(err("expected `add` or `delete`")),
        };
        let parts: Vec<&str> = rest.split(';').collect();
        if parts.len() != 3 {
            return Err(err("expected three `;`-separated entries"));
        }
        let mut cov = Vec::with_capacity(3);
        for p in parts {
            cov.push(F::parse_text(p.trim())?);
        }
        let covector: [F; 3] = cov.try_into().expect("three entries");
        out.push(Move { kind, covector });
    }
    Ok(out)
}

/// Summary of one expansion of the search frontier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expansion {
    pub n: usize,
    pub exponents: [u64; 3],
    pub max_target: usize,
    pub max_multiplicity: usize,
    pub admissible_additions: usize,
    pub admissible_deletions: usize,
    pub complete: bool,
}

impl Expansion {
    /// The completeness inequality, recomputed from the recorded numbers.
    pub fn inequality_holds(&self) -> bool {
        self.n >= self.max_target && self.n - self.max_target > self.max_multiplicity - 1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RfVerdict<F> {
    /// Moves from the input to an inductively free arrangement.
    Rf { moves: Vec<Move<F>>, certificate: IfCertificate },
    NotRf,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RfSearchReport<F> {
    pub verdict: RfVerdict<F>,
    pub explored: usize,
    pub expansions: Vec<Expansion>,
    /// Some admissible addition would exceed `max_n`.
    pub bound_hit: bool,
    pub state_limit_hit: bool,
    /// Set when the input itself is not free, which already rules out RF.
    pub not_free: bool,
    pub max_n: usize,
}

impl<F> RfSearchReport<F> {
    /// True when every expansion satisfied the completeness inequality.
    pub fn sound(&self) -> bool {
        self.not_free || self.expansions.iter().all(Expansion::inequality_holds)
    }

    pub fn is_not_rf(&self) -> bool {
        matches!(self.verdict, RfVerdict::NotRf)
    }
}

struct RfNode<F> {
    arr: Arrangement<F>,
    exps: [u64; 3],
    path: Vec<Move<F>>,
}

/// Breadth-first search through free arrangements connected to the input
/// by admissible additions and deletions. Reaching an inductively free
/// arrangement proves recursive freeness. `NotRf` is reported only when
/// the reachable set within `max_n` hyperplanes was exhausted, no
/// admissible addition was cut off by `max_n`, and every candidate set was
/// provably complete.
pub fn recursively_free<F: Scalar>(a: &Arrangement<F>, max_n: usize, max_states: usize) -> RfSearchReport<F> {
    let mut report = RfSearchReport {
        verdict: RfVerdict::Unknown,
        explored: 0,
        expansions: Vec::new(),
        bound_hit: false,
        state_limit_hit: false,
        not_free: false,
        max_n,
    };
    let exps = match decide_freeness(a) {
        FreenessVerdict::Free { exponents, .. } => exponents,
        FreenessVerdict::NotFree(_) => {
            report.not_free = true;
            report.verdict = RfVerdict::NotRf;
            return report;
        }
        FreenessVerdict::Inconclusive { .. } => return report,
    };
    let key = |s: &Arrangement<F>| format!("{}#{}", canonical_key(&s.lattice()), s.normalized_key());
    let mut seen: HashSet<String> = HashSet::from([key(a)]);
    let mut queue = VecDeque::from([RfNode { arr: a.clone(), exps, path: Vec::new() }]);
    let mut if_search = IfSearch::new();
    while let Some(node) = queue.pop_front() {
        if report.explored == max_states {
            report.state_limit_hit = true;
            return report;
        }
        report.explored += 1;
        let l = node.arr.lattice();
        if let Some(certificate) = if_search.run(&l) {
            report.verdict = RfVerdict::Rf { moves: node.path, certificate };
            return report;
        }
        let n = node.arr.len();
        let [_, e2, e3] = node.exps;
        let targets: BTreeSet<usize> = [e2 as usize + 1, e3 as usize + 1].into();
        let cands = candidate_additions(&node.arr, &targets);
        let deletions: Vec<usize> = (0..n).filter(|&h| admits(node.exps, l.restriction_size(h))).collect();
        report.expansions.push(Expansion {
            n,
            exponents: node.exps,
            max_target: *targets.last().expect("two targets"),
            max_multiplicity: cands.max_multiplicity,
            admissible_additions: cands.candidates.len(),
            admissible_deletions: deletions.len(),
            complete: cands.complete,
        });
        // additions before deletions
        if !cands.candidates.is_empty() && n >= max_n {
            report.bound_hit = true;
        } else {
            for c in cands.candidates {
                let next = node.arr.add(c.clone()).expect("candidate is a new hyperplane");
                let k = next.lattice().restriction_size(n);
                let grown = if k as u64 - 1 == e2 { sorted3([1, e2, e3 + 1]) } else { sorted3([1, e2 + 1, e3]) };
                debug_assert_eq!(next.char_poly().exponents(), Some(grown));
                if seen.insert(key(&next)) {
                    let mut path = node.path.clone();
                    path.push(Move { kind: MoveKind::Add, covector: c });
                    queue.push_back(RfNode { arr: next, exps: grown, path });
                }
            }
        }
        for h in deletions {
            let Ok(next) = node.arr.delete(h) else { continue };
            let Some(shrunk) = next.char_poly().exponents() else {
                unreachable!("deletion with an admissible restriction keeps chi split")
            };
            if seen.insert(key(&next)) {
                let mut path = node.path.clone();
                path.push(Move { kind: MoveKind::Delete, covector: node.arr.columns()[h].clone() });
                queue.push_back(RfNode { arr: next, exps: shrunk, path });
            }
        }
    }
    if !report.bound_hit && report.sound() {
        report.verdict = RfVerdict::NotRf;
    }
    report
}

/// Re-checks a chain of moves from `a`: each move must satisfy the
/// exponent condition for the arrangement it leaves, and the final
/// arrangement must be inductively free.
pub fn replay_chain<F: Scalar>(a: &Arrangement<F>, moves: &[Move<F>]) -> Result<IfCertificate, String> {
    let exps = decide_freeness(a).exponents().ok_or("starting arrangement is not certified free")?;
    let mut cur = a.clone();
    let mut cur_exps = exps;
    for (i, m) in moves.iter().enumerate() {
        let step = i + 1;
        let (next, k) = match m.kind {
            MoveKind::Add => {
                if cur.find(&m.covector).is_some() {
                    return Err(format!("move {step}: hyperplane already present"));
                }
                let next = cur.add(m.covector.clone()).map_err(|e| format!("move {step}: {e}"))?;
                let k = next.lattice().restriction_size(next.len() - 1);
                (next, k)
            }
            MoveKind::Delete => {
                let h = cur.find(&m.covector).ok_or(format!("move {step}: hyperplane not present"))?;
                let k = cur.lattice().restriction_size(h);
                (cur.delete(h).map_err(|e| format!("move {step}: {e}"))?, k)
            }
        };
        if !admits(cur_exps, k) {
            return Err(format!("move {step}: restriction size {k} does not match exponents {cur_exps:?}"));
        }
        cur_exps = next
            .char_poly()
            .exponents()
            .ok_or(format!("move {step}: characteristic polynomial does not split"))?;
        cur = next;
    }
    inductively_free(&cur).ok_or_else(|| "final arrangement is not inductively free".to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AbeOutcome {
    Consistent,
    Violated,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbeCheck {
    pub h: usize,
    pub common_root: bool,
    pub outcome: AbeOutcome,
    pub note: String,
}

/// If `chi(A)/(x-1)` and `chi(A \ H)/(x-1)` share a root, both arrangements
/// must be free.
pub fn abe_pair_check<F: Scalar>(a: &Arrangement<F>, h: usize) -> Result<AbeCheck, InductionError> {
    let del = check_deletion(a, h)?;
    let g = a.char_poly().reduced().gcd(&del.char_poly().reduced());
    let common_root = !g.is_constant();
    if !common_root {
        return Ok(AbeCheck { h, common_root, outcome: AbeOutcome::NotApplicable, note: "no common root".into() });
    }
    let (va, vd) = rayon::join(|| decide_freeness(a), || decide_freeness(&del));
    let (outcome, note) = match (&va, &vd) {
        (FreenessVerdict::Free { .. }, FreenessVerdict::Free { .. }) => (AbeOutcome::Consistent, "both free".to_string()),
        (FreenessVerdict::NotFree(r), _) | (_, FreenessVerdict::NotFree(r)) => {
            (AbeOutcome::Violated, format!("common root but a member is not free: {r}"))
        }
        _ => (AbeOutcome::NotApplicable, "freeness inconclusive".to_string()),
    };
    Ok(AbeCheck { h, common_root, outcome, note })
}

/// Deletion-restriction identity `chi(A) = chi(A') - chi(A^H)` in rank 3.
pub fn deletion_restriction_holds(l: &IntersectionLattice, h: usize) -> bool {
    let chi = l.char_poly().coeffs();
    let chi_del = l.delete(h).char_poly().coeffs();
    let r = crate::arrangement::rank2_char_poly(l.restriction_size(h));
    (0..4).all(|i| chi[i] == chi_del[i] - r.get(i).copied().unwrap_or(0))
}

/// Restriction sizes grouped for display.
pub fn restriction_histogram(l: &IntersectionLattice) -> Vec<(usize, usize)> {
    let mut m: HashMap<usize, usize> = HashMap::new();
    for h in 0..l.n() {
        *m.entry(l.restriction_size(h)).or_default() += 1;
    }
    let mut v: Vec<(usize, usize)> = m.into_iter().collect();
    v.sort_unstable();
    v
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

    fn near_pencil5() -> Arrangement<BigRat> {
        arr(&[[1, 0, 0], [0, 1, 0], [1, -1, 0], [1, 1, 0], [0, 0, 1]])
    }

    #[test]
    fn boolean_is_inductively_free() {
        let cert = inductively_free(&boolean()).unwrap();
        assert!(cert.steps.is_empty());
        assert_eq!(cert.base, vec![0, 1, 2]);
        assert_eq!(quick_non_if(&boolean()), None);
    }

    #[test]
    fn near_pencil_chain() {
        let cert = inductively_free(&near_pencil5()).unwrap();
        assert_eq!(cert.steps.len(), 2);
        assert_eq!(cert.steps[0].exps_before, [1, 1, 3]);
        assert_eq!(cert.steps[1].exps_before, [1, 1, 2]);
        let report = recursively_free(&near_pencil5(), 6, 100);
        assert!(matches!(report.verdict, RfVerdict::Rf { ref moves, .. } if moves.is_empty()));
    }

    #[test]
    fn near_pencil_triple() {
        let t = triple_check(&near_pencil5(), 3).unwrap();
        assert_eq!(t.exps_a, Some([1, 1, 3]));
        assert_eq!(t.exps_deletion, Some([1, 1, 2]));
        assert_eq!(t.exps_restriction, [1, 1]);
        assert_eq!(t.statements, [Some(true), Some(true), Some(true)]);
        assert!(t.consistent);
        assert_eq!(triple_check(&near_pencil5(), 4), Err(InductionError::NotEssential(4)));
    }

    #[test]
    fn generic_four_lines() {
        let a = arr(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]);
        assert_eq!(inductively_free(&a), None);
        let t = triple_check(&a, 3).unwrap();
        assert_eq!(t.statements, [Some(false), Some(false), Some(true)]);
        assert!(t.consistent);
        let abe = abe_pair_check(&a, 3).unwrap();
        assert_eq!(abe.outcome, AbeOutcome::NotApplicable);
        let rf = recursively_free(&a, 6, 100);
        assert!(rf.not_free && rf.is_not_rf());
        assert!((0..4).all(|h| deletion_restriction_holds(&a.lattice(), h)));
    }

    #[test]
    fn candidates_for_boolean() {
        let a = boolean();
        let two = candidate_additions(&a, &BTreeSet::from([2]));
        // the three points pairwise span the coordinate lines themselves
        assert!(two.candidates.is_empty());
        assert!(!two.complete);
        let generic = candidate_additions(&a, &BTreeSet::from([3]));
        assert!(!generic.complete);
    }

    #[test]
    fn candidates_for_a3() {
        // braid arrangement: adding a line through two double points
        let a = arr(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, -1, 0], [1, 0, -1], [0, 1, -1]]);
        let c = candidate_additions(&a, &BTreeSet::from([3, 4]));
        assert_eq!(c.max_multiplicity, 3);
        assert!(!c.candidates.is_empty());
        let c4 = candidate_additions(&a, &BTreeSet::from([3]));
        assert!(c4.complete);
        for h in &c4.candidates {
            let b = a.add(h.clone()).unwrap();
            assert_eq!(b.lattice().restriction_size(6), 3);
        }
    }

    #[test]
    fn chain_text_round_trips() {
        let moves = vec![
            Move { kind: MoveKind::Add, covector: [1, -1, 2].map(|x| BigRat::from_integer(x.into())) },
            Move { kind: MoveKind::Delete, covector: [0, 1, 0].map(|x| BigRat::from_integer(x.into())) },
        ];
        let text = format_chain(&moves);
        assert_eq!(text, "add 1; -1; 2\ndelete 0; 1; 0\n");
        assert_eq!(parse_chain::<BigRat>(&text).unwrap(), moves);
        assert!(matches!(parse_chain::<BigRat>("grow 1; 2; 3"), Err(InductionError::Chain { line: 1, .. })));
    }

    #[test]
    fn replay_checks_each_move() {
        let rat = |c: [i64; 3]| c.map(|x| BigRat::from_integer(x.into()));
        let a = near_pencil5();
        let del = |c| Move { kind: MoveKind::Delete, covector: rat(c) };
        assert!(replay_chain(&a, &[]).is_ok());
        assert!(replay_chain(&a, &[del([1, 1, 0])]).is_ok());
        assert!(replay_chain(&a, &[del([0, 0, 1])]).is_err());
        assert!(replay_chain(&a, &[del([5, 7, 11])]).is_err());
        // through no flat: restriction size 5, but 4 is not an exponent
        let generic = Move { kind: MoveKind::Add, covector: rat([1, 2, 3]) };
        assert!(replay_chain(&a, &[generic]).is_err());
        // through the double point (1, -1, 0): restriction size 4
        let through = Move { kind: MoveKind::Add, covector: rat([1, 1, 1]) };
        assert!(replay_chain(&a, &[through]).is_ok());
    }
}
