use freearr::arrangement::aut_group;
use freearr::moduli::{DegeneracyTag, Family};
use freearr::scalars::{BigRat, IntPoly};

fn q(n: i64, d: i64) -> BigRat {
    BigRat::new(n.into(), d.into())
}

#[test]
fn thirteen_generic() {
    let f = Family::paper13();
    let l = f.generic_lattice();
    assert_eq!(l.char_poly().to_string(), "(x-1)(x-6)^2");
    assert_eq!(aut_group(l).order, 18);
}

#[test]
fn thirteen_exceptions() {
    let f = Family::paper13();
    let rep = f.degeneracy_set();
    let vals: Vec<(BigRat, DegeneracyTag)> = rep.rational.iter().map(|e| (e.value.clone(), e.tag)).collect();
    assert_eq!(
        vals,
        vec![
            (q(-1, 1), DegeneracyTag::LatticeChanges),
            (q(0, 1), DegeneracyTag::CountDrops),
            (q(1, 2), DegeneracyTag::LatticeChanges),
            (q(1, 1), DegeneracyTag::CountDrops),
            (q(2, 1), DegeneracyTag::LatticeChanges),
        ]
    );
    assert_eq!(rep.quadratic.len(), 1);
    assert_eq!(rep.quadratic[0].factor, IntPoly::from_i64s(&[1, -1, 1]));
    assert_eq!(rep.quadratic[0].tag, DegeneracyTag::CountDrops);
    assert!(rep.unresolved.is_empty());
    for v in [q(-1, 1), q(1, 2), q(2, 1)] {
        let a = f.specialize(&v).arrangement.unwrap();
        assert_eq!(a.char_poly().exponents(), Some([1, 5, 7]), "at {v}");
    }
}

#[test]
fn fifteen_generic_and_exceptions() {
    // values cross-checked by factoring every minor with a CAS
    let f = Family::paper15();
    let l = f.generic_lattice();
    assert_eq!(l.char_poly().exponents(), Some([1, 7, 7]));
    assert_eq!(aut_group(l).order, 48);
    let rep = f.degeneracy_set();
    let vals: Vec<(BigRat, DegeneracyTag)> = rep.rational.iter().map(|e| (e.value.clone(), e.tag)).collect();
    assert_eq!(
        vals,
        vec![
            (q(0, 1), DegeneracyTag::CountDrops),
            (q(1, 2), DegeneracyTag::CountDrops),
            (q(1, 1), DegeneracyTag::CountDrops),
        ]
    );
    let quads: Vec<(IntPoly, DegeneracyTag)> = rep.quadratic.iter().map(|e| (e.factor.clone(), e.tag)).collect();
    assert_eq!(
        quads,
        vec![
            (IntPoly::from_i64s(&[-1, 1, 1]), DegeneracyTag::LatticeChanges),
            (IntPoly::from_i64s(&[1, -3, 1]), DegeneracyTag::LatticeChanges),
        ]
    );
    assert!(rep.unresolved.is_empty());
}


mod freeness {
    use super::*;
    use freearr::freeness::{decide_freeness, derivation_space, FreenessVerdict};
    use freearr::moduli::quadratic_root;

    #[test]
    fn thirteen_at_three() {
        let a = Family::paper13().specialize(&q(3, 1)).arrangement.unwrap();
        assert_eq!(derivation_space(&a, 6).dim(), 23);
        let v = decide_freeness(&a);
        assert_eq!(v.exponents(), Some([1, 6, 6]));
        let FreenessVerdict::Free { certificate, .. } = v else { unreachable!() };
        assert!(certificate.verify(&a));
    }

    #[test]
    fn thirteen_at_two() {
        let a = Family::paper13().specialize(&q(2, 1)).arrangement.unwrap();
        assert_eq!(decide_freeness(&a).exponents(), Some([1, 5, 7]));
    }

    #[test]
    fn fifteen_at_three() {
        let a = Family::paper15().specialize(&q(3, 1)).arrangement.unwrap();
        assert_eq!(decide_freeness(&a).exponents(), Some([1, 7, 7]));
    }

    #[test]
    fn fifteen_at_quadratic_roots() {
        for coeffs in [[-1, 1, 1], [1, -3, 1]] {
            let root = quadratic_root(&IntPoly::from_i64s(&coeffs));
            let a = Family::paper15().specialize(&root).arrangement.unwrap();
            println!("{root}: {}", a.char_poly());
            assert_eq!(decide_freeness(&a).exponents(), Some([1, 5, 9]), "at {root}");
        }
    }
}

mod induction {
    use super::*;
    use freearr::induction::{abe_pair_check, inductively_free, quick_non_if, recursively_free, AbeOutcome};

    fn check(f: Family, max_n: usize, forbidden: usize) {
        let a = f.specialize(&q(3, 1)).arrangement.unwrap();
        let w = quick_non_if(&a).expect("lemma applies");
        assert!(w.restriction_sizes.iter().all(|&k| k != forbidden));
        assert_eq!(inductively_free(&a), None);
        let r = recursively_free(&a, max_n, 10_000);
        println!("explored {} expansions {:?}", r.explored, r.expansions);
        assert!(r.is_not_rf());
        assert!(r.sound());
        assert!(!r.bound_hit);
        for h in [0, 5] {
            assert_ne!(abe_pair_check(&a, h).unwrap().outcome, AbeOutcome::Violated);
        }
    }

    #[test]
    fn thirteen() {
        check(Family::paper13(), 14, 7);
    }

    #[test]
    fn fifteen() {
        check(Family::paper15(), 16, 8);
    }
}

mod moduli {
    use super::*;
    use freearr::arrangement::lattice_iso;

    fn multiplicities(l: &freearr::arrangement::IntersectionLattice) -> Vec<usize> {
        let mut m: Vec<usize> = l.flats().iter().map(Vec::len).collect();
        m.sort_unstable();
        m
    }

    fn samples(report: &freearr::moduli::DegeneracyReport) -> Vec<BigRat> {
        let bad = report.rational_values();
        (-12i64..=12)
            .flat_map(|n| [q(n, 1), q(n, 3), q(n, 5)])
            .filter(|v| !bad.contains(v))
            .take(20)
            .collect()
    }

    #[test]
    fn sampling_consistency() {
        for f in [Family::paper13(), Family::paper15()] {
            let report = f.degeneracy_set();
            let generic = f.generic_lattice();
            let profile = multiplicities(generic);
            let values = samples(&report);
            assert_eq!(values.len(), 20);
            for v in values {
                assert!(f.vl_membership(generic, &v), "{} at {v}", f.name());
                let l = f.specialize(&v).arrangement.unwrap().lattice();
                assert!(lattice_iso(&l, generic).is_some());
                assert_eq!(multiplicities(&l), profile);
            }
            for e in &report.rational {
                assert!(!f.vl_membership(generic, &e.value));
                assert_eq!(f.specialize(&e.value).tag(f.len()), Some(e.tag));
            }
            for e in &report.quadratic {
                assert!(!f.vl_membership(generic, &e.root));
                assert_eq!(f.specialize(&e.root).tag(f.len()), Some(e.tag));
                assert_eq!(f.specialize(&e.root.conjugate()).tag(f.len()), Some(e.tag));
            }
        }
    }

    #[test]
    fn thirteen_restriction_lists() {
        let f = Family::paper13();
        let l = f.generic_lattice();
        assert_eq!(l.flats().len(), 30);
        assert!((0..13).all(|h| l.restriction_size(h) == 6));
        assert!(f.vl_membership(l, &q(3, 1)));
        assert!(!f.vl_membership(l, &q(2, 1)));
        assert!(!f.vl_membership(l, &q(0, 1)));
    }
}
