use geoext::canon::{canonical_form, canonicalize, is_isomorphic};
use geoext::error::Error;
use geoext::fixtures;
use geoext::verify::{enumerate_lattices, enumerate_semimodular};
use geoext::{FiniteLattice, FinitePoset};
use proptest::prelude::*;
use std::sync::OnceLock;

fn of_size(n: usize) -> &'static [FiniteLattice] {
    static ALL: OnceLock<Vec<FiniteLattice>> = OnceLock::new();
    let all = ALL.get_or_init(|| enumerate_lattices(8));
    let start = all.iter().position(|l| l.n() == n).unwrap();
    let end = all.iter().rposition(|l| l.n() == n).unwrap();
    &all[start..=end]
}

fn n5() -> FiniteLattice {
    FiniteLattice::new(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap()
}

fn b2() -> FiniteLattice {
    FiniteLattice::new(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
}

#[test]
fn build_examples() {
    let one = FiniteLattice::new(1, &[]).unwrap();
    assert_eq!(one.length(), 0);
    let m3 = fixtures::lattice("FIX-M3").unwrap();
    assert_eq!(m3.n(), 5);
    assert_eq!(m3.length(), 2);
    let err = FiniteLattice::new(4, &[(0, 1), (0, 2), (1, 3)]).unwrap_err();
    assert!(matches!(err, Error::NotALattice { a: 1, b: 2, missing: "join" }));
}

#[test]
fn lengths() {
    let l7 = fixtures::lattice("FIX-L7").unwrap();
    assert_eq!(l7.length(), 3);
    let profile = l7.height_profile();
    assert_eq!(profile.heights[l7.bottom()], 0);
    assert_eq!(profile.heights[l7.top()], profile.length);
    for k in 0..6 {
        let covers: Vec<_> = (0..k).map(|i| (i, i + 1)).collect();
        assert_eq!(FiniteLattice::new(k + 1, &covers).unwrap().length(), k);
    }
}

#[test]
fn atoms_examples() {
    let fig1 = fixtures::poset("FIX-FIG1").unwrap();
    // 0; a b c; x y; 1
    assert_eq!(fig1.atoms_below(4), vec![1, 2]);
    assert_eq!(fig1.atoms_below(5), vec![1, 2]);
    assert_eq!(fig1.atoms_below(6), vec![1, 2, 3]);
    assert!(fig1.atoms_below(fig1.bottom()).is_empty());
    let l7 = fixtures::lattice("FIX-L7").unwrap();
    assert_eq!(l7.atoms(), vec![1]);
    assert_eq!(l7.atoms_below(2), vec![1]);
}

#[test]
fn join_irreducible_examples() {
    assert_eq!(fixtures::lattice("FIX-L7").unwrap().join_irreducibles(), vec![1, 2, 3, 4, 5]);
    assert_eq!(b2().join_irreducibles(), b2().atoms());
    assert_eq!(fixtures::lattice("FIX-L5").unwrap().join_irreducibles(), vec![1, 2, 3, 4]);
}

#[test]
fn semimodularity_examples() {
    assert!(fixtures::lattice("FIX-M3").unwrap().is_semimodular());
    let (a, b, c) = n5().semimodularity_violation().unwrap();
    let l = n5();
    assert!(l.is_cover(a, b));
    assert!(!l.is_cover(l.join(a, c), l.join(b, c)) && l.join(a, c) != l.join(b, c));
    assert!(fixtures::lattice("FIX-L7").unwrap().is_semimodular());
}

#[test]
fn atomistic_examples() {
    assert!(!fixtures::poset("FIX-FIG1").unwrap().is_atomistic());
    assert!(fixtures::poset("FIX-FIG2").unwrap().is_atomistic());
    for u in 1..=4 {
        let covers: Vec<(usize, usize)> = (0..1usize << u)
            .flat_map(|x| (0..u).filter(move |&i| x >> i & 1 == 0).map(move |i| (x, x | 1 << i)))
            .collect();
        let boolean = FiniteLattice::new(1 << u, &covers).unwrap();
        assert!(boolean.is_atomistic_lattice());
        assert!(boolean.is_geometric());
    }
}

#[test]
fn geometric_examples() {
    assert!(fixtures::lattice("FIX-M3").unwrap().is_geometric());
    assert!(!fixtures::family("FIX-S10").unwrap().to_lattice().unwrap().is_geometric());
    assert!(fixtures::family("FIX-FAM16").unwrap().to_lattice().unwrap().is_geometric());
}

#[test]
fn isomorphism_examples() {
    let fig2 = fixtures::poset("FIX-FIG2").unwrap();
    let fig3 = fixtures::family("FIX-FIG3").unwrap().to_poset().unwrap();
    assert!(is_isomorphic(&fig2, &fig3));
    let m3 = fixtures::lattice("FIX-M3").unwrap();
    assert!(!is_isomorphic(m3.poset(), b2().poset()));
    assert!(!is_isomorphic(m3.poset(), n5().poset()));
}

#[test]
fn frozen_lattice_counts() {
    // per-size counts from tests/oracles/lattice_counts.py
    let lattices = [1, 1, 1, 2, 5, 15, 53, 222];
    let semimodular = [1, 1, 1, 2, 4, 8, 17, 38];
    let all = enumerate_lattices(8);
    let semi = enumerate_semimodular(8);
    for n in 1..=8 {
        assert_eq!(all.iter().filter(|l| l.n() == n).count(), lattices[n - 1], "lattices with {n} elements");
        assert_eq!(semi.iter().filter(|l| l.n() == n).count(), semimodular[n - 1], "semimodular with {n}");
    }
}

#[test]
fn small_lattice_stream_contents() {
    let five = enumerate_lattices(5);
    let semi5 = enumerate_semimodular(5);
    let m3 = fixtures::lattice("FIX-M3").unwrap();
    assert!(five.iter().any(|l| is_isomorphic(l.poset(), m3.poset())));
    assert!(five.iter().any(|l| is_isomorphic(l.poset(), n5().poset())));
    assert!(semi5.iter().any(|l| is_isomorphic(l.poset(), m3.poset())));
    assert!(!semi5.iter().any(|l| is_isomorphic(l.poset(), n5().poset())));
    assert_eq!(enumerate_semimodular(2).len(), 2);
    let l7 = fixtures::lattice("FIX-L7").unwrap();
    assert!(enumerate_semimodular(7).iter().any(|l| is_isomorphic(l.poset(), l7.poset())));
}

fn check_lattice_axioms(l: &FiniteLattice, triples: bool) {
    let n = l.n();
    for a in 0..n {
        assert_eq!(l.meet(a, a), a);
        assert_eq!(l.join(a, a), a);
        for b in 0..n {
            assert_eq!(l.meet(a, b), l.meet(b, a));
            assert_eq!(l.join(a, b), l.join(b, a));
            assert_eq!(l.join(a, l.meet(a, b)), a);
            assert_eq!(l.meet(a, l.join(a, b)), a);
            if triples {
                for c in 0..n {
                    assert_eq!(l.meet(a, l.meet(b, c)), l.meet(l.meet(a, b), c));
                    assert_eq!(l.join(a, l.join(b, c)), l.join(l.join(a, b), c));
                }
            }
        }
    }
}

#[test]
fn lattice_axioms_exhaustive_up_to_six() {
    for l in enumerate_lattices(6) {
        check_lattice_axioms(&l, true);
    }
}

fn maximal_chain_lengths(l: &FiniteLattice, from: usize, to: usize, out: &mut Vec<usize>, depth: usize) {
    if from == to {
        out.push(depth);
        return;
    }
    for &y in l.upper_covers(from) {
        if l.leq(y, to) {
            maximal_chain_lengths(l, y, to, out, depth + 1);
        }
    }
}

#[test]
fn jordan_hoelder_and_join_irreducible_bound() {
    for l in enumerate_semimodular(8) {
        for x in l.elements() {
            let mut lengths = Vec::new();
            maximal_chain_lengths(&l, l.bottom(), x, &mut lengths, 0);
            assert!(lengths.iter().all(|&k| k == l.height(x)), "{:?}", l.covers());
        }
        assert!(l.join_irreducibles().len() >= l.length());
        assert_eq!(l.satisfies_birkhoff(), l.is_semimodular());
    }
}

#[test]
fn predicate_cross_checks() {
    for l in enumerate_lattices(8) {
        assert_eq!(l.is_atomistic_lattice(), l.is_atomistic_by_joins(), "{:?}", l.covers());
        assert_eq!(l.satisfies_birkhoff(), l.is_semimodular(), "{:?}", l.covers());
        if l.is_geometric() {
            assert!(l.is_semimodular() && l.is_atomistic_lattice());
        }
        for (x, y) in l.covers() {
            assert!(l.height(*x) < l.height(*y));
        }
    }
}

fn relabel(p: &FinitePoset, perm: &[usize]) -> FinitePoset {
    let covers: Vec<_> = p.covers().iter().map(|&(a, b)| (perm[a], perm[b])).collect();
    FinitePoset::new(p.n(), &covers).unwrap()
}

proptest! {
    #[test]
    fn sampled_axioms_on_eight(index in 0usize..222, a in 0usize..8, b in 0usize..8, c in 0usize..8) {
        let eights = of_size(8);
        let l = &eights[index % eights.len()];
        prop_assert_eq!(l.meet(a, l.meet(b, c)), l.meet(l.meet(a, b), c));
        prop_assert_eq!(l.join(a, l.join(b, c)), l.join(l.join(a, b), c));
        prop_assert_eq!(l.join(a, l.meet(a, b)), a);
    }

    #[test]
    fn canonical_form_is_relabelling_invariant(index in 0usize..53, perm in Just((0..7).collect::<Vec<usize>>()).prop_shuffle()) {
        let sevens = of_size(7);
        let l = &sevens[index % sevens.len()];
        let q = relabel(l.poset(), &perm);
        prop_assert_eq!(canonical_form(l.poset()), canonical_form(&q));
        let c = canonicalize(&q);
        let again = FinitePoset::new(c.form.n, &c.form.covers).unwrap();
        prop_assert_eq!(canonical_form(&again), c.form.clone());
        for &(a, b) in q.covers() {
            prop_assert!(c.form.covers.contains(&(c.relabel[a], c.relabel[b])));
        }
    }
}
