use std::collections::BTreeMap;

use geoext::algo1::{enumerate_outputs, geometric_outputs, SearchOptions};
use geoext::bitset::AtomSet;
use geoext::canon::is_isomorphic;
use geoext::error::Error;
use geoext::extend::{h_set, reduce_geometric, required_parents, standard_forms, StandardForm};
use geoext::fixtures;
use geoext::verify::{enumerate_semimodular, is_geometric_extension};
use geoext::SetFamily;

fn sorted_covers(l: &geoext::FiniteLattice) -> Vec<(usize, usize)> {
    let mut c = l.covers().to_vec();
    c.sort_unstable();
    c
}

#[test]
fn minimal_forms_match_fixtures() {
    let l5 = fixtures::lattice("FIX-L5").unwrap();
    let p = StandardForm::minimal(&l5).unwrap();
    assert_eq!(sorted_covers(p.lattice()), sorted_covers(&fixtures::lattice("FIX-P2").unwrap()));
    assert_eq!(p.representation().unwrap(), fixtures::family("FIX-S6").unwrap());
    assert_eq!(p.embedded().unwrap(), fixtures::family("FIX-T6").unwrap());

    let l7 = fixtures::lattice("FIX-L7").unwrap();
    let p = StandardForm::minimal(&l7).unwrap();
    assert!(is_isomorphic(p.lattice(), &fixtures::lattice("FIX-P10").unwrap()));
    assert_eq!(p.inserted(), vec![(7, 2), (8, 3), (9, 4), (10, 5)]);
    assert_eq!(h_set(&l7), vec![2, 3, 4, 5, 6]);
    assert_eq!(required_parents(&l7), vec![2, 3, 4, 5]);
}

#[test]
fn fixture_documents_rebuild_their_forms() {
    let l5 = fixtures::lattice("FIX-L5").unwrap();
    for (name, delta) in [("FIX-P2", BTreeMap::from([(2, 1), (3, 1), (4, 1)])), ("FIX-P3", BTreeMap::from([(2, 1), (3, 1), (4, 2)]))] {
        let doc = fixtures::lattice_doc(name).unwrap();
        let inserted = doc.inserted.clone().unwrap();
        let form = StandardForm::new(&l5, &delta).unwrap();
        assert_eq!(form.inserted().into_iter().collect::<BTreeMap<_, _>>(), inserted);
        assert_eq!(sorted_covers(form.lattice()), sorted_covers(&doc.lattice().unwrap()));
    }
}

#[test]
fn invalid_forms_rejected() {
    let l5 = fixtures::lattice("FIX-L5").unwrap();
    let below_atom = BTreeMap::from([(1, 1), (2, 1), (3, 1), (4, 1)]);
    assert!(matches!(StandardForm::new(&l5, &below_atom), Err(Error::MalformedFamily(_))));
    let missing = BTreeMap::from([(2, 1), (3, 1)]);
    assert!(matches!(StandardForm::new(&l5, &missing), Err(Error::MalformedFamily(_))));
    let n5 = geoext::FiniteLattice::new(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap();
    assert!(matches!(StandardForm::minimal(&n5), Err(Error::NotSemimodular { .. })));
    assert!(matches!(standard_forms(&n5, 1), Err(Error::NotSemimodular { .. })));
}

#[test]
fn budget_one_forms_include_p3() {
    let l5 = fixtures::lattice("FIX-L5").unwrap();
    let forms = standard_forms(&l5, 1).unwrap();
    let p2 = fixtures::lattice("FIX-P2").unwrap();
    let p3 = fixtures::lattice("FIX-P3").unwrap();
    assert!(forms.iter().any(|f| is_isomorphic(f.lattice(), &p2)));
    assert!(forms.iter().any(|f| is_isomorphic(f.lattice(), &p3)));
    assert_eq!(forms.iter().filter(|f| f.inserted_count() == 4).count(), 4);
}

#[test]
fn form_invariants() {
    for l in enumerate_semimodular(7) {
        for form in standard_forms(&l, 1).unwrap() {
            let p = form.lattice();
            assert!(p.is_atomistic_lattice(), "{:?}", l.covers());
            assert_eq!(p.length(), l.length());
            let t = form.embedded().unwrap();
            assert_eq!(t.len(), l.n());
            assert!(is_isomorphic(&t.to_lattice().unwrap(), &l));
            let sp = form.representation().unwrap();
            assert!(t.is_subfamily_of(&sp));
            assert_eq!(sp.universe(), form.atom_count());
            let input = form.search_input().unwrap();
            assert_eq!(input.sp, sp);
            assert_eq!(input.embedded, t);
            assert_eq!(input.length, l.length());
        }
    }
}

#[test]
fn remove_specific_p3_to_p2() {
    let l5 = fixtures::lattice("FIX-L5").unwrap();
    let p3 = StandardForm::new(&l5, &BTreeMap::from([(2, 1), (3, 1), (4, 2)])).unwrap();
    assert_eq!(p3.removable(), vec![8, 9]);
    assert_eq!(p3.label_of(9), Some(5));
    let (p2, t) = p3.remove_specific(9).unwrap();
    assert_eq!(sorted_covers(p2.lattice()), sorted_covers(&fixtures::lattice("FIX-P2").unwrap()));
    assert_eq!(t, fixtures::family("FIX-T6").unwrap());
    assert!(matches!(p3.remove_specific(6), Err(Error::NotRemovable(6))));
    assert!(matches!(p2.remove_atom(), Err(Error::AtMinimum(4))));
    let (q, _) = p3.remove_atom().unwrap();
    assert_eq!(q.inserted_count(), 3);
}

#[test]
fn removal_commutes_with_embedding() {
    for base in ["FIX-L5", "FIX-L7"] {
        let l = fixtures::lattice(base).unwrap();
        for form in standard_forms(&l, 2).unwrap() {
            for r in form.removable() {
                let (smaller, t) = form.remove_specific(r).unwrap();
                assert_eq!(smaller.embedded().unwrap(), t);
                assert_eq!(smaller.atom_count() + 1, form.atom_count());
            }
        }
    }
}

#[test]
fn reduction_examples() {
    let s = |l: &[usize]| AtomSet::from_labels(l.iter().copied());
    let fam16 = fixtures::family("FIX-FAM16").unwrap();
    let h = reduce_geometric(&fam16, 3).unwrap();
    assert!(h.to_lattice().unwrap().is_geometric());
    assert_eq!(h.universe(), 4);
    let fam15 = fixtures::family("FIX-FAM15").unwrap();
    let h = reduce_geometric(&fam15, 5).unwrap();
    // U(3,5) minus a point is U(3,4): every pair closed
    assert_eq!(h.atoms().len(), 4);
    assert_eq!(h.len(), 1 + 4 + 6 + 1);
    assert!(h.to_lattice().unwrap().is_geometric());
    assert!(matches!(reduce_geometric(&fixtures::family("FIX-S10").unwrap(), 1), Err(Error::NotGeometric)));
    assert!(matches!(reduce_geometric(&fam16, 9), Err(Error::ReductionFailed(_))));
    let b2 = SetFamily::new(2, [s(&[]), s(&[1]), s(&[2]), s(&[1, 2])]).unwrap();
    assert_eq!(reduce_geometric(&b2, 1).unwrap(), SetFamily::new(1, [s(&[]), s(&[1])]).unwrap());
}

/// Geometric extensions of a non-minimal form shrink to geometric extensions
/// of the form with one atom fewer.
#[test]
fn reduction_preserves_extension() {
    let l5 = fixtures::lattice("FIX-L5").unwrap();
    for form in standard_forms(&l5, 1).unwrap().into_iter().filter(|f| f.inserted_count() == 4) {
        let input = form.search_input().unwrap();
        let outputs = geometric_outputs(&enumerate_outputs(&input, SearchOptions::default()).unwrap()).unwrap();
        assert!(!outputs.is_empty());
        for r in form.removable() {
            let label = form.label_of(r).unwrap();
            let (smaller, t) = form.remove_specific(r).unwrap();
            for k in &outputs {
                let h = reduce_geometric(k, label).unwrap();
                assert!(is_geometric_extension(&h, &t, l5.length()).unwrap());
                assert_eq!(h.universe(), smaller.atom_count());
            }
        }
    }
}
