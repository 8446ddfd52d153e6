use std::collections::BTreeSet;

use garside_core::category::{enumerate_morphisms, normal_form};
use garside_core::coxeter::{lift_germ, CoxeterSystem};
use garside_core::germ::{check_locally_garside, G4Strategy};
use garside_core::ribbon::{
    build_ribbon_germ, ribbon_atoms, ribbon_nf_stays_ribbon, ribbon_orbit, set_label,
    spherical_garside, GenSet, RibbonNf,
};
use garside_core::{ObjectId, RawPath};

fn set(gens: &[u8]) -> GenSet {
    gens.iter().copied().collect()
}

#[test]
fn a3_orbit_of_s1() {
    let cox = CoxeterSystem::preset("A3").unwrap();
    let orbit = ribbon_orbit(&cox, &set(&[0]));
    assert_eq!(orbit, vec![set(&[0]), set(&[1]), set(&[2])]);
}

#[test]
fn a3_orbit_of_s1_s3_is_a_singleton() {
    let cox = CoxeterSystem::preset("A3").unwrap();
    let orbit = ribbon_orbit(&cox, &set(&[0, 2]));
    assert_eq!(orbit, vec![set(&[0, 2])]);
}

#[test]
fn orbit_of_empty_set() {
    let cox = CoxeterSystem::preset("A2").unwrap();
    let orbit = ribbon_orbit(&cox, &BTreeSet::new());
    assert_eq!(orbit, vec![BTreeSet::new()]);
    // over the empty set every element conjugates, so the ribbon germ is the
    // whole group germ
    let rg = build_ribbon_germ(&cox, &BTreeSet::new()).unwrap();
    assert_eq!(rg.germ.len(), 6);
}

#[test]
fn a3_ribbon_germ_passes_axioms() {
    let cox = CoxeterSystem::preset("A3").unwrap();
    let rg = build_ribbon_germ(&cox, &set(&[0])).unwrap();
    assert_eq!(rg.germ.object_count(), 3);
    let report = check_locally_garside(&rg.germ, G4Strategy::Assume);
    assert!(report.all_pass(), "{report}");
}

#[test]
fn ribbon_atoms_match_germ_atoms() {
    for (name, i0) in [("A2", set(&[0])), ("A3", set(&[0])), ("A3", set(&[0, 2]))] {
        let cox = CoxeterSystem::preset(name).unwrap();
        let rg = build_ribbon_germ(&cox, &i0).unwrap();
        let from_moves = ribbon_atoms(&cox, &rg);
        let from_germ = rg.germ.atoms();
        assert_eq!(from_moves, from_germ, "{name} I0={i0:?}");
    }
}

#[test]
fn a3_spherical_delta_at_s1() {
    let cox = CoxeterSystem::preset("A3").unwrap();
    let rg = build_ribbon_germ(&cox, &set(&[0])).unwrap();
    let gs = spherical_garside(&cox, &rg).unwrap();
    // objects are sorted, so object 0 is {s1}
    assert_eq!(rg.objects[0], set(&[0]));
    let d = gs.delta[&ObjectId(0)];
    let (src, w, tgt) = &rg.triples[d.index()];
    assert_eq!(src, &set(&[0]));
    assert_eq!(w.length(), 5);
    assert_eq!(tgt, &set(&[2]));
    assert_eq!(set_label(&cox, tgt), "{s3}");
    // f tilde(f) = Delta at the source of f
    for f in rg.germ.elements() {
        let delta = gs.delta[&rg.germ.source(f)];
        assert_eq!(rg.germ.product(f, gs.tilde[&f]), Some(delta));
        assert_eq!(gs.tilde[&gs.tilde[&f]], gs.phi_elem[&f]);
    }
}

#[test]
fn a2_spherical_delta_at_s1() {
    let cox = CoxeterSystem::preset("A2").unwrap();
    let rg = build_ribbon_germ(&cox, &set(&[0])).unwrap();
    let gs = spherical_garside(&cox, &rg).unwrap();
    assert_eq!(rg.objects, vec![set(&[0]), set(&[1])]);
    let d = gs.delta[&ObjectId(0)];
    assert_eq!(rg.germ.label(d), "s2s1@{s1}");
    assert_eq!(set_label(&cox, &rg.triples[d.index()].2), "{s2}");
}

#[test]
fn nf_of_ribbon_products_stays_ribbon() {
    // multiply ribbon elements in the ambient monoid, renormalize there, and
    // check every normal-form term is again an I-reduced conjugator
    let cox = CoxeterSystem::preset("A3").unwrap();
    let lift = lift_germ(&cox, None).unwrap();
    let rg = build_ribbon_germ(&cox, &set(&[0])).unwrap();
    for o in 0..rg.germ.object_count() {
        let start = rg.objects[o].clone();
        for m in enumerate_morphisms(&rg.germ, ObjectId(o as u32), 3) {
            let letters: Vec<_> = m
                .factors
                .iter()
                .map(|f| lift.find(&rg.triples[f.index()].1).unwrap())
                .collect();
            let ambient = normal_form(
                &lift.germ,
                &RawPath {
                    source: ObjectId(0),
                    letters,
                },
            );
            match ribbon_nf_stays_ribbon(&cox, &lift, &start, &ambient) {
                RibbonNf::AllRibbon(chain) => {
                    assert_eq!(chain.first(), Some(&start));
                    let end = rg.objects[m.target(&rg.germ).index()].clone();
                    assert_eq!(chain.last(), Some(&end));
                }
                RibbonNf::Fail { term_index, note } => {
                    panic!("term {term_index} left the ribbon category: {note}")
                }
            }
        }
    }
}

#[test]
fn non_ribbon_morphism_is_detected() {
    let cox = CoxeterSystem::preset("A2").unwrap();
    let lift = lift_germ(&cox, None).unwrap();
    let s1 = lift.germ.find_by_label("s1").unwrap();
    // s1 s1 starts with a term that is not {s1}-reduced
    let b = normal_form(
        &lift.germ,
        &RawPath {
            source: ObjectId(0),
            letters: vec![s1, s1],
        },
    );
    match ribbon_nf_stays_ribbon(&cox, &lift, &set(&[0]), &b) {
        RibbonNf::Fail { term_index: 0, .. } => {}
        other => panic!("expected a failure on the first term, got {other:?}"),
    }
}
