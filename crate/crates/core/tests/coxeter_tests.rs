use std::collections::BTreeSet;

use garside_core::category::{enumerate_morphisms, normal_form, parse_word, Morphism};
use garside_core::coxeter::{alpha_i, lift_germ, CoxeterError, CoxeterSystem};
use garside_core::germ::{check_locally_garside, G4Strategy};
use garside_core::germfile::a2_germ_file;
use garside_core::ObjectId;

fn set(gens: &[u8]) -> BTreeSet<u8> {
    gens.iter().copied().collect()
}

#[test]
fn preset_matrices() {
    for name in ["A2", "A3", "B3", "Atilde1"] {
        CoxeterSystem::preset(name).unwrap();
    }
    assert!(matches!(
        CoxeterSystem::preset("Z9"),
        Err(CoxeterError::UnknownPreset(_))
    ));
}

#[test]
fn lengths_and_canonical_words() {
    let a2 = CoxeterSystem::preset("A2").unwrap();
    let w = a2.parse_word("s1 s2 s1").unwrap();
    assert_eq!(w.length(), 3);
    // s1s2s1 = s2s1s2, canonical is shortlex minimal
    let w2 = a2.parse_word("s2 s1 s2").unwrap();
    assert_eq!(w, w2);
    assert_eq!(w.display(&a2), "s1s2s1");
    let a3 = CoxeterSystem::preset("A3").unwrap();
    let w0 = a3.parabolic_longest(&set(&[0, 1, 2])).unwrap();
    assert_eq!(w0.length(), 6);
}

#[test]
fn lengths_add_examples() {
    let a2 = CoxeterSystem::preset("A2").unwrap();
    let s1 = a2.generator(0);
    assert!(!a2.lengths_add(&s1, &s1));
    let s2 = a2.generator(1);
    assert!(a2.lengths_add(&s1, &s2));
}

#[test]
fn involution_and_inverse() {
    let b3 = CoxeterSystem::preset("B3").unwrap();
    let w = b3.parse_word("s1 s2 s3 s1").unwrap();
    let winv = b3.inverse(&w);
    assert!(b3.mult(&w, &winv).word.is_empty());
    assert_eq!(w.length(), winv.length());
}

#[test]
fn a2_lift_matches_hand_written_germ() {
    let cox = CoxeterSystem::preset("A2").unwrap();
    let lift = lift_germ(&cox, None).unwrap();
    assert!(!lift.truncated);
    let hand = a2_germ_file().build().unwrap();
    assert_eq!(lift.germ.len(), 6);
    // match up by word length and product tables
    let relabel = |w: &str| match w {
        "1" => "1",
        "s1" => "a",
        "s2" => "b",
        "s1s2" => "ab",
        "s2s1" => "ba",
        "s1s2s1" => "aba",
        other => panic!("unexpected element {other}"),
    };
    for a in lift.germ.elements() {
        for b in lift.germ.elements() {
            let lhs = lift.germ.product(a, b).map(|c| relabel(lift.germ.label(c)));
            let ha = hand.find_by_label(relabel(lift.germ.label(a))).unwrap();
            let hb = hand.find_by_label(relabel(lift.germ.label(b))).unwrap();
            let rhs = hand.product(ha, hb).map(|c| hand.label(c));
            assert_eq!(lhs, rhs.map(|s| s));
        }
    }
}

#[test]
fn a3_lift_has_24_elements_and_passes_checks() {
    let cox = CoxeterSystem::preset("A3").unwrap();
    let lift = lift_germ(&cox, None).unwrap();
    assert_eq!(lift.germ.len(), 24);
    let report = check_locally_garside(&lift.germ, G4Strategy::Assume);
    assert!(report.all_pass(), "{report}");
}

#[test]
fn b3_lift_has_48_elements() {
    let cox = CoxeterSystem::preset("B3").unwrap();
    let lift = lift_germ(&cox, None).unwrap();
    assert_eq!(lift.germ.len(), 48);
}

#[test]
fn affine_requires_bound() {
    let cox = CoxeterSystem::preset("Atilde1").unwrap();
    assert!(matches!(
        lift_germ(&cox, None),
        Err(CoxeterError::InfiniteWithoutBound)
    ));
    let lift = lift_germ(&cox, Some(4)).unwrap();
    assert!(lift.truncated);
    assert_eq!(lift.germ.len(), 9);
    // the carrier-restricted checks still pass
    let report = check_locally_garside(&lift.germ, G4Strategy::Assume);
    assert!(report.g1.passed());
}

#[test]
fn germ_product_iff_lengths_add() {
    for name in ["A2", "A3"] {
        let cox = CoxeterSystem::preset(name).unwrap();
        let lift = lift_germ(&cox, None).unwrap();
        for a in lift.germ.elements() {
            for b in lift.germ.elements() {
                let defined = lift.germ.product(a, b).is_some();
                let adds = cox.lengths_add(lift.element_of(a), lift.element_of(b));
                assert_eq!(defined, adds);
            }
        }
    }
}

#[test]
fn parabolic_longest_examples() {
    let a3 = CoxeterSystem::preset("A3").unwrap();
    let w = a3.parabolic_longest(&set(&[0, 1])).unwrap();
    assert_eq!(w.display(&a3), "s1s2s1");
    let w1 = a3.parabolic_longest(&set(&[0])).unwrap();
    assert_eq!(w1.display(&a3), "s1");
    let atilde = CoxeterSystem::preset("Atilde1").unwrap();
    assert!(matches!(
        atilde.parabolic_longest(&set(&[0, 1])),
        Err(CoxeterError::NotSpherical)
    ));
}

#[test]
fn i_reduced_examples() {
    let a3 = CoxeterSystem::preset("A3").unwrap();
    let s2 = a3.parse_word("s2").unwrap();
    assert!(a3.is_i_reduced(&set(&[0]), &s2));
    let id = a3.parse_word("").unwrap();
    assert!(a3.is_i_reduced(&set(&[0, 1, 2]), &id));
    let s1s2 = a3.parse_word("s1 s2").unwrap();
    assert!(!a3.is_i_reduced(&set(&[0]), &s1s2));
}

#[test]
fn v_alpha_i_examples() {
    let a3 = CoxeterSystem::preset("A3").unwrap();
    let (j, v) = a3.v_alpha_i(1, &set(&[0])).unwrap();
    assert_eq!(v.display(&a3), "s1s2");
    assert_eq!(j, set(&[1]));
    let (j, v) = a3.v_alpha_i(2, &set(&[0])).unwrap();
    assert_eq!(v.display(&a3), "s3");
    assert_eq!(j, set(&[0]));
    let a2 = CoxeterSystem::preset("A2").unwrap();
    let (j, v) = a2.v_alpha_i(1, &set(&[0])).unwrap();
    assert_eq!(v.display(&a2), "s1s2");
    assert_eq!(j, set(&[1]));
    // infinite difference in the affine case
    let atilde = CoxeterSystem::preset("Atilde1").unwrap();
    assert!(matches!(
        atilde.v_alpha_i(1, &set(&[0])),
        Err(CoxeterError::InfiniteDifference)
    ));
}

#[test]
fn v_alpha_i_lands_inside_union() {
    let b3 = CoxeterSystem::preset("B3").unwrap();
    for i in [set(&[0]), set(&[1]), set(&[2]), set(&[0, 2])] {
        for alpha in 0..3u8 {
            if i.contains(&alpha) {
                continue;
            }
            let (j, v) = b3.v_alpha_i(alpha, &i).unwrap();
            let mut union = i.clone();
            union.insert(alpha);
            assert!(j.is_subset(&union));
            assert!(b3.is_i_reduced(&j, &v));
        }
    }
}

#[test]
fn alpha_i_extraction() {
    let cox = CoxeterSystem::preset("A3").unwrap();
    let lift = lift_germ(&cox, None).unwrap();
    let g = &lift.germ;
    let m = normal_form(g, &parse_word(g, "s1s2").unwrap());
    let (head, tail) = alpha_i(&lift, &set(&[0]), &m);
    assert_eq!(head.display(g), "[s1]");
    assert_eq!(tail.display(g), "[s2]");
    let id = Morphism::identity(ObjectId(0));
    let (head, tail) = alpha_i(&lift, &set(&[0]), &id);
    assert!(head.is_identity() && tail.is_identity());
    let m2 = normal_form(g, &parse_word(g, "s1s2s1 s3").unwrap());
    let (head, _) = alpha_i(&lift, &set(&[0, 1]), &m2);
    assert_eq!(head.display(g), "[s1s2s1]");
}

#[test]
fn alpha_i_factorization_property() {
    // b = alpha_I(b) omega_I(b), alpha_I in the parabolic, and the tail has
    // trivial alpha_I
    let cox = CoxeterSystem::preset("A3").unwrap();
    let lift = lift_germ(&cox, None).unwrap();
    let g = &lift.germ;
    let i = set(&[0, 1]);
    for b in enumerate_morphisms(g, ObjectId(0), 3) {
        let (head, tail) = alpha_i(&lift, &i, &b);
        let recomposed = garside_core::category::multiply(g, &head, &tail).unwrap();
        assert_eq!(recomposed, b);
        for &f in &head.factors {
            assert!(lift.element_of(f).word.iter().all(|s| i.contains(s)));
        }
        let (again, _) = alpha_i(&lift, &i, &tail);
        assert!(again.is_identity());
    }
}
