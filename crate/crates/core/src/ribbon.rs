//! The category of conjugates of a generator subset I0: objects are the
//! orbit of I0 under elementary conjugators, morphisms the I-reduced
//! conjugating elements, packaged as a germ.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::category::{alpha, omega, Morphism};
use crate::coxeter::{CoxeterError, CoxeterSystem, LiftGerm, WElement};
use crate::garside::GarsideStructure;
use crate::germ::{ElemId, GermElement, GermTable, ObjectId};

#[derive(Debug, Error)]
pub enum RibbonError {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
}

pub type GenSet = BTreeSet<u8>;

/// A germ over the orbit of I0. Elements are triples (I, w, J) with
/// w J w^{-1} = I and w I-reduced; the product is defined when lengths add.
pub struct RibbonGerm {
    pub germ: GermTable,
    pub objects: Vec<GenSet>,
    /// per germ element: (source set, w, target set)
    pub triples: Vec<(GenSet, WElement, GenSet)>,
}

pub fn set_label(cox: &CoxeterSystem, s: &GenSet) -> String {
    let parts: Vec<&str> = s.iter().map(|&g| cox.labels[g as usize].as_str()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Orbit of I0 under the elementary conjugators v(alpha, I).
pub fn ribbon_orbit(cox: &CoxeterSystem, i0: &GenSet) -> Vec<GenSet> {
    let mut seen: Vec<GenSet> = vec![i0.clone()];
    let mut queue: VecDeque<GenSet> = VecDeque::new();
    queue.push_back(i0.clone());
    while let Some(i) = queue.pop_front() {
        for alpha in 0..cox.rank() as u8 {
            if i.contains(&alpha) {
                continue;
            }
            if let Ok((j, _v)) = cox.v_alpha_i(alpha, &i) {
                if !seen.contains(&j) {
                    seen.push(j.clone());
                    queue.push_back(j);
                }
            }
        }
    }
    seen.sort();
    seen
}

/// Build the ribbon germ for a finite W.
pub fn build_ribbon_germ(cox: &CoxeterSystem, i0: &GenSet) -> Result<RibbonGerm, RibbonError> {
    let objects = ribbon_orbit(cox, i0);
    let all = cox.all_elements()?;
    let obj_index: HashMap<GenSet, usize> = objects
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    // all (I, w, J): w J w^{-1} = I, w I-reduced
    let mut triples: Vec<(GenSet, WElement, GenSet)> = Vec::new();
    for w in &all {
        for j in &objects {
            if let Some(i) = cox.conjugate_set(w, j) {
                if obj_index.contains_key(&i) && cox.is_i_reduced(&i, w) {
                    triples.push((i, w.clone(), j.clone()));
                }
            }
        }
    }
    triples.sort_by_key(|(i, w, j)| (w.length(), i.clone(), w.word.clone(), j.clone()));
    let trip_index: HashMap<(GenSet, WElement, GenSet), usize> = triples
        .iter()
        .cloned()
        .enumerate()
        .map(|(n, t)| (t, n))
        .collect();
    let elements: Vec<GermElement> = triples
        .iter()
        .map(|(i, w, j)| GermElement {
            label: if w.word.is_empty() {
                format!("1@{}", set_label(cox, i))
            } else {
                format!("{}@{}", w.display(cox), set_label(cox, i))
            },
            source: ObjectId(obj_index[i] as u32),
            target: ObjectId(obj_index[j] as u32),
            is_identity: w.word.is_empty(),
        })
        .collect();
    let mut products = Vec::new();
    for (n1, (i, w, j)) in triples.iter().enumerate() {
        for (n2, (j2, w2, k)) in triples.iter().enumerate() {
            if j != j2 || w.word.is_empty() || w2.word.is_empty() {
                continue;
            }
            if cox.lengths_add(w, w2) {
                let ww2 = cox.mult(w, w2);
                let key = (i.clone(), ww2, k.clone());
                if let Some(&n3) = trip_index.get(&key) {
                    products.push((ElemId(n1 as u32), ElemId(n2 as u32), ElemId(n3 as u32)));
                }
            }
        }
    }
    let germ = GermTable::from_parts_unchecked(
        objects.iter().map(|s| set_label(cox, s)).collect(),
        elements,
        products,
    );
    germ.validate()
        .map_err(|e| CoxeterError::BadMatrix(format!("ribbon germ failed validation: {e}")))?;
    Ok(RibbonGerm {
        germ,
        objects,
        triples,
    })
}

/// Atoms from the elementary-conjugator description: the (J, v(alpha, I), I)
/// that are not proper right multiples of another such element.
pub fn ribbon_atoms(cox: &CoxeterSystem, rg: &RibbonGerm) -> Vec<ElemId> {
    let mut candidates: Vec<ElemId> = Vec::new();
    for i in &rg.objects {
        for alpha in 0..cox.rank() as u8 {
            if i.contains(&alpha) {
                continue;
            }
            if let Ok((j, v)) = cox.v_alpha_i(alpha, i) {
                if let Some(pos) = rg
                    .triples
                    .iter()
                    .position(|(a, w, b)| a == &j && w == &v && b == i)
                {
                    let e = ElemId(pos as u32);
                    if !candidates.contains(&e) {
                        candidates.push(e);
                    }
                }
            }
        }
    }
    // drop any candidate that is a proper right multiple of another
    let germ = &rg.germ;
    let mut out: Vec<ElemId> = candidates
        .iter()
        .copied()
        .filter(|&e| {
            !candidates
                .iter()
                .any(|&f| f != e && germ.source(f) == germ.source(e) && germ.divides(f, e))
        })
        .collect();
    germ.sort_for_display(&mut out);
    out
}

/// Ribbon data carried along an Artin-monoid morphism: the chain of
/// generator sets conjugated through each normal-form term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RibbonNf {
    /// each NF term is itself a ribbon element; the witness chain of sets
    AllRibbon(Vec<GenSet>),
    Fail {
        term_index: usize,
        note: String,
    },
}

/// Check that every normal-form term of an ambient (lift germ) morphism is
/// an I-reduced conjugator along the induced chain of sets.
pub fn ribbon_nf_stays_ribbon(
    cox: &CoxeterSystem,
    lift: &LiftGerm,
    start: &GenSet,
    b: &Morphism,
) -> RibbonNf {
    let germ = &lift.germ;
    let mut chain = vec![start.clone()];
    let mut cur = start.clone();
    let mut rest = b.clone();
    let mut idx = 0usize;
    while !rest.is_identity() {
        let head = alpha(germ, &rest);
        let w = lift.element_of(head).clone();
        let winv = cox.inverse(&w);
        let next = match cox.conjugate_set(&winv, &cur) {
            Some(j) => j,
            None => {
                return RibbonNf::Fail {
                    term_index: idx,
                    note: format!(
                        "term {} does not conjugate {} into S",
                        w.display(cox),
                        set_label(cox, &cur)
                    ),
                }
            }
        };
        if !cox.is_i_reduced(&cur, &w) {
            return RibbonNf::Fail {
                term_index: idx,
                note: format!("term {} is not reduced for its source set", w.display(cox)),
            };
        }
        chain.push(next.clone());
        cur = next;
        rest = omega(germ, &rest);
        idx += 1;
    }
    RibbonNf::AllRibbon(chain)
}

/// Spherical Garside structure on the ribbon germ: Delta_J is the ribbon
/// element (J, w_J^{-1} w_S, Jbar), Phi the conjugation by w_S.
pub fn spherical_garside(
    cox: &CoxeterSystem,
    rg: &RibbonGerm,
) -> Result<GarsideStructure, CoxeterError> {
    let s_all: GenSet = (0..cox.rank() as u8).collect();
    let w_s = cox.parabolic_longest(&s_all)?;
    let germ = &rg.germ;
    let mut delta = HashMap::new();
    let mut phi_obj = HashMap::new();
    for (oi, j) in rg.objects.iter().enumerate() {
        let w_j = cox.parabolic_longest(j)?;
        let d = cox.mult(&cox.inverse(&w_j), &w_s);
        let jbar = cox
            .conjugate_set(&w_s, j)
            .expect("w_S conjugates every subset of S into S");
        let pos = rg
            .triples
            .iter()
            .position(|(a, w, b)| a == j && w == &d && b == &jbar)
            .expect("Delta_J is a ribbon element");
        delta.insert(ObjectId(oi as u32), ElemId(pos as u32));
        let bar_oi = rg.objects.iter().position(|s| s == &jbar).unwrap();
        phi_obj.insert(ObjectId(oi as u32), ObjectId(bar_oi as u32));
    }
    let mut tilde = HashMap::new();
    for f in germ.elements() {
        let d = delta[&germ.source(f)];
        let t = germ
            .complement(f, d)
            .expect("every ribbon germ element divides Delta in the spherical case");
        tilde.insert(f, t);
    }
    let mut phi_elem = HashMap::new();
    for f in germ.elements() {
        phi_elem.insert(f, tilde[&tilde[&f]]);
    }
    Ok(GarsideStructure {
        delta,
        phi_obj,
        phi_elem,
        tilde,
    })
}
