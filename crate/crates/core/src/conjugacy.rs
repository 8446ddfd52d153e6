//! The simultaneous conjugacy category of a germ-generated category:
//! morphisms from a family w are the x with w x = x w' for some w', and the
//! germ of simples is cut out of the ambient germ by divisibility.

use thiserror::Error;

use crate::category::{
    divides_left, from_element, left_quotient, multiply, normal_form, Morphism, RawPath,
};
use crate::germ::{ElemId, GermTable};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConjError {
    #[error("morphism does not conjugate the family")]
    NotConjugating,
    #[error("family members must share source = target")]
    NotEndomorphisms,
}

/// A family of endomorphisms of one object, conjugated simultaneously.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjObject {
    pub family: Vec<Morphism>,
}

impl ConjObject {
    pub fn new(germ: &GermTable, family: Vec<Morphism>) -> Result<ConjObject, ConjError> {
        if family.is_empty() {
            return Err(ConjError::NotEndomorphisms);
        }
        let o = family[0].source;
        for w in &family {
            if w.source != o || w.target(germ) != o {
                return Err(ConjError::NotEndomorphisms);
            }
        }
        Ok(ConjObject { family })
    }
}

/// x conjugates w iff x left-divides w x.
pub fn is_conjugating(germ: &GermTable, family: &ConjObject, x: &Morphism) -> bool {
    if x.source != family.family[0].source {
        return false;
    }
    family.family.iter().all(|w| {
        let wx = multiply(germ, w, x).unwrap();
        divides_left(germ, x, &wx)
    })
}

/// The target family w^x, defined by w x = x w^x.
pub fn conj_apply(
    germ: &GermTable,
    family: &ConjObject,
    x: &Morphism,
) -> Result<ConjObject, ConjError> {
    if !is_conjugating(germ, family, x) {
        return Err(ConjError::NotConjugating);
    }
    let out = family
        .family
        .iter()
        .map(|w| {
            let wx = multiply(germ, w, x).unwrap();
            left_quotient(germ, x, &wx).unwrap()
        })
        .collect();
    Ok(ConjObject { family: out })
}

/// Germ elements p with p dividing w p for every w, with their targets.
pub fn conj_simples(germ: &GermTable, family: &ConjObject) -> Vec<(ElemId, ConjObject)> {
    let o = family.family[0].source;
    let mut out = Vec::new();
    let mut elems: Vec<ElemId> = germ.elements_from(o).to_vec();
    germ.sort_for_display(&mut elems);
    for p in elems {
        let m = from_element(germ, p);
        if is_conjugating(germ, family, &m) {
            let target = conj_apply(germ, family, &m).unwrap();
            out.push((p, target));
        }
    }
    out
}

/// Normal form of x in the conjugacy category. The germ of the conjugacy
/// category consists of the conjugating simples, and the normal form there
/// coincides with the ambient one; we verify each prefix conjugates.
pub fn conj_normal_form(
    germ: &GermTable,
    family: &ConjObject,
    x: &RawPath,
) -> Result<Morphism, ConjError> {
    let nf = normal_form(germ, x);
    if !is_conjugating(germ, family, &nf) {
        return Err(ConjError::NotConjugating);
    }
    // every normal-form prefix must itself conjugate (simples stay simples)
    let mut cur = family.clone();
    for &f in &nf.factors {
        let step = from_element(germ, f);
        if !is_conjugating(germ, &cur, &step) {
            return Err(ConjError::NotConjugating);
        }
        cur = conj_apply(germ, &cur, &step).unwrap();
    }
    Ok(nf)
}

/// All conjugating morphisms of nu <= bound out of the family's object.
pub fn enumerate_conjugating(
    germ: &GermTable,
    family: &ConjObject,
    bound: usize,
) -> Vec<Morphism> {
    crate::category::enumerate_morphisms(germ, family.family[0].source, bound)
        .into_iter()
        .filter(|m| is_conjugating(germ, family, m))
        .collect()
}
