//! The category generated by a germ: greedy normal forms, multiplication,
//! divisibility, lcm/gcd, atoms and a brute-force enumeration oracle.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::germ::{ElemId, GermLcm, GermTable, ObjectId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CategoryError {
    #[error("source/target mismatch")]
    SourceTargetMismatch,
    #[error("not a left divisor")]
    NotADivisor,
    #[error("no common right multiple")]
    NoCommonMultiple,
}

/// An element of the generated category: a source object plus its greedy
/// normal form. Empty factor list is the identity at `source`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Morphism {
    pub source: ObjectId,
    pub factors: Vec<ElemId>,
}

impl Morphism {
    pub fn identity(source: ObjectId) -> Morphism {
        Morphism {
            source,
            factors: Vec::new(),
        }
    }

    pub fn target(&self, germ: &GermTable) -> ObjectId {
        self.factors
            .last()
            .map_or(self.source, |&f| germ.target(f))
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Canonical length nu: number of normal-form factors.
    pub fn nu(&self) -> usize {
        self.factors.len()
    }

    pub fn display(&self, germ: &GermTable) -> String {
        if self.factors.is_empty() {
            return "[]".to_string();
        }
        let parts: Vec<&str> = self.factors.iter().map(|&f| germ.label(f)).collect();
        format!("[{}]", parts.join(", "))
    }
}

/// A not-necessarily-normal word in germ letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawPath {
    pub source: ObjectId,
    pub letters: Vec<ElemId>,
}

/// Maximal z dividing y with xz defined; returns xz.
pub fn alpha2(germ: &GermTable, x: ElemId, y: ElemId) -> ElemId {
    debug_assert_eq!(germ.target(x), germ.source(y));
    let zs: Vec<ElemId> = germ
        .left_divisors(y)
        .into_iter()
        .filter(|&z| germ.product(x, z).is_some())
        .collect();
    // the candidate set has a divisibility maximum in a locally Garside germ
    let zmax = *zs
        .iter()
        .find(|&&z| zs.iter().all(|&z2| germ.divides(z2, z)))
        .expect("alpha2 candidate set has a maximum");
    germ.product(x, zmax).unwrap()
}

/// The t with y = zt where alpha2(x, y) = xz.
pub fn omega2(germ: &GermTable, x: ElemId, y: ElemId) -> ElemId {
    let zs: Vec<ElemId> = germ
        .left_divisors(y)
        .into_iter()
        .filter(|&z| germ.product(x, z).is_some())
        .collect();
    let zmax = *zs
        .iter()
        .find(|&&z| zs.iter().all(|&z2| germ.divides(z2, z)))
        .expect("alpha2 divisor set has a maximum in a locally Garside germ");
    germ.complement(zmax, y)
        .expect("zmax divides y by construction")
}

/// The adjacent pair (x, y) is in normal position.
pub fn pair_normal(germ: &GermTable, x: ElemId, y: ElemId) -> bool {
    alpha2(germ, x, y) == x
}

/// Left-multiply a normal form by a single germ element, staircase pass.
fn push_left(germ: &GermTable, p: ElemId, factors: &[ElemId], source: ObjectId) -> Morphism {
    if germ.is_identity(p) {
        return Morphism {
            source,
            factors: factors.to_vec(),
        };
    }
    let mut out: Vec<ElemId> = Vec::with_capacity(factors.len() + 1);
    let mut carry = p;
    let mut i = 0;
    while i < factors.len() {
        if germ.is_identity(carry) {
            out.extend_from_slice(&factors[i..]);
            return Morphism {
                source: germ.source(p),
                factors: out,
            };
        }
        let x = factors[i];
        out.push(alpha2(germ, carry, x));
        carry = omega2(germ, carry, x);
        i += 1;
    }
    if !germ.is_identity(carry) {
        out.push(carry);
    }
    Morphism {
        source: germ.source(p),
        factors: out,
    }
}

/// Normal form of a raw path. Identity letters are dropped.
pub fn normal_form(germ: &GermTable, path: &RawPath) -> Morphism {
    let mut m = Morphism::identity(match path.letters.last() {
        Some(&l) => germ.target(l),
        None => path.source,
    });
    for &p in path.letters.iter().rev() {
        if germ.is_identity(p) {
            continue;
        }
        m = push_left(germ, p, &m.factors, m.source);
    }
    if m.factors.is_empty() {
        m.source = path.source;
    }
    m
}

pub fn multiply(
    germ: &GermTable,
    m1: &Morphism,
    m2: &Morphism,
) -> Result<Morphism, CategoryError> {
    if m1.target(germ) != m2.source {
        return Err(CategoryError::SourceTargetMismatch);
    }
    let mut m = m2.clone();
    for &p in m1.factors.iter().rev() {
        m = push_left(germ, p, &m.factors, m.source);
    }
    m.source = m1.source;
    Ok(m)
}

/// First normal-form factor, or the source identity.
pub fn alpha(germ: &GermTable, m: &Morphism) -> ElemId {
    m.factors
        .first()
        .copied()
        .unwrap_or_else(|| germ.identity_of(m.source))
}

/// Everything after the first factor.
pub fn omega(germ: &GermTable, m: &Morphism) -> Morphism {
    match m.factors.split_first() {
        None => m.clone(),
        Some((&f, rest)) => Morphism {
            source: germ.target(f),
            factors: rest.to_vec(),
        },
    }
}

pub fn divides_left(germ: &GermTable, x: &Morphism, y: &Morphism) -> bool {
    left_quotient(germ, x, y).is_ok()
}

/// The unique z with x z = y.
pub fn left_quotient(
    germ: &GermTable,
    x: &Morphism,
    y: &Morphism,
) -> Result<Morphism, CategoryError> {
    if x.source != y.source {
        return Err(CategoryError::NotADivisor);
    }
    // peel one germ letter of x at a time from y
    let mut rest = y.clone();
    for &p in &x.factors {
        rest = strip_letter(germ, p, &rest).ok_or(CategoryError::NotADivisor)?;
    }
    Ok(rest)
}

/// Remove the germ-letter prefix p from m, if p divides m.
fn strip_letter(germ: &GermTable, p: ElemId, m: &Morphism) -> Option<Morphism> {
    if germ.is_identity(p) {
        return Some(m.clone());
    }
    // p divides m iff p divides alpha(m) (the maximal germ prefix)
    let a = alpha(germ, m, );
    let q = germ.complement(p, a)?;
    let tail = omega(germ, m);
    let mut out = push_left(germ, q, &tail.factors, tail.source);
    if out.factors.is_empty() {
        out.source = germ.target(p);
    }
    Some(out)
}

/// lcm of a germ element with a morphism: alpha-directed recursion.
fn lcm_letter(germ: &GermTable, p: ElemId, v: &Morphism) -> Result<Morphism, CategoryError> {
    if germ.is_identity(p) {
        return Ok(v.clone());
    }
    if v.is_identity() {
        return Ok(Morphism {
            source: germ.source(p),
            factors: vec![p],
        });
    }
    let a = alpha(germ, v);
    let d = match crate::germ::germ_lcm(germ, p, a) {
        GermLcm::Lcm(d) => d,
        GermLcm::NoCommonMultiple => return Err(CategoryError::NoCommonMultiple),
        GermLcm::NoLeast(_) => return Err(CategoryError::NoCommonMultiple),
    };
    let e = germ.complement(a, d).expect("a divides its lcm");
    let rec = lcm_letter(germ, e, &omega(germ, v))?;
    let mut out = multiply(
        germ,
        &Morphism {
            source: germ.source(a),
            factors: if germ.is_identity(a) { vec![] } else { vec![a] },
        },
        &rec,
    )?;
    out.source = germ.source(p);
    Ok(out)
}

fn lcm_pair(germ: &GermTable, u: &Morphism, v: &Morphism) -> Result<Morphism, CategoryError> {
    if u.is_identity() {
        return Ok(v.clone());
    }
    let p = alpha(germ, u);
    let m = lcm_letter(germ, p, v)?;
    // m = p * (p \ m)
    let p_m = strip_letter(germ, p, &m).expect("p divides lcm_letter(p, v)");
    let rec = lcm_pair(germ, &omega(germ, u), &p_m)?;
    let mut out = push_left(germ, p, &rec.factors, rec.source);
    out.source = u.source;
    Ok(out)
}

/// Least common right multiple of a nonempty family with common source.
pub fn lcm(germ: &GermTable, family: &[Morphism]) -> Result<Morphism, CategoryError> {
    let (first, rest) = family.split_first().expect("nonempty family");
    let mut acc = first.clone();
    for v in rest {
        if v.source != acc.source {
            return Err(CategoryError::SourceTargetMismatch);
        }
        acc = lcm_pair(germ, &acc, v)?;
    }
    Ok(acc)
}

/// All left divisors of m, by breadth-first germ-letter stripping.
pub fn left_divisor_set(germ: &GermTable, m: &Morphism) -> HashSet<Morphism> {
    let mut seen: HashSet<Morphism> = HashSet::new();
    let mut queue: VecDeque<Morphism> = VecDeque::new();
    let id = Morphism::identity(m.source);
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(d) = queue.pop_front() {
        let rest = left_quotient(germ, &d, m).expect("divisor by construction");
        let a = alpha(germ, &rest);
        for z in germ.left_divisors(a) {
            if germ.is_identity(z) {
                continue;
            }
            let ext = multiply(
                germ,
                &d,
                &Morphism {
                    source: germ.source(z),
                    factors: vec![z],
                },
            )
            .unwrap();
            if divides_left(germ, &ext, m) && seen.insert(ext.clone()) {
                queue.push_back(ext);
            }
        }
    }
    seen
}

/// Greatest common left divisor of a nonempty family with common source.
pub fn gcd(germ: &GermTable, family: &[Morphism]) -> Result<Morphism, CategoryError> {
    let (first, rest) = family.split_first().expect("nonempty family");
    let mut common = left_divisor_set(germ, first);
    for v in rest {
        if v.source != first.source {
            return Err(CategoryError::SourceTargetMismatch);
        }
        let dv = left_divisor_set(germ, v);
        common.retain(|d| dv.contains(d));
    }
    // the common divisors are directed (closed under lcm), so the maximum
    // is the unique element divisible by all others
    let max = common
        .iter()
        .find(|d| common.iter().all(|d2| divides_left(germ, d2, d)))
        .expect("gcd exists")
        .clone();
    Ok(max)
}

/// All morphisms from `source` with nu <= max_len, BFS with NF dedup.
pub fn enumerate_morphisms(
    germ: &GermTable,
    source: ObjectId,
    max_len: usize,
) -> Vec<Morphism> {
    let mut seen: HashSet<Morphism> = HashSet::new();
    let mut out: Vec<Morphism> = Vec::new();
    let id = Morphism::identity(source);
    seen.insert(id.clone());
    out.push(id);
    let mut frontier: Vec<Morphism> = vec![Morphism::identity(source)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for m in &frontier {
            let t = m.target(germ);
            for &e in germ.elements_from(t) {
                if germ.is_identity(e) {
                    continue;
                }
                let ext = multiply(
                    germ,
                    m,
                    &Morphism {
                        source: germ.source(e),
                        factors: vec![e],
                    },
                )
                .unwrap();
                if seen.insert(ext.clone()) {
                    out.push(ext.clone());
                    next.push(ext);
                }
            }
        }
        frontier = next;
    }
    out.retain(|m| m.nu() <= max_len);
    out
}

/// Atoms of the category out of `source` = germ atoms out of it.
pub fn category_atoms(germ: &GermTable, source: ObjectId) -> Vec<ElemId> {
    germ.atoms()
        .into_iter()
        .filter(|&a| germ.source(a) == source)
        .collect()
}

/// Factor a morphism as a product of atoms, peeling left atoms.
pub fn atom_factorization(germ: &GermTable, m: &Morphism) -> Vec<ElemId> {
    let mut out = Vec::new();
    let mut rest = m.clone();
    while !rest.is_identity() {
        let head = alpha(germ, &rest);
        let atom = *germ
            .left_divisors(head)
            .iter()
            .find(|&&d| !germ.is_identity(d) && germ.atoms().contains(&d))
            .expect("non-identity element has an atom divisor under G1");
        out.push(atom);
        rest = strip_letter(germ, atom, &rest).expect("atom divides head");
    }
    out
}

/// Morphism from a single germ element.
pub fn from_element(germ: &GermTable, e: ElemId) -> Morphism {
    if germ.is_identity(e) {
        Morphism::identity(germ.source(e))
    } else {
        Morphism {
            source: germ.source(e),
            factors: vec![e],
        }
    }
}

/// Parse a whitespace-separated word of element labels into a raw path.
pub fn parse_word(germ: &GermTable, word: &str) -> Result<RawPath, String> {
    let mut letters = Vec::new();
    for tok in word.split_whitespace() {
        let e = germ
            .find_by_label(tok)
            .ok_or_else(|| format!("unknown element {tok:?}"))?;
        if let Some(&prev) = letters.last() {
            let prev: ElemId = prev;
            if germ.target(prev) != germ.source(e) {
                return Err(format!(
                    "letters {} and {} do not compose",
                    germ.label(prev),
                    tok
                ));
            }
        }
        letters.push(e);
    }
    let source = letters
        .first()
        .map(|&l| germ.source(l))
        .unwrap_or(ObjectId(0));
    Ok(RawPath { source, letters })
}

/// Memoized alpha2/omega2 tables for hot loops; logically transparent.
pub struct NormalTables {
    alpha2: HashMap<(ElemId, ElemId), ElemId>,
}

impl NormalTables {
    pub fn new(germ: &GermTable) -> NormalTables {
        let mut t = HashMap::new();
        for x in germ.elements() {
            for &y in germ.elements_from(germ.target(x)) {
                t.insert((x, y), alpha2(germ, x, y));
            }
        }
        NormalTables { alpha2: t }
    }

    pub fn alpha2(&self, x: ElemId, y: ElemId) -> ElemId {
        self.alpha2[&(x, y)]
    }
}
