//! Coxeter systems with exact word arithmetic: canonical shortlex reduced
//! words via braid-move closure, parabolic tools and the germ lift of W.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::category::{alpha, from_element, left_quotient, multiply, Morphism};
use crate::germ::{GermElement, GermTable, ObjectId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("Coxeter matrix is malformed: {0}")]
    BadMatrix(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("the group is infinite; a length bound is required")]
    InfiniteWithoutBound,
    #[error("parabolic subgroup is not spherical")]
    NotSpherical,
    #[error("the root difference is infinite")]
    InfiniteDifference,
}

/// Entry value used for m(s,t) = infinity.
pub const INF: u32 = 0;

#[derive(Debug, Clone)]
pub struct CoxeterSystem {
    pub labels: Vec<String>,
    /// symmetric, diagonal 1; INF encodes an infinite bond
    pub matrix: Vec<Vec<u32>>,
    /// memoized right multiplication by a generator; logically transparent
    cache: std::sync::Arc<std::sync::Mutex<HashMap<(Word, u8), Word>>>,
}

/// Generators are indexed 0..rank; a word is a sequence of indices.
pub type Word = Vec<u8>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WElement {
    /// shortlex-minimal reduced word
    pub word: Word,
}

impl WElement {
    pub fn identity() -> WElement {
        WElement { word: Vec::new() }
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn display(&self, cox: &CoxeterSystem) -> String {
        if self.word.is_empty() {
            return "1".to_string();
        }
        self.word
            .iter()
            .map(|&s| cox.labels[s as usize].as_str())
            .collect::<Vec<_>>()
            .join("")
    }
}

impl CoxeterSystem {
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<u32>>) -> Result<CoxeterSystem, CoxeterError> {
        let n = labels.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(CoxeterError::BadMatrix("matrix is not rank x rank".into()));
        }
        for i in 0..n {
            if matrix[i][i] != 1 {
                return Err(CoxeterError::BadMatrix("diagonal must be 1".into()));
            }
            for j in 0..n {
                if matrix[i][j] != matrix[j][i] {
                    return Err(CoxeterError::BadMatrix("matrix must be symmetric".into()));
                }
                if i != j && matrix[i][j] == 1 {
                    return Err(CoxeterError::BadMatrix(
                        "off-diagonal entries must be >= 2 or infinite".into(),
                    ));
                }
            }
        }
        Ok(CoxeterSystem {
            labels,
            matrix,
            cache: Default::default(),
        })
    }

    pub fn preset(name: &str) -> Result<CoxeterSystem, CoxeterError> {
        let (labels, matrix): (Vec<&str>, Vec<Vec<u32>>) = match name {
            "A2" => (vec!["s1", "s2"], vec![vec![1, 3], vec![3, 1]]),
            "A3" => (
                vec!["s1", "s2", "s3"],
                vec![vec![1, 3, 2], vec![3, 1, 3], vec![2, 3, 1]],
            ),
            "B3" => (
                vec!["s1", "s2", "s3"],
                vec![vec![1, 4, 2], vec![4, 1, 3], vec![2, 3, 1]],
            ),
            "Atilde1" | "A~1" | "Ã1" => {
                (vec!["s1", "s2"], vec![vec![1, INF], vec![INF, 1]])
            }
            other => return Err(CoxeterError::UnknownPreset(other.to_string())),
        };
        CoxeterSystem::new(labels.into_iter().map(str::to_string).collect(), matrix)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self, s: u8, t: u8) -> u32 {
        self.matrix[s as usize][t as usize]
    }

    /// Canonical shortlex reduced form of an arbitrary word, one letter at
    /// a time so the rewriting closures stay near-reduced.
    pub fn canonical(&self, word: &[u8]) -> WElement {
        let mut w = Vec::new();
        for &s in word {
            w = self.mult_gen(&w, s);
        }
        WElement { word: w }
    }

    /// Braid-move closure with ss-deletion (Tits' solution of the word
    /// problem); the primitive behind `canonical`.
    fn canonical_closure(&self, word: &[u8]) -> WElement {
        let mut w = word.to_vec();
        'outer: loop {
            let mut seen: HashSet<Word> = HashSet::new();
            let mut queue: VecDeque<Word> = VecDeque::new();
            seen.insert(w.clone());
            queue.push_back(w.clone());
            while let Some(u) = queue.pop_front() {
                if let Some(i) = (0..u.len().saturating_sub(1)).find(|&i| u[i] == u[i + 1]) {
                    let mut shorter = u.clone();
                    shorter.drain(i..i + 2);
                    w = shorter;
                    continue 'outer;
                }
                for i in 0..u.len() {
                    for t in 0..self.rank() as u8 {
                        let s = u[i];
                        if t == s {
                            continue;
                        }
                        let m = self.m(s, t) as usize;
                        if m == INF as usize || i + m > u.len() {
                            continue;
                        }
                        // check u[i..i+m] = s t s t ...
                        let alternates = (0..m).all(|k| {
                            u[i + k] == if k % 2 == 0 { s } else { t }
                        });
                        if !alternates {
                            continue;
                        }
                        let mut v = u.clone();
                        for (k, slot) in v[i..i + m].iter_mut().enumerate() {
                            *slot = if k % 2 == 0 { t } else { s };
                        }
                        if seen.insert(v.clone()) {
                            queue.push_back(v);
                        }
                    }
                }
            }
            // no ss-pair anywhere in the closure: the word is reduced
            return WElement {
                word: seen.into_iter().min().unwrap(),
            };
        }
    }

    pub fn from_word(&self, word: &[u8]) -> WElement {
        self.canonical(word)
    }

    pub fn parse_word(&self, text: &str) -> Result<WElement, CoxeterError> {
        let mut word = Vec::new();
        for tok in text.split_whitespace() {
            let idx = self
                .labels
                .iter()
                .position(|l| l == tok)
                .ok_or_else(|| CoxeterError::BadMatrix(format!("unknown generator {tok:?}")))?;
            word.push(idx as u8);
        }
        Ok(self.canonical(&word))
    }

    /// Right multiplication by one generator, memoized. The input word must
    /// already be canonical, which keeps the rewriting closures small.
    fn mult_gen(&self, w: &Word, s: u8) -> Word {
        // long words only occur while probing infinite groups; caching them
        // would hold unbounded memory for no reuse
        let cacheable = w.len() <= 32;
        if cacheable {
            if let Some(hit) = self.cache.lock().unwrap().get(&(w.clone(), s)) {
                return hit.clone();
            }
        }
        let mut ws = w.clone();
        ws.push(s);
        let out = self.canonical_closure(&ws).word;
        if cacheable {
            self.cache
                .lock()
                .unwrap()
                .insert((w.clone(), s), out.clone());
        }
        out
    }

    pub fn mult(&self, a: &WElement, b: &WElement) -> WElement {
        let mut w = a.word.clone();
        for &s in &b.word {
            w = self.mult_gen(&w, s);
        }
        WElement { word: w }
    }

    pub fn inverse(&self, a: &WElement) -> WElement {
        let mut w = Vec::new();
        for &s in a.word.iter().rev() {
            w = self.mult_gen(&w, s);
        }
        WElement { word: w }
    }

    pub fn lengths_add(&self, a: &WElement, b: &WElement) -> bool {
        self.mult(a, b).length() == a.length() + b.length()
    }

    pub fn generator(&self, s: u8) -> WElement {
        WElement { word: vec![s] }
    }

    /// All elements of the parabolic W_I, or None if the guard trips.
    fn closure(&self, gens: &[u8], guard: usize) -> Option<Vec<WElement>> {
        let mut seen: HashSet<WElement> = HashSet::new();
        let mut queue: VecDeque<WElement> = VecDeque::new();
        let id = WElement::identity();
        seen.insert(id.clone());
        queue.push_back(id);
        // in an infinite group reduced words grow without bound, so a length
        // cap detects non-sphericity long before the element-count guard
        let length_cap = 16 * gens.len().max(1);
        while let Some(w) = queue.pop_front() {
            for &s in gens {
                let ws = self.mult(&w, &self.generator(s));
                if seen.contains(&ws) {
                    continue;
                }
                if seen.len() >= guard || ws.length() > length_cap {
                    return None;
                }
                seen.insert(ws.clone());
                queue.push_back(ws);
            }
        }
        let mut out: Vec<WElement> = seen.into_iter().collect();
        out.sort_by_key(|w| (w.length(), w.word.clone()));
        Some(out)
    }

    /// All W elements when W is finite.
    pub fn all_elements(&self) -> Result<Vec<WElement>, CoxeterError> {
        let gens: Vec<u8> = (0..self.rank() as u8).collect();
        self.closure(&gens, 20_000)
            .ok_or(CoxeterError::InfiniteWithoutBound)
    }

    /// Longest element of the parabolic generated by I.
    pub fn parabolic_longest(&self, i_set: &BTreeSet<u8>) -> Result<WElement, CoxeterError> {
        let gens: Vec<u8> = i_set.iter().copied().collect();
        let all = self.closure(&gens, 100_000).ok_or(CoxeterError::NotSpherical)?;
        Ok(all.into_iter().max_by_key(|w| w.length()).unwrap())
    }

    pub fn is_spherical(&self, i_set: &BTreeSet<u8>) -> bool {
        let gens: Vec<u8> = i_set.iter().copied().collect();
        self.closure(&gens, 100_000).is_some()
    }

    /// w^{-1} sends the simple root of s to a positive root.
    pub fn root_stays_positive(&self, w: &WElement, s: u8) -> bool {
        self.mult(&self.generator(s), w).length() > w.length()
    }

    /// No s in I shortens w on the left.
    pub fn is_i_reduced(&self, i_set: &BTreeSet<u8>, w: &WElement) -> bool {
        i_set.iter().all(|&s| self.root_stays_positive(w, s))
    }

    /// Conjugate of the generator set: w I w^{-1}, when it lands in S.
    pub fn conjugate_set(&self, w: &WElement, i_set: &BTreeSet<u8>) -> Option<BTreeSet<u8>> {
        let winv = self.inverse(w);
        let mut out = BTreeSet::new();
        for &s in i_set {
            let c = self.mult(&self.mult(w, &self.generator(s)), &winv);
            if c.length() != 1 {
                return None;
            }
            out.insert(c.word[0]);
        }
        Some(out)
    }

    /// Elementary conjugator v(alpha, I) = w_{I + alpha} w_I in the
    /// spherical case, with J = v I v^{-1}.
    pub fn v_alpha_i(
        &self,
        alpha: u8,
        i_set: &BTreeSet<u8>,
    ) -> Result<(BTreeSet<u8>, WElement), CoxeterError> {
        assert!(!i_set.contains(&alpha));
        let mut bigger = i_set.clone();
        bigger.insert(alpha);
        if !self.is_spherical(&bigger) {
            return Err(CoxeterError::InfiniteDifference);
        }
        let w_big = self.parabolic_longest(&bigger)?;
        let w_i = self.parabolic_longest(i_set)?;
        let v = self.mult(&w_big, &w_i);
        let j = self
            .conjugate_set(&v, i_set)
            .expect("v conjugates I into I + alpha");
        Ok((j, v))
    }
}

/// Germ lift of W: elements are group elements, product defined iff lengths
/// add and the product stays in the carrier.
pub struct LiftGerm {
    pub germ: GermTable,
    pub elements: Vec<WElement>,
    /// true when the carrier was cut off by a length bound
    pub truncated: bool,
}

impl LiftGerm {
    pub fn element_of(&self, germ_elem: crate::germ::ElemId) -> &WElement {
        &self.elements[germ_elem.index()]
    }

    pub fn find(&self, w: &WElement) -> Option<crate::germ::ElemId> {
        self.elements
            .iter()
            .position(|x| x == w)
            .map(|i| crate::germ::ElemId(i as u32))
    }
}

pub fn lift_germ(cox: &CoxeterSystem, max_length: Option<usize>) -> Result<LiftGerm, CoxeterError> {
    let (carrier, truncated) = match max_length {
        None => (cox.all_elements()?, false),
        Some(bound) => {
            // breadth-first closure bounded by length
            let mut seen: HashSet<WElement> = HashSet::new();
            let mut queue: VecDeque<WElement> = VecDeque::new();
            let id = WElement::identity();
            seen.insert(id.clone());
            queue.push_back(id);
            while let Some(w) = queue.pop_front() {
                if w.length() >= bound {
                    continue;
                }
                for s in 0..cox.rank() as u8 {
                    let ws = cox.mult(&w, &cox.generator(s));
                    if ws.length() == w.length() + 1 && seen.insert(ws.clone()) {
                        queue.push_back(ws);
                    }
                }
            }
            let mut out: Vec<WElement> = seen.into_iter().collect();
            out.sort_by_key(|w| (w.length(), w.word.clone()));
            let full = cox
                .closure(&(0..cox.rank() as u8).collect::<Vec<_>>(), out.len() + 1)
                .map_or(false, |all| all.len() <= out.len());
            (out, !full)
        }
    };
    let index: HashMap<WElement, usize> = carrier
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    let elements: Vec<GermElement> = carrier
        .iter()
        .map(|w| GermElement {
            label: w.display(cox),
            source: ObjectId(0),
            target: ObjectId(0),
            is_identity: w.word.is_empty(),
        })
        .collect();
    let mut products = Vec::new();
    for (i, a) in carrier.iter().enumerate() {
        for (j, b) in carrier.iter().enumerate() {
            if a.word.is_empty() || b.word.is_empty() {
                continue;
            }
            let ab = cox.mult(a, b);
            if ab.length() == a.length() + b.length() {
                if let Some(&k) = index.get(&ab) {
                    products.push((
                        crate::germ::ElemId(i as u32),
                        crate::germ::ElemId(j as u32),
                        crate::germ::ElemId(k as u32),
                    ));
                }
            }
        }
    }
    let germ =
        GermTable::from_parts_unchecked(vec!["*".to_string()], elements, products);
    germ.validate()
        .map_err(|e| CoxeterError::BadMatrix(format!("lift germ failed validation: {e}")))?;
    Ok(LiftGerm {
        germ,
        elements: carrier,
        truncated,
    })
}

/// Maximal left divisor of `b` inside the I-parabolic submonoid, with the
/// complement: b = alpha_I(b) * omega_I(b).
pub fn alpha_i(
    lift: &LiftGerm,
    i_set: &BTreeSet<u8>,
    b: &Morphism,
) -> (Morphism, Morphism) {
    let germ = &lift.germ;
    let in_parabolic = |e: crate::germ::ElemId| -> bool {
        lift.element_of(e)
            .word
            .iter()
            .all(|s| i_set.contains(s))
    };
    let mut extracted = Morphism::identity(b.source);
    let mut rest = b.clone();
    loop {
        let head = alpha(germ, &rest);
        // divisors of the head lying in W_I form a lattice; take the max
        let cands: Vec<crate::germ::ElemId> = germ
            .left_divisors(head)
            .into_iter()
            .filter(|&d| in_parabolic(d))
            .collect();
        let u = *cands
            .iter()
            .find(|&&d| cands.iter().all(|&d2| germ.divides(d2, d)))
            .expect("I-divisors of a germ element have a maximum");
        if germ.is_identity(u) {
            break;
        }
        extracted = multiply(germ, &extracted, &from_element(germ, u)).unwrap();
        rest = left_quotient(germ, &from_element(germ, u), &rest).unwrap();
    }
    (extracted, rest)
}
