//! Finite germs: partial-product presentations of categories, with exhaustive
//! checkers for the locally-Garside axioms.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

/// Index into a germ's object list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectId(pub u32);

/// Index into a germ's element list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemId(pub u32);

impl ObjectId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ElemId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone)]
pub struct GermElement {
    pub label: String,
    pub source: ObjectId,
    pub target: ObjectId,
    pub is_identity: bool,
}

/// Raw description of a germ: objects, typed elements and explicit product
/// triples `(a, b, ab)`. Identity products may be omitted; they are implied.
#[derive(Debug, Clone, Default)]
pub struct GermSpec {
    pub objects: Vec<String>,
    /// (label, source index, target index, is_identity)
    pub elements: Vec<(String, usize, usize, bool)>,
    /// (a index, b index, product index), all into `elements`
    pub products: Vec<(usize, usize, usize)>,
}

#[derive(Debug, Error)]
pub enum GermError {
    #[error("malformed germ spec: {0}")]
    MalformedSpec(String),
    #[error("germ axiom violation: {0}")]
    GermAxiomViolation(String),
}

/// A finite germ: immutable after construction.
#[derive(Debug, Clone)]
pub struct GermTable {
    object_labels: Vec<String>,
    elements: Vec<GermElement>,
    /// identity element of each object
    identities: Vec<ElemId>,
    /// sparse product table over non-identity pairs
    product: HashMap<(ElemId, ElemId), ElemId>,
    by_source: Vec<Vec<ElemId>>,
    by_target: Vec<Vec<ElemId>>,
    /// minimal atom-word length per element (identities 0); display key
    min_len: Vec<u32>,
}

impl GermTable {
    pub fn object_count(&self) -> usize {
        self.object_labels.len()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, e: ElemId) -> &GermElement {
        &self.elements[e.index()]
    }

    pub fn elements(&self) -> impl Iterator<Item = ElemId> + '_ {
        (0..self.elements.len()).map(|i| ElemId(i as u32))
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjectId> + '_ {
        (0..self.object_labels.len()).map(|i| ObjectId(i as u32))
    }

    pub fn object_label(&self, o: ObjectId) -> &str {
        &self.object_labels[o.index()]
    }

    pub fn label(&self, e: ElemId) -> &str {
        &self.elements[e.index()].label
    }

    pub fn source(&self, e: ElemId) -> ObjectId {
        self.elements[e.index()].source
    }

    pub fn target(&self, e: ElemId) -> ObjectId {
        self.elements[e.index()].target
    }

    pub fn is_identity(&self, e: ElemId) -> bool {
        self.elements[e.index()].is_identity
    }

    pub fn identity_of(&self, o: ObjectId) -> ElemId {
        self.identities[o.index()]
    }

    pub fn elements_from(&self, o: ObjectId) -> &[ElemId] {
        &self.by_source[o.index()]
    }

    pub fn elements_to(&self, o: ObjectId) -> &[ElemId] {
        &self.by_target[o.index()]
    }

    pub fn min_len(&self, e: ElemId) -> u32 {
        self.min_len[e.index()]
    }

    /// Display ordering: (minimal expression length, id).
    pub fn sort_for_display(&self, elems: &mut [ElemId]) {
        elems.sort_by_key(|&e| (self.min_len[e.index()], e));
    }

    pub fn find_by_label(&self, label: &str) -> Option<ElemId> {
        self.elements()
            .find(|&e| self.elements[e.index()].label == label)
    }

    pub fn find_object_by_label(&self, label: &str) -> Option<ObjectId> {
        self.objects()
            .find(|&o| self.object_labels[o.index()] == label)
    }

    /// The partial product. Identity laws are implicit: `1 * a = a`,
    /// `a * 1 = a` whenever the objects match.
    pub fn product(&self, a: ElemId, b: ElemId) -> Option<ElemId> {
        if self.target(a) != self.source(b) {
            return None;
        }
        if self.is_identity(a) {
            return Some(b);
        }
        if self.is_identity(b) {
            return Some(a);
        }
        self.product.get(&(a, b)).copied()
    }

    pub fn product_entries(&self) -> impl Iterator<Item = (ElemId, ElemId, ElemId)> + '_ {
        self.product.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    /// All `f` with `f * g = e` for some `g` (germ left divisors), including
    /// the source identity and `e` itself.
    pub fn left_divisors(&self, e: ElemId) -> Vec<ElemId> {
        let mut out: HashSet<ElemId> = HashSet::new();
        out.insert(self.identity_of(self.source(e)));
        out.insert(e);
        for (&(a, _), &c) in &self.product {
            if c == e {
                out.insert(a);
            }
        }
        let mut out: Vec<ElemId> = out.into_iter().collect();
        self.sort_for_display(&mut out);
        out
    }

    /// All `g` with `f * g = e` for some `f` (germ right divisors).
    pub fn right_divisors(&self, e: ElemId) -> Vec<ElemId> {
        let mut out: HashSet<ElemId> = HashSet::new();
        out.insert(self.identity_of(self.target(e)));
        out.insert(e);
        for (&(_, b), &c) in &self.product {
            if c == e {
                out.insert(b);
            }
        }
        let mut out: Vec<ElemId> = out.into_iter().collect();
        self.sort_for_display(&mut out);
        out
    }

    /// `f` left-divides `e` within the germ.
    pub fn divides(&self, f: ElemId, e: ElemId) -> bool {
        self.complement(f, e).is_some()
    }

    /// Some `g` with `f * g = e`, if one exists. Unique in a germ with
    /// left cancellation; the smallest id is returned otherwise.
    pub fn complement(&self, f: ElemId, e: ElemId) -> Option<ElemId> {
        if self.source(f) != self.source(e) {
            return None;
        }
        if f == e {
            return Some(self.identity_of(self.target(e)));
        }
        if self.is_identity(f) {
            return Some(e);
        }
        let mut best: Option<ElemId> = None;
        for &g in self.elements_from(self.target(f)) {
            if self.product(f, g) == Some(e) && best.map_or(true, |b| g < b) {
                best = Some(g);
            }
        }
        best
    }

    /// Non-identity elements with no proper left factor.
    pub fn atoms(&self) -> Vec<ElemId> {
        let mut out: Vec<ElemId> = self
            .elements()
            .filter(|&e| {
                !self.is_identity(e)
                    && self
                        .left_divisors(e)
                        .iter()
                        .all(|&d| d == e || self.is_identity(d))
            })
            .collect();
        self.sort_for_display(&mut out);
        out
    }

    /// The opposite germ: sources and targets swapped, `a *' b = b * a`.
    /// Right-hand-side properties of `self` are left-hand-side properties
    /// of the mirror.
    pub fn mirror(&self) -> GermTable {
        let elements = self
            .elements
            .iter()
            .map(|e| GermElement {
                label: e.label.clone(),
                source: e.target,
                target: e.source,
                is_identity: e.is_identity,
            })
            .collect();
        let product = self
            .product
            .iter()
            .map(|(&(a, b), &c)| ((b, a), c))
            .collect();
        let mut g = GermTable {
            object_labels: self.object_labels.clone(),
            elements,
            identities: self.identities.clone(),
            product,
            by_source: self.by_target.clone(),
            by_target: self.by_source.clone(),
            min_len: self.min_len.clone(),
        };
        g.recompute_min_len();
        g
    }

    fn recompute_min_len(&mut self) {
        self.min_len = compute_min_len(&self.elements, &self.product);
    }

    /// Assemble a table without running the axiom checks. For germs built by
    /// constructions that guarantee the germ axioms (lifts, products);
    /// `validate` can still be called on the result.
    pub fn from_parts_unchecked(
        object_labels: Vec<String>,
        elements: Vec<GermElement>,
        products: Vec<(ElemId, ElemId, ElemId)>,
    ) -> GermTable {
        let mut identities = vec![None; object_labels.len()];
        for (i, e) in elements.iter().enumerate() {
            if e.is_identity {
                identities[e.source.index()] = Some(ElemId(i as u32));
            }
        }
        let identities: Vec<ElemId> = identities.into_iter().map(|i| i.unwrap()).collect();
        let mut by_source = vec![Vec::new(); object_labels.len()];
        let mut by_target = vec![Vec::new(); object_labels.len()];
        for (i, e) in elements.iter().enumerate() {
            by_source[e.source.index()].push(ElemId(i as u32));
            by_target[e.target.index()].push(ElemId(i as u32));
        }
        let product: HashMap<(ElemId, ElemId), ElemId> = products
            .into_iter()
            .filter(|&(a, b, _)| {
                !elements[a.index()].is_identity && !elements[b.index()].is_identity
            })
            .map(|(a, b, c)| ((a, b), c))
            .collect();
        let min_len = compute_min_len(&elements, &product);
        GermTable {
            object_labels,
            elements,
            identities,
            product,
            by_source,
            by_target,
            min_len,
        }
    }

    /// Re-run the structural and germ-axiom checks on an assembled table.
    pub fn validate(&self) -> Result<(), GermError> {
        validate_table(self)
    }
}

fn compute_min_len(
    elements: &[GermElement],
    product: &HashMap<(ElemId, ElemId), ElemId>,
) -> Vec<u32> {
    // identities 0; everything reachable from shorter pieces relaxes down.
    // A non-identity element with no factorization counts as a single letter.
    let mut len = vec![u32::MAX; elements.len()];
    for (i, e) in elements.iter().enumerate() {
        len[i] = if e.is_identity { 0 } else { 1 };
    }
    // atoms are exactly the elements with no proper factorization; composite
    // elements get the minimal sum over factorizations into atoms.
    let mut proper_composite = vec![false; elements.len()];
    for (&(a, b), &c) in product {
        if a != c && b != c {
            proper_composite[c.index()] = true;
        }
    }
    for (i, flag) in proper_composite.iter().enumerate() {
        if *flag {
            len[i] = u32::MAX;
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for (&(a, b), &c) in product {
            let (la, lb) = (len[a.index()], len[b.index()]);
            if la != u32::MAX && lb != u32::MAX {
                let s = la + lb;
                if s < len[c.index()] {
                    len[c.index()] = s;
                    changed = true;
                }
            }
        }
    }
    for l in len.iter_mut() {
        if *l == u32::MAX {
            *l = 1; // unfactorable but marked composite: treat as a letter
        }
    }
    len
}

/// Build and fully validate a germ from its description.
pub fn build_germ(spec: &GermSpec) -> Result<GermTable, GermError> {
    let n_obj = spec.objects.len();
    {
        let mut seen = HashSet::new();
        for o in &spec.objects {
            if !seen.insert(o.as_str()) {
                return Err(GermError::MalformedSpec(format!("duplicate object {o:?}")));
            }
        }
    }
    let mut seen = HashSet::new();
    for (label, src, tgt, _) in &spec.elements {
        if !seen.insert(label.as_str()) {
            return Err(GermError::MalformedSpec(format!(
                "duplicate element {label:?}"
            )));
        }
        if *src >= n_obj || *tgt >= n_obj {
            return Err(GermError::MalformedSpec(format!(
                "element {label:?} references a missing object"
            )));
        }
    }
    let elements: Vec<GermElement> = spec
        .elements
        .iter()
        .map(|(label, src, tgt, ident)| GermElement {
            label: label.clone(),
            source: ObjectId(*src as u32),
            target: ObjectId(*tgt as u32),
            is_identity: *ident,
        })
        .collect();
    // exactly one identity per object, with source = target
    let mut identities = vec![None; n_obj];
    for (i, e) in elements.iter().enumerate() {
        if e.is_identity {
            if e.source != e.target {
                return Err(GermError::MalformedSpec(format!(
                    "identity {:?} has source != target",
                    e.label
                )));
            }
            if identities[e.source.index()].replace(ElemId(i as u32)).is_some() {
                return Err(GermError::MalformedSpec(format!(
                    "two identities at object {:?}",
                    spec.objects[e.source.index()]
                )));
            }
        }
    }
    for (o, id) in identities.iter().enumerate() {
        if id.is_none() {
            return Err(GermError::MalformedSpec(format!(
                "object {:?} has no identity element",
                spec.objects[o]
            )));
        }
    }

    let mut product: HashMap<(ElemId, ElemId), ElemId> = HashMap::new();
    for &(ai, bi, ci) in &spec.products {
        let n = elements.len();
        if ai >= n || bi >= n || ci >= n {
            return Err(GermError::MalformedSpec(
                "product triple references a missing element".into(),
            ));
        }
        let (a, b, c) = (ElemId(ai as u32), ElemId(bi as u32), ElemId(ci as u32));
        let (ea, eb, ec) = (&elements[ai], &elements[bi], &elements[ci]);
        if ea.target != eb.source {
            return Err(GermError::MalformedSpec(format!(
                "product {}*{}: target({}) != source({})",
                ea.label, eb.label, ea.label, eb.label
            )));
        }
        if ec.source != ea.source || ec.target != eb.target {
            return Err(GermError::MalformedSpec(format!(
                "product {}*{}={} has mismatched source/target",
                ea.label, eb.label, ec.label
            )));
        }
        // identity-involving triples must agree with the identity laws
        if ea.is_identity {
            if ci != bi {
                return Err(GermError::MalformedSpec(format!(
                    "1*{} must equal {}",
                    eb.label, eb.label
                )));
            }
            continue;
        }
        if eb.is_identity {
            if ci != ai {
                return Err(GermError::MalformedSpec(format!(
                    "{}*1 must equal {}",
                    ea.label, ea.label
                )));
            }
            continue;
        }
        if let Some(&prev) = product.get(&(a, b)) {
            if prev != c {
                return Err(GermError::MalformedSpec(format!(
                    "conflicting products for {}*{}",
                    ea.label, eb.label
                )));
            }
        }
        product.insert((a, b), c);
    }

    let table = GermTable::from_parts_unchecked(
        spec.objects.clone(),
        elements,
        product.into_iter().map(|((a, b), c)| (a, b, c)).collect(),
    );
    validate_table(&table)?;
    Ok(table)
}

/// Germ axiom (ii): `ab, (ab)c` defined iff `bc, a(bc)` defined, with equal
/// results. Checked over every triple where at least one side starts.
fn validate_table(g: &GermTable) -> Result<(), GermError> {
    let check = |a: ElemId, b: ElemId, c: ElemId| -> Result<(), GermError> {
        let lhs = g.product(a, b).and_then(|ab| g.product(ab, c));
        let rhs = g.product(b, c).and_then(|bc| g.product(a, bc));
        if lhs != rhs {
            return Err(GermError::GermAxiomViolation(format!(
                "associativity fails on ({}, {}, {}): ({}){} vs {}({})",
                g.label(a),
                g.label(b),
                g.label(c),
                lhs.map_or("undef".to_string(), |x| g.label(x).to_string()),
                "",
                "",
                rhs.map_or("undef".to_string(), |x| g.label(x).to_string()),
            )));
        }
        Ok(())
    };
    for (a, b, _) in g.product_entries() {
        for &c in g.elements_from(g.target(b)) {
            check(a, b, c)?;
        }
    }
    for (b, c, _) in g.product_entries() {
        for &a in g.elements_to(g.source(b)) {
            check(a, b, c)?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Axiom report

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail { witness: Vec<ElemId>, note: String },
    Unchecked,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum G4Strategy {
    /// Trust an ambient embedding; reported, not verified.
    Assume,
    /// Falsification search over all raw paths of letter length <= bound.
    BoundedSearch(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum G4Verdict {
    Assumed,
    SearchPassed { max_len: usize },
    Fail { witness: Vec<ElemId>, note: String },
}

impl G4Verdict {
    pub fn failed(&self) -> bool {
        matches!(self, G4Verdict::Fail { .. })
    }
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub g1: Verdict,
    pub g2: Verdict,
    pub g3: Verdict,
    pub g2_prime: Verdict,
    pub g3_prime: Verdict,
    pub g4: G4Verdict,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.g1.passed()
            && self.g2.passed()
            && self.g3.passed()
            && self.g2_prime.passed()
            && self.g3_prime.passed()
            && !self.g4.failed()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = |v: &Verdict| match v {
            Verdict::Pass => "pass".to_string(),
            Verdict::Fail { note, .. } => format!("FAIL ({note})"),
            Verdict::Unchecked => "unchecked".to_string(),
        };
        writeln!(f, "G1  {}", v(&self.g1))?;
        writeln!(f, "G2  {}", v(&self.g2))?;
        writeln!(f, "G3  {}", v(&self.g3))?;
        writeln!(f, "G2' {}", v(&self.g2_prime))?;
        writeln!(f, "G3' {}", v(&self.g3_prime))?;
        match &self.g4 {
            G4Verdict::Assumed => writeln!(f, "G4  assumed"),
            G4Verdict::SearchPassed { max_len } => {
                writeln!(f, "G4  no violation up to length {max_len}")
            }
            G4Verdict::Fail { note, .. } => writeln!(f, "G4  FAIL ({note})"),
        }
    }
}

/// Run the locally-Garside axiom checks on a finite germ.
pub fn check_locally_garside(germ: &GermTable, g4: G4Strategy) -> AxiomReport {
    AxiomReport {
        g1: check_g1(germ),
        g2: check_g2(germ, None),
        g3: check_g3(germ, None),
        g2_prime: check_g2(germ, Some(&germ.atoms())),
        g3_prime: check_g3(germ, Some(&germ.atoms())),
        g4: check_g4(germ, g4),
    }
}

/// G1 on a finite carrier: the proper left-divisibility digraph is acyclic
/// (self-loops `x*y = x` with `y != 1` included).
fn check_g1(germ: &GermTable) -> Verdict {
    let n = germ.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, b, c) in germ.product_entries() {
        if !germ.is_identity(b) {
            // a properly divides c (via b != 1)
            adj[a.index()].push(c.index());
            if a == c {
                return Verdict::Fail {
                    witness: vec![a, b],
                    note: format!(
                        "{} * {} = {} with {} != 1",
                        germ.label(a),
                        germ.label(b),
                        germ.label(a),
                        germ.label(b)
                    ),
                };
            }
        }
    }
    // cycle detection
    let mut state = vec![0u8; n]; // 0 unvisited, 1 on stack, 2 done
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        state[start] = 1;
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < adj[v].len() {
                let w = adj[v][*i];
                *i += 1;
                match state[w] {
                    0 => {
                        state[w] = 1;
                        stack.push((w, 0));
                    }
                    1 => {
                        return Verdict::Fail {
                            witness: vec![ElemId(v as u32), ElemId(w as u32)],
                            note: format!(
                                "divisibility cycle through {} and {}",
                                germ.label(ElemId(v as u32)),
                                germ.label(ElemId(w as u32))
                            ),
                        };
                    }
                    _ => {}
                }
            } else {
                state[v] = 2;
                stack.pop();
            }
        }
    }
    Verdict::Pass
}

/// Least common right multiple of `e`, `f` inside the germ, if any.
pub enum GermLcm {
    Lcm(ElemId),
    NoCommonMultiple,
    /// Common multiples exist but no least one (a G2 failure); the minimal
    /// common multiples are returned.
    NoLeast(Vec<ElemId>),
}

pub fn germ_lcm(germ: &GermTable, e: ElemId, f: ElemId) -> GermLcm {
    debug_assert_eq!(germ.source(e), germ.source(f));
    let mut common: Vec<ElemId> = germ
        .elements_from(germ.source(e))
        .iter()
        .copied()
        .filter(|&m| germ.divides(e, m) && germ.divides(f, m))
        .collect();
    if common.is_empty() {
        return GermLcm::NoCommonMultiple;
    }
    if let Some(&least) = common
        .iter()
        .find(|&&m| common.iter().all(|&m2| germ.divides(m, m2)))
    {
        GermLcm::Lcm(least)
    } else {
        common.retain(|&m| {
            germ.elements_from(germ.source(e)).iter().all(|&m2| {
                m2 == m
                    || !(germ.divides(e, m2) && germ.divides(f, m2) && germ.divides(m2, m))
            })
        });
        germ.sort_for_display(&mut common);
        GermLcm::NoLeast(common)
    }
}

/// Greatest common left divisor of a nonempty family with common source.
pub fn germ_gcd(germ: &GermTable, family: &[ElemId]) -> ElemId {
    assert!(!family.is_empty());
    let mut common: Option<HashSet<ElemId>> = None;
    for &e in family {
        let div: HashSet<ElemId> = germ.left_divisors(e).into_iter().collect();
        common = Some(match common {
            None => div,
            Some(c) => c.intersection(&div).copied().collect(),
        });
    }
    let common = common.unwrap();
    *common
        .iter()
        .find(|&&d| common.iter().all(|&d2| germ.divides(d2, d)))
        .expect("gcd exists in a germ passing G1/G2")
}

fn check_g2(germ: &GermTable, restrict: Option<&[ElemId]>) -> Verdict {
    let pool: Vec<ElemId> = match restrict {
        Some(r) => r.to_vec(),
        None => germ.elements().collect(),
    };
    for &e in &pool {
        for &f in &pool {
            if e >= f || germ.source(e) != germ.source(f) {
                continue;
            }
            if let GermLcm::NoLeast(mins) = germ_lcm(germ, e, f) {
                let mut witness = vec![e, f];
                witness.extend(mins);
                return Verdict::Fail {
                    witness,
                    note: format!(
                        "{} and {} have common right multiples but no lcm",
                        germ.label(e),
                        germ.label(f)
                    ),
                };
            }
        }
    }
    Verdict::Pass
}

fn check_g3(germ: &GermTable, restrict: Option<&[ElemId]>) -> Verdict {
    let pool: Vec<ElemId> = match restrict {
        Some(r) => r.to_vec(),
        None => germ.elements().collect(),
    };
    for &u in &pool {
        for &v in &pool {
            if u > v || germ.source(u) != germ.source(v) {
                continue;
            }
            let delta = match germ_lcm(germ, u, v) {
                GermLcm::Lcm(d) => d,
                _ => continue,
            };
            for &x in germ.elements_to(germ.source(u)) {
                if germ.product(x, u).is_some()
                    && germ.product(x, v).is_some()
                    && germ.product(x, delta).is_none()
                {
                    return Verdict::Fail {
                        witness: vec![u, v, x, delta],
                        note: format!(
                            "x={} with xu, xv in P but x*lcm({},{}) undefined",
                            germ.label(x),
                            germ.label(u),
                            germ.label(v)
                        ),
                    };
                }
            }
        }
    }
    Verdict::Pass
}

/// G4 falsification: union-find over raw paths of bounded length, closed
/// under contraction/expansion moves, then scan for `zx ~ zy` with `x != y`.
fn check_g4(germ: &GermTable, strategy: G4Strategy) -> G4Verdict {
    let bound = match strategy {
        G4Strategy::Assume => return G4Verdict::Assumed,
        G4Strategy::BoundedSearch(l) => l,
    };
    let paths = enumerate_paths(germ, bound);
    let uf = path_equivalence(germ, &paths, bound);
    let index: HashMap<&[ElemId], usize> = paths
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let mut uf = uf;
    for (zi, z) in paths.iter().enumerate() {
        if z.len() + 1 > bound {
            continue;
        }
        let end = match z.last() {
            Some(&e) => germ.target(e),
            None => continue, // empty paths handled below per-object
        };
        let ext: Vec<ElemId> = germ
            .elements_from(end)
            .iter()
            .copied()
            .filter(|&x| !germ.is_identity(x))
            .collect();
        for (i, &x) in ext.iter().enumerate() {
            for &y in &ext[i + 1..] {
                let mut px = z.clone();
                px.push(x);
                let mut py = z.clone();
                py.push(y);
                let (ix, iy) = (index[px.as_slice()], index[py.as_slice()]);
                if uf.find(ix) == uf.find(iy) {
                    let mut witness = z.clone();
                    witness.push(x);
                    witness.push(y);
                    let _ = zi;
                    return G4Verdict::Fail {
                        witness,
                        note: format!(
                            "z{} = z{} with {} != {}",
                            germ.label(x),
                            germ.label(y),
                            germ.label(x),
                            germ.label(y)
                        ),
                    };
                }
            }
        }
    }
    G4Verdict::SearchPassed { max_len: bound }
}

/// All composable paths of non-identity elements of length <= bound,
/// plus the empty path (once; object-ambiguous but harmless here).
fn enumerate_paths(germ: &GermTable, bound: usize) -> Vec<Vec<ElemId>> {
    let mut out: Vec<Vec<ElemId>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<ElemId>> = vec![Vec::new()];
    for _ in 0..bound {
        let mut next = Vec::new();
        for p in &frontier {
            let starts: Vec<ElemId> = match p.last() {
                Some(&e) => germ.elements_from(germ.target(e)).to_vec(),
                None => germ.elements().collect(),
            };
            for x in starts {
                if germ.is_identity(x) {
                    continue;
                }
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Equivalence classes of the given paths under single contraction moves
/// (expansion is the reverse edge, so one direction suffices).
fn path_equivalence(germ: &GermTable, paths: &[Vec<ElemId>], _bound: usize) -> UnionFind {
    let index: HashMap<&[ElemId], usize> = paths
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let mut uf = UnionFind::new(paths.len());
    for (i, p) in paths.iter().enumerate() {
        for pos in 0..p.len().saturating_sub(1) {
            if let Some(c) = germ.product(p[pos], p[pos + 1]) {
                let mut q = Vec::with_capacity(p.len() - 1);
                q.extend_from_slice(&p[..pos]);
                if !germ.is_identity(c) {
                    q.push(c);
                }
                q.extend_from_slice(&p[pos + 2..]);
                if let Some(&j) = index.get(q.as_slice()) {
                    uf.union(i, j);
                }
            }
        }
    }
    uf
}

/// Public access to the bounded path-rewriting closure, used by oracle tests:
/// returns (paths, class id per path).
pub fn bounded_path_classes(germ: &GermTable, bound: usize) -> (Vec<Vec<ElemId>>, Vec<usize>) {
    let paths = enumerate_paths(germ, bound);
    let mut uf = path_equivalence(germ, &paths, bound);
    let classes = (0..paths.len()).map(|i| uf.find(i)).collect();
    (paths, classes)
}

/// Sanity check: no pair `x != 1` with `x*y = y` in the table.
pub fn weak_right_cancellation_witness(germ: &GermTable) -> Option<(ElemId, ElemId)> {
    germ.product_entries()
        .find(|&(a, b, c)| c == b && !germ.is_identity(a))
        .map(|(a, b, _)| (a, b))
}

// ---------------------------------------------------------------------------
// Subgerms and fixed points

#[derive(Debug, Error)]
pub enum SubgermError {
    #[error("subgerm not closed: {0}")]
    NotClosed(String),
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),
}

#[derive(Debug, Clone)]
pub struct Subgerm {
    pub germ: GermTable,
    /// new element id -> ambient element id
    pub elem_map: Vec<ElemId>,
    /// new object id -> ambient object id
    pub obj_map: Vec<ObjectId>,
    pub stable_by_complement: bool,
    pub stable_by_lcm: bool,
    pub stable_by_alpha2: bool,
}

impl Subgerm {
    pub fn to_ambient(&self, e: ElemId) -> ElemId {
        self.elem_map[e.index()]
    }

    pub fn from_ambient(&self, e: ElemId) -> Option<ElemId> {
        self.elem_map
            .iter()
            .position(|&x| x == e)
            .map(|i| ElemId(i as u32))
    }
}

/// Restrict a germ to `objects` and `elements` (ambient ids). The element set
/// must contain the identities of the kept objects and be closed under the
/// partial product; stability flags are computed, not required.
pub fn subgerm(
    germ: &GermTable,
    objects: &[ObjectId],
    elements: &[ElemId],
) -> Result<Subgerm, SubgermError> {
    let obj_set: HashSet<ObjectId> = objects.iter().copied().collect();
    let elem_set: HashSet<ElemId> = elements.iter().copied().collect();
    for &e in elements {
        if !obj_set.contains(&germ.source(e)) || !obj_set.contains(&germ.target(e)) {
            return Err(SubgermError::NotClosed(format!(
                "element {} leaves the object set",
                germ.label(e)
            )));
        }
    }
    for &o in objects {
        if !elem_set.contains(&germ.identity_of(o)) {
            return Err(SubgermError::NotClosed(format!(
                "identity of {} missing",
                germ.object_label(o)
            )));
        }
    }
    for &a in elements {
        for &b in elements {
            if let Some(c) = germ.product(a, b) {
                if !elem_set.contains(&c) {
                    return Err(SubgermError::NotClosed(format!(
                        "{} * {} = {} escapes the subgerm",
                        germ.label(a),
                        germ.label(b),
                        germ.label(c)
                    )));
                }
            }
        }
    }

    // stable by complement: divisibility inside the subgerm is the ambient
    // restriction, i.e. an ambient complement can be chosen in the subgerm.
    let stable_by_complement = elements.iter().all(|&x| {
        elements.iter().all(|&y| {
            germ.source(x) != germ.source(y)
                || !germ.divides(x, y)
                || elements
                    .iter()
                    .any(|&z| elem_set.contains(&z) && germ.product(x, z) == Some(y))
        })
    });
    // stable by lcm: pairs with a common multiple in the subgerm have their
    // ambient lcm inside the subgerm.
    let mut stable_by_lcm = true;
    'lcm: for &x in elements {
        for &y in elements {
            if x >= y || germ.source(x) != germ.source(y) {
                continue;
            }
            let has_common_in_sub = elements
                .iter()
                .any(|&m| germ.divides(x, m) && germ.divides(y, m));
            if !has_common_in_sub {
                continue;
            }
            if let GermLcm::Lcm(l) = germ_lcm(germ, x, y) {
                if !elem_set.contains(&l) {
                    stable_by_lcm = false;
                    break 'lcm;
                }
            }
        }
    }
    // stable by alpha2
    let mut stable_by_alpha2 = true;
    'a2: for &x in elements {
        for &y in elements {
            if germ.target(x) != germ.source(y) {
                continue;
            }
            let a2 = crate::category::alpha2(germ, x, y);
            if !elem_set.contains(&a2) {
                stable_by_alpha2 = false;
                break 'a2;
            }
        }
    }

    let obj_map: Vec<ObjectId> = objects.to_vec();
    let elem_map: Vec<ElemId> = elements.to_vec();
    let obj_index: HashMap<ObjectId, u32> = obj_map
        .iter()
        .enumerate()
        .map(|(i, &o)| (o, i as u32))
        .collect();
    let elem_index: HashMap<ElemId, u32> = elem_map
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i as u32))
        .collect();
    let new_elements: Vec<GermElement> = elem_map
        .iter()
        .map(|&e| {
            let el = germ.element(e);
            GermElement {
                label: el.label.clone(),
                source: ObjectId(obj_index[&el.source]),
                target: ObjectId(obj_index[&el.target]),
                is_identity: el.is_identity,
            }
        })
        .collect();
    let mut products = Vec::new();
    for &a in &elem_map {
        for &b in &elem_map {
            if let Some(c) = germ.product(a, b) {
                if germ.is_identity(a) || germ.is_identity(b) {
                    continue;
                }
                products.push((
                    ElemId(elem_index[&a]),
                    ElemId(elem_index[&b]),
                    ElemId(elem_index[&c]),
                ));
            }
        }
    }
    let table = GermTable::from_parts_unchecked(
        obj_map
            .iter()
            .map(|&o| germ.object_label(o).to_string())
            .collect(),
        new_elements,
        products,
    );
    Ok(Subgerm {
        germ: table,
        elem_map,
        obj_map,
        stable_by_complement,
        stable_by_lcm,
        stable_by_alpha2,
    })
}

/// A germ automorphism: compatible bijections of objects and elements.
#[derive(Debug, Clone)]
pub struct GermAutomorphism {
    pub obj_map: Vec<ObjectId>,
    pub elem_map: Vec<ElemId>,
}

impl GermAutomorphism {
    pub fn identity(germ: &GermTable) -> Self {
        GermAutomorphism {
            obj_map: germ.objects().collect(),
            elem_map: germ.elements().collect(),
        }
    }
}

pub fn check_automorphism(
    germ: &GermTable,
    sigma: &GermAutomorphism,
) -> Result<(), SubgermError> {
    if sigma.obj_map.len() != germ.object_count() || sigma.elem_map.len() != germ.len() {
        return Err(SubgermError::NotAnAutomorphism("wrong arity".into()));
    }
    let mut seen = HashSet::new();
    for &o in &sigma.obj_map {
        if o.index() >= germ.object_count() || !seen.insert(o) {
            return Err(SubgermError::NotAnAutomorphism(
                "object map is not a bijection".into(),
            ));
        }
    }
    let mut seen = HashSet::new();
    for &e in &sigma.elem_map {
        if e.index() >= germ.len() || !seen.insert(e) {
            return Err(SubgermError::NotAnAutomorphism(
                "element map is not a bijection".into(),
            ));
        }
    }
    for e in germ.elements() {
        let img = sigma.elem_map[e.index()];
        if germ.source(img) != sigma.obj_map[germ.source(e).index()]
            || germ.target(img) != sigma.obj_map[germ.target(e).index()]
            || germ.is_identity(img) != germ.is_identity(e)
        {
            return Err(SubgermError::NotAnAutomorphism(format!(
                "element {} is not mapped compatibly",
                germ.label(e)
            )));
        }
    }
    for a in germ.elements() {
        for &b in germ.elements_from(germ.target(a)) {
            let lhs = germ
                .product(a, b)
                .map(|c| sigma.elem_map[c.index()]);
            let rhs = germ.product(sigma.elem_map[a.index()], sigma.elem_map[b.index()]);
            if lhs != rhs {
                return Err(SubgermError::NotAnAutomorphism(format!(
                    "product of {} and {} not preserved",
                    germ.label(a),
                    germ.label(b)
                )));
            }
        }
    }
    Ok(())
}

/// The subgerm of sigma-fixed objects and elements.
pub fn fixed_subgerm(
    germ: &GermTable,
    sigma: &GermAutomorphism,
) -> Result<Subgerm, SubgermError> {
    check_automorphism(germ, sigma)?;
    let objects: Vec<ObjectId> = germ
        .objects()
        .filter(|&o| sigma.obj_map[o.index()] == o)
        .collect();
    let elements: Vec<ElemId> = germ
        .elements()
        .filter(|&e| sigma.elem_map[e.index()] == e)
        .collect();
    subgerm(germ, &objects, &elements)
}
