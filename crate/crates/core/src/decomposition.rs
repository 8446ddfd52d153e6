//! Path categories over a germ: the grid germs of length-n paths with their
//! column calculus, the graded padding category, and decomposition posets
//! with a homological simple-connectedness check.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::category::{
    from_element, gcd, left_quotient, multiply, normal_form, Morphism, RawPath,
};
use crate::germ::{
    check_locally_garside, ElemId, G4Strategy, GermElement, GermTable, ObjectId,
};

#[derive(Debug, Error)]
pub enum DecompositionError {
    #[error("the functor does not preserve products: {0}")]
    FNotProductPreserving(String),
    #[error("the base germ is not locally Garside on the right")]
    BaseNotTwoSided,
    #[error("no morphism between these objects")]
    NoMorphism,
    #[error("poset exceeds the vertex budget of {0}")]
    TooLarge(usize),
}

/// A length-n composable path of germ elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathObject {
    pub entries: Vec<ElemId>,
}

impl PathObject {
    pub fn display(&self, base: &GermTable) -> String {
        let parts: Vec<&str> = self.entries.iter().map(|&e| base.label(e)).collect();
        format!("({})", parts.join(","))
    }

    pub fn degree(&self) -> usize {
        self.entries.len()
    }

    /// The product of the entries as a base-category morphism.
    pub fn product(&self, base: &GermTable) -> Morphism {
        let source = base.source(self.entries[0]);
        normal_form(
            base,
            &RawPath {
                source,
                letters: self.entries.clone(),
            },
        )
    }
}

/// A germ morphism of the grid germ: a source path plus the column sequence
/// f_1..f_{n+1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridMorphism {
    pub source: PathObject,
    pub columns: Vec<ElemId>,
}

impl GridMorphism {
    pub fn identity(base: &GermTable, a: &PathObject) -> GridMorphism {
        let n = a.entries.len();
        let mut columns = Vec::with_capacity(n + 1);
        for &e in &a.entries {
            columns.push(base.identity_of(base.source(e)));
        }
        columns.push(base.identity_of(base.target(*a.entries.last().unwrap())));
        GridMorphism {
            source: a.clone(),
            columns,
        }
    }

    pub fn is_identity(&self, base: &GermTable) -> bool {
        self.columns.iter().all(|&c| base.is_identity(c))
    }

    /// The target path: b_i = f'_i f_{i+1} with a_i = f_i f'_i.
    pub fn target(&self, base: &GermTable) -> Option<PathObject> {
        let n = self.source.entries.len();
        let mut entries = Vec::with_capacity(n);
        for i in 0..n {
            let fpi = base.complement(self.columns[i], self.source.entries[i])?;
            entries.push(base.product(fpi, self.columns[i + 1])?);
        }
        Some(PathObject { entries })
    }

    pub fn display(&self, base: &GermTable) -> String {
        let cols: Vec<&str> = self.columns.iter().map(|&c| base.label(c)).collect();
        format!("{}@{}", cols.join("|"), self.source.display(base))
    }
}

/// A product-preserving germ endomap, used for the twisted variant.
#[derive(Debug, Clone)]
pub struct GermEndo {
    pub obj_map: Vec<ObjectId>,
    pub elem_map: Vec<ElemId>,
}

impl GermEndo {
    pub fn identity(base: &GermTable) -> GermEndo {
        GermEndo {
            obj_map: base.objects().collect(),
            elem_map: base.elements().collect(),
        }
    }

    pub fn validate(&self, base: &GermTable) -> Result<(), DecompositionError> {
        for e in base.elements() {
            let img = self.elem_map[e.index()];
            if base.source(img) != self.obj_map[base.source(e).index()]
                || base.target(img) != self.obj_map[base.target(e).index()]
                || base.is_identity(e) != base.is_identity(img)
            {
                return Err(DecompositionError::FNotProductPreserving(format!(
                    "element {} is not mapped compatibly",
                    base.label(e)
                )));
            }
        }
        for a in base.elements() {
            for &b in base.elements_from(base.target(a)) {
                let lhs = base.product(a, b).map(|c| self.elem_map[c.index()]);
                let rhs = base.product(self.elem_map[a.index()], self.elem_map[b.index()]);
                if lhs.is_some() && lhs != rhs {
                    return Err(DecompositionError::FNotProductPreserving(format!(
                        "product {} * {} not preserved",
                        base.label(a),
                        base.label(b)
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum PnVariant {
    Full,
    Id,
    Functor(GermEndo),
}

/// The grid germ, carrying the dictionaries back to grid data.
pub struct PnGerm {
    pub germ: GermTable,
    pub objects: Vec<PathObject>,
    pub morphisms: Vec<GridMorphism>,
    pub n: usize,
}

impl PnGerm {
    pub fn object_id(&self, a: &PathObject) -> Option<ObjectId> {
        self.objects
            .iter()
            .position(|x| x == a)
            .map(|i| ObjectId(i as u32))
    }

    pub fn morphism_id(&self, g: &GridMorphism) -> Option<ElemId> {
        self.morphisms
            .iter()
            .position(|x| x == g)
            .map(|i| ElemId(i as u32))
    }

    /// Column i (1-based up to n+1) of a category morphism, as the product
    /// of the columns of its normal-form factors.
    pub fn column(&self, base: &GermTable, m: &Morphism, i: usize) -> Morphism {
        let start = if m.factors.is_empty() {
            let a = &self.objects[m.source.index()];
            if i <= self.n {
                base.source(a.entries[i - 1])
            } else {
                base.target(*a.entries.last().unwrap())
            }
        } else {
            let g = &self.morphisms[m.factors[0].index()];
            base.source(g.columns[i - 1])
        };
        let mut out = Morphism::identity(start);
        for &f in &m.factors {
            let g = &self.morphisms[f.index()];
            out = multiply(base, &out, &from_element(base, g.columns[i - 1])).unwrap();
        }
        out
    }
}

fn enumerate_paths_of_length(base: &GermTable, n: usize) -> Vec<PathObject> {
    let mut out: Vec<Vec<ElemId>> = base.elements().map(|e| vec![e]).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for p in &out {
            let end = base.target(*p.last().unwrap());
            for &e in base.elements_from(end) {
                let mut q = p.clone();
                q.push(e);
                next.push(q);
            }
        }
        out = next;
    }
    let mut out: Vec<PathObject> = out.into_iter().map(|entries| PathObject { entries }).collect();
    out.sort();
    out
}

fn variant_allows(base: &GermTable, variant: &PnVariant, g: &GridMorphism) -> bool {
    let n = g.source.entries.len();
    match variant {
        PnVariant::Full => true,
        PnVariant::Id => base.is_identity(g.columns[0]) && base.is_identity(g.columns[n]),
        PnVariant::Functor(f) => g.columns[n] == f.elem_map[g.columns[0].index()],
    }
}

/// All grid morphisms with the given source that satisfy the variant filter.
fn grid_morphisms_from(
    base: &GermTable,
    variant: &PnVariant,
    a: &PathObject,
) -> Vec<GridMorphism> {
    let n = a.entries.len();
    // choose columns left to right; b_i must be defined as we go
    let mut partial: Vec<(Vec<ElemId>, ElemId)> = Vec::new(); // (columns so far, f'_{last})
    let first_choices: Vec<ElemId> = match variant {
        PnVariant::Id => vec![base.identity_of(base.source(a.entries[0]))],
        _ => base.left_divisors(a.entries[0]),
    };
    for f1 in first_choices {
        let fp = base.complement(f1, a.entries[0]).unwrap();
        partial.push((vec![f1], fp));
    }
    for i in 1..n {
        let mut next = Vec::new();
        for (cols, fp_prev) in &partial {
            for fi in base.left_divisors(a.entries[i]) {
                if base.product(*fp_prev, fi).is_none() {
                    continue;
                }
                let fp = base.complement(fi, a.entries[i]).unwrap();
                let mut cols2 = cols.clone();
                cols2.push(fi);
                next.push((cols2, fp));
            }
        }
        partial = next;
    }
    let mut out = Vec::new();
    for (cols, fp_last) in partial {
        let last_obj = base.target(fp_last);
        for &flast in base.elements_from(last_obj) {
            if base.product(fp_last, flast).is_none() {
                continue;
            }
            let mut columns = cols.clone();
            columns.push(flast);
            let g = GridMorphism {
                source: a.clone(),
                columns,
            };
            if variant_allows(base, variant, &g) {
                out.push(g);
            }
        }
    }
    out
}

/// Build the grid germ over a locally Garside base.
pub fn build_pn_germ(
    base: &GermTable,
    n: usize,
    variant: PnVariant,
) -> Result<PnGerm, DecompositionError> {
    assert!(n >= 1);
    if let PnVariant::Functor(f) = &variant {
        f.validate(base)?;
    }
    let mut objects = enumerate_paths_of_length(base, n);
    if let PnVariant::Functor(f) = &variant {
        objects.retain(|a| {
            base.target(*a.entries.last().unwrap())
                == f.obj_map[base.source(a.entries[0]).index()]
        });
    }
    let obj_index: HashMap<PathObject, usize> = objects
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, o)| (o, i))
        .collect();
    let mut morphisms: Vec<GridMorphism> = Vec::new();
    for a in &objects {
        for g in grid_morphisms_from(base, &variant, a) {
            let target = match g.target(base) {
                Some(t) => t,
                None => continue,
            };
            if obj_index.contains_key(&target) {
                morphisms.push(g);
            }
        }
    }
    let morph_index: HashMap<GridMorphism, usize> = morphisms
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let elements: Vec<GermElement> = morphisms
        .iter()
        .map(|g| GermElement {
            label: g.display(base),
            source: ObjectId(obj_index[&g.source] as u32),
            target: ObjectId(obj_index[&g.target(base).unwrap()] as u32),
            is_identity: g.is_identity(base),
        })
        .collect();
    // products: f: a -> b then g from b; defined when f_i g_i divides a_i
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); objects.len()];
    for (i, g) in morphisms.iter().enumerate() {
        by_source[obj_index[&g.source]].push(i);
    }
    let mut products = Vec::new();
    for (fi, f) in morphisms.iter().enumerate() {
        let b = f.target(base).unwrap();
        let bi = obj_index[&b];
        for &gi in &by_source[bi] {
            let g = &morphisms[gi];
            let mut cols = Vec::with_capacity(n + 1);
            let mut ok = true;
            for k in 0..=n {
                match base.product(f.columns[k], g.columns[k]) {
                    Some(c) => {
                        if k < n && !base.divides(c, f.source.entries[k]) {
                            ok = false;
                            break;
                        }
                        cols.push(c);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let fg = GridMorphism {
                source: f.source.clone(),
                columns: cols,
            };
            if let Some(&ci) = morph_index.get(&fg) {
                products.push((ElemId(fi as u32), ElemId(gi as u32), ElemId(ci as u32)));
            }
        }
    }
    let germ = GermTable::from_parts_unchecked(
        objects.iter().map(|o| o.display(base)).collect(),
        elements,
        products,
    );
    Ok(PnGerm {
        germ,
        objects,
        morphisms,
        n,
    })
}

/// Componentwise divisibility with the quotient columns when it holds.
pub fn grid_divides(
    base: &GermTable,
    f: &GridMorphism,
    g: &GridMorphism,
) -> Option<Vec<ElemId>> {
    if f.source != g.source {
        return None;
    }
    let mut h = Vec::with_capacity(f.columns.len());
    for (&fc, &gc) in f.columns.iter().zip(&g.columns) {
        h.push(base.complement(fc, gc)?);
    }
    Some(h)
}

/// The base is locally Garside on the right too: its mirror passes the
/// table-checkable axioms.
pub fn base_is_two_sided(base: &GermTable) -> bool {
    let report = check_locally_garside(&base.mirror(), G4Strategy::Assume);
    report.g1.passed() && report.g2.passed() && report.g3.passed()
}

/// The head of a C(P_n) morphism from the column data: gcd(f_i, s_i) in the
/// first n columns, alpha of the last column.
pub fn grid_alpha(
    base: &GermTable,
    pn: &PnGerm,
    m: &Morphism,
) -> Result<GridMorphism, DecompositionError> {
    if !base_is_two_sided(base) {
        return Err(DecompositionError::BaseNotTwoSided);
    }
    let a = &pn.objects[m.source.index()];
    let n = pn.n;
    let mut columns = Vec::with_capacity(n + 1);
    for i in 1..=n {
        let fi = pn.column(base, m, i);
        let si = from_element(base, a.entries[i - 1]);
        let g = gcd(base, &[fi, si]).expect("gcd always exists");
        let e = match g.factors.as_slice() {
            [] => base.identity_of(base.source(a.entries[i - 1])),
            [one] => *one,
            _ => unreachable!("gcd of a germ element is a germ element"),
        };
        columns.push(e);
    }
    let flast = pn.column(base, m, n + 1);
    let last = flast
        .factors
        .first()
        .copied()
        .unwrap_or_else(|| base.identity_of(flast.source));
    columns.push(last);
    Ok(GridMorphism {
        source: a.clone(),
        columns,
    })
}

/// Normal form object: the NF of the product, padded with identities.
pub fn nf_object(base: &GermTable, a: &PathObject) -> PathObject {
    let n = a.entries.len();
    let prod = a.product(base);
    let mut entries = prod.factors.clone();
    debug_assert!(entries.len() <= n);
    let pad_obj = prod.target(base);
    while entries.len() < n {
        entries.push(base.identity_of(pad_obj));
    }
    PathObject { entries }
}

/// The maximal morphism Delta_a of the identity-variant grid germ out of a.
pub fn delta_id(base: &GermTable, a: &PathObject) -> GridMorphism {
    let n = a.entries.len();
    let mut columns = vec![base.identity_of(base.source(a.entries[0]))];
    let mut fp_prev = a.entries[0];
    for i in 1..n {
        let head = crate::category::alpha2(base, fp_prev, a.entries[i]);
        let fi = base.complement(fp_prev, head).unwrap();
        columns.push(fi);
        fp_prev = base.complement(fi, a.entries[i]).unwrap();
    }
    columns.push(base.identity_of(base.target(fp_prev)));
    GridMorphism {
        source: a.clone(),
        columns,
    }
}

/// The canonical chain of Delta steps from a to nf_object(a).
pub fn unique_morphism_to_nf(base: &GermTable, a: &PathObject) -> Vec<GridMorphism> {
    let goal = nf_object(base, a);
    let mut cur = a.clone();
    let mut steps = Vec::new();
    let budget = a
        .entries
        .iter()
        .map(|&e| base.min_len(e) as usize)
        .sum::<usize>()
        * a.entries.len()
        + 1;
    let mut guard = 0usize;
    while cur != goal {
        let d = delta_id(base, &cur);
        let next = d.target(base).expect("Delta has a well-defined target");
        assert_ne!(next, cur, "Delta must make progress off the normal form");
        steps.push(d);
        cur = next;
        guard += 1;
        assert!(guard <= budget, "Delta iteration exceeded its bound");
    }
    steps
}

/// A morphism of the graded padding category: pad by k identities, then a
/// chain of identity-variant grid steps.
#[derive(Debug, Clone)]
pub struct PBulletMorphism {
    pub pad: usize,
    pub steps: Vec<GridMorphism>,
}

/// Decide existence of (and return) the unique padded morphism a -> b.
pub fn pbullet_unique_morphism(
    base: &GermTable,
    a: &PathObject,
    b: &PathObject,
) -> Result<PBulletMorphism, DecompositionError> {
    if b.degree() < a.degree() {
        return Err(DecompositionError::NoMorphism);
    }
    if a.product(base) != b.product(base) {
        return Err(DecompositionError::NoMorphism);
    }
    let k = b.degree() - a.degree();
    let mut padded = a.clone();
    let pad_obj = a.product(base).target(base);
    for _ in 0..k {
        padded.entries.push(base.identity_of(pad_obj));
    }
    // breadth-first search over degree-0 grid steps; the reachable set is
    // finite (decompositions of a fixed product at fixed degree)
    let mut prev: HashMap<PathObject, (PathObject, GridMorphism)> = HashMap::new();
    let mut queue: VecDeque<PathObject> = VecDeque::new();
    let mut seen: HashSet<PathObject> = HashSet::new();
    seen.insert(padded.clone());
    queue.push_back(padded.clone());
    while let Some(cur) = queue.pop_front() {
        if cur == *b {
            let mut steps = Vec::new();
            let mut walk = cur;
            while walk != padded {
                let (p, g) = prev[&walk].clone();
                steps.push(g);
                walk = p;
            }
            steps.reverse();
            return Ok(PBulletMorphism { pad: k, steps });
        }
        for g in grid_morphisms_from(base, &PnVariant::Id, &cur) {
            if g.is_identity(base) {
                continue;
            }
            if let Some(t) = g.target(base) {
                if seen.insert(t.clone()) {
                    prev.insert(t.clone(), (cur.clone(), g));
                    queue.push_back(t);
                }
            }
        }
    }
    Err(DecompositionError::NoMorphism)
}

// ---------------------------------------------------------------------------
// Decomposition posets

/// The poset of decompositions of g into non-identity germ elements,
/// ordered by refinement (transitive closure of single splits).
pub struct DecompositionPoset {
    pub vertices: Vec<Vec<ElemId>>,
    /// covering edges: (coarser, finer), a single split apart
    pub covers: Vec<(usize, usize)>,
}

impl DecompositionPoset {
    /// Strict comparability as a set of ordered pairs (above, below).
    pub fn comparability(&self) -> HashSet<(usize, usize)> {
        let n = self.vertices.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(c, f) in &self.covers {
            adj[c].push(f);
        }
        let mut out = HashSet::new();
        for start in 0..n {
            let mut stack = vec![start];
            let mut seen = HashSet::new();
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if seen.insert(w) {
                        out.insert((start, w));
                        stack.push(w);
                    }
                }
            }
        }
        out
    }
}

/// All decompositions of g into non-identity germ elements.
pub fn build_eg(
    base: &GermTable,
    g: &Morphism,
    vertex_budget: usize,
) -> Result<DecompositionPoset, DecompositionError> {
    assert!(!g.is_identity());
    let mut vertices: Vec<Vec<ElemId>> = Vec::new();
    // depth-first: peel a non-identity germ divisor, recurse on the quotient
    let mut stack: Vec<(Vec<ElemId>, Morphism)> = vec![(Vec::new(), g.clone())];
    while let Some((prefix, rest)) = stack.pop() {
        if rest.is_identity() {
            vertices.push(prefix);
            if vertices.len() > vertex_budget {
                return Err(DecompositionError::TooLarge(vertex_budget));
            }
            continue;
        }
        let head = crate::category::alpha(base, &rest);
        for p in base.left_divisors(head) {
            if base.is_identity(p) {
                continue;
            }
            let q = left_quotient(base, &from_element(base, p), &rest).unwrap();
            let mut pre = prefix.clone();
            pre.push(p);
            stack.push((pre, q));
        }
    }
    vertices.sort();
    vertices.dedup();
    let index: HashMap<Vec<ElemId>, usize> = vertices
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let mut covers = Vec::new();
    for (vi, v) in vertices.iter().enumerate() {
        for (pos, &part) in v.iter().enumerate() {
            for a in base.left_divisors(part) {
                if base.is_identity(a) || a == part {
                    continue;
                }
                let b = base.complement(a, part).unwrap();
                debug_assert!(!base.is_identity(b));
                let mut split = v.clone();
                split[pos] = a;
                split.insert(pos + 1, b);
                let fi = index[&split];
                covers.push((vi, fi));
            }
        }
    }
    covers.sort();
    covers.dedup();
    Ok(DecompositionPoset { vertices, covers })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityReport {
    pub connected: bool,
    pub h1_rank: usize,
    /// Some(true) when the bounded relator reduction certified trivial pi1
    pub pi1_trivial: Option<bool>,
}

/// Connectivity plus first homology of the order complex, with a cone
/// short-circuit when the poset has a greatest or least element.
pub fn check_simply_connected(poset: &DecompositionPoset, try_pi1: bool) -> ConnectivityReport {
    let n = poset.vertices.len();
    if n == 0 {
        return ConnectivityReport {
            connected: true,
            h1_rank: 0,
            pi1_trivial: Some(true),
        };
    }
    let comp = poset.comparability();
    // connectivity over the undirected comparability graph
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in &comp {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    let connected = count == n;
    // cone short-circuit: greatest or least element
    let has_extreme = (0..n).any(|x| {
        (0..n).all(|y| y == x || comp.contains(&(x, y))) // least (above all? no: (x,y) means x>y)
            || (0..n).all(|y| y == x || comp.contains(&(y, x)))
    });
    if connected && has_extreme {
        return ConnectivityReport {
            connected: true,
            h1_rank: 0,
            pi1_trivial: Some(true),
        };
    }
    // order complex: edges = comparable pairs, triangles = 3-chains
    let mut edges: Vec<(usize, usize)> = comp
        .iter()
        .map(|&(a, b)| if a < b { (a, b) } else { (b, a) })
        .collect();
    edges.sort();
    edges.dedup();
    let edge_index: HashMap<(usize, usize), usize> = edges
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    let cmp = |a: usize, b: usize| comp.contains(&(a, b)) || comp.contains(&(b, a));
    let mut triangles: Vec<(usize, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if !cmp(i, j) {
                continue;
            }
            for k in (j + 1)..n {
                if cmp(i, k) && cmp(j, k) {
                    triangles.push((i, j, k));
                }
            }
        }
    }
    // boundary ranks over the rationals via fraction-free elimination
    let d1 = boundary1(n, &edges);
    let d2 = boundary2(&edges, &edge_index, &triangles);
    let r1 = matrix_rank(d1);
    let r2 = matrix_rank(d2);
    let h1_rank = edges.len() - r1 - r2;
    let pi1_trivial = if try_pi1 && connected && h1_rank == 0 {
        pi1_certificate(n, &edges, &edge_index, &triangles)
    } else {
        None
    };
    ConnectivityReport {
        connected,
        h1_rank,
        pi1_trivial,
    }
}

fn boundary1(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; edges.len()]; n];
    for (ei, &(a, b)) in edges.iter().enumerate() {
        m[a][ei] = -1;
        m[b][ei] = 1;
    }
    m
}

fn boundary2(
    edges: &[(usize, usize)],
    edge_index: &HashMap<(usize, usize), usize>,
    triangles: &[(usize, usize, usize)],
) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; triangles.len()]; edges.len()];
    for (ti, &(a, b, c)) in triangles.iter().enumerate() {
        m[edge_index[&(b, c)]][ti] += 1;
        m[edge_index[&(a, c)]][ti] -= 1;
        m[edge_index[&(a, b)]][ti] += 1;
    }
    m
}

/// Rank by fraction-free Gaussian elimination over the integers.
fn matrix_rank(mut m: Vec<Vec<i64>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let pivot = (row..rows).find(|&r| m[r][col] != 0);
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        for r in 0..rows {
            if r == row || m[r][col] == 0 {
                continue;
            }
            let (a, b) = (m[row][col] as i128, m[r][col] as i128);
            for c in 0..cols {
                let v = a * m[r][c] as i128 - b * m[row][c] as i128;
                m[r][c] = i64::try_from(v).expect("entry overflow in rank computation");
            }
            // keep entries small
            let g = row_gcd(&m[r]);
            if g > 1 {
                for c in 0..cols {
                    m[r][c] /= g;
                }
            }
        }
        row += 1;
        rank += 1;
    }
    rank
}

fn row_gcd(row: &[i64]) -> i64 {
    let mut g = 0i64;
    for &x in row {
        g = gcd_i64(g, x.abs());
        if g == 1 {
            return 1;
        }
    }
    g.max(1)
}

fn gcd_i64(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Bounded relator reduction on the edge-path presentation of pi1: generators
/// are non-tree edges, relators come from triangles. Returns Some(true) when
/// every generator is killed, None when the bound runs out.
fn pi1_certificate(
    n: usize,
    edges: &[(usize, usize)],
    edge_index: &HashMap<(usize, usize), usize>,
    triangles: &[(usize, usize, usize)],
) -> Option<bool> {
    // spanning tree by BFS over the edge set
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ei, &(a, b)) in edges.iter().enumerate() {
        adj[a].push(ei);
        adj[b].push(ei);
    }
    let mut in_tree = vec![false; edges.len()];
    let mut visited = vec![false; n];
    let mut queue = VecDeque::new();
    visited[0] = true;
    queue.push_back(0usize);
    while let Some(v) = queue.pop_front() {
        for &ei in &adj[v] {
            let (a, b) = edges[ei];
            let w = if a == v { b } else { a };
            if !visited[w] {
                visited[w] = true;
                in_tree[ei] = true;
                queue.push_back(w);
            }
        }
    }
    if visited.iter().any(|v| !v) {
        return Some(false);
    }
    // relators: each triangle gives e(ab) e(bc) e(ac)^-1 restricted to
    // non-tree generators (tree edges are trivial in pi1)
    let gen_of = |ei: usize| -> Option<usize> { (!in_tree[ei]).then_some(ei) };
    let mut relators: Vec<Vec<(usize, bool)>> = Vec::new();
    for &(a, b, c) in triangles {
        let mut w = Vec::new();
        for (e, invert) in [
            (edge_index[&(a, b)], false),
            (edge_index[&(b, c)], false),
            (edge_index[&(a, c)], true),
        ] {
            if let Some(g) = gen_of(e) {
                w.push((g, invert));
            }
        }
        if !w.is_empty() {
            relators.push(w);
        }
    }
    let mut alive: HashSet<usize> = (0..edges.len()).filter(|&e| !in_tree[e]).collect();
    // identification map generator -> (generator, inverted)
    let mut rewrite: HashMap<usize, Option<(usize, bool)>> = HashMap::new();
    for _round in 0..1000 {
        let apply = |w: &[(usize, bool)], rw: &HashMap<usize, Option<(usize, bool)>>| {
            let mut out: Vec<(usize, bool)> = Vec::new();
            for &(g, inv) in w {
                let lit = match rw.get(&g) {
                    Some(None) => continue,
                    Some(Some((g2, flip))) => (*g2, inv ^ *flip),
                    None => (g, inv),
                };
                if let Some(&(lg, linv)) = out.last() {
                    if lg == lit.0 && linv != lit.1 {
                        out.pop();
                        continue;
                    }
                }
                out.push(lit);
            }
            out
        };
        let mut progress = false;
        let mut next = Vec::new();
        for r in &relators {
            let w = apply(r, &rewrite);
            match w.as_slice() {
                [] => {}
                [(g, _)] => {
                    rewrite.insert(*g, None);
                    alive.remove(g);
                    progress = true;
                }
                [(g1, i1), (g2, i2)] if g1 != g2 => {
                    // g1^i1 g2^i2 = 1, so g1 = g2^(inverse as needed)
                    rewrite.insert(*g1, Some((*g2, i1 == i2)));
                    alive.remove(g1);
                    progress = true;
                }
                [(g1, i1), (g2, i2)] if g1 == g2 && i1 == i2 => {
                    // g^2 = 1 does not kill g; keep the relator
                    next.push(w);
                }
                _ => next.push(w),
            }
        }
        relators = next;
        // resolve chained rewrites so classes stay canonical
        let keys: Vec<usize> = rewrite.keys().copied().collect();
        for k in keys {
            if let Some(Some((t, flip))) = rewrite.get(&k).copied() {
                match rewrite.get(&t).copied() {
                    Some(None) => {
                        rewrite.insert(k, None);
                    }
                    Some(Some((t2, flip2))) if t2 != k => {
                        rewrite.insert(k, Some((t2, flip ^ flip2)));
                    }
                    _ => {}
                }
            }
        }
        // a generator identified with another is not free; only fully
        // killed generators leave `alive`, so also drop identified ones
        alive.retain(|g| !rewrite.contains_key(g));
        if alive.is_empty() {
            return Some(true);
        }
        if !progress {
            return None;
        }
    }
    None
}
