//! Small categories without loops, cell complexes turned into scwols, edge
//! paths, maximal trees and unique tree paths.
//!
//! Identity arrows are implicit. Every stored arrow `a` has an initial
//! object `i(a)` and a terminal object `t(a)`; composition `ab` is defined
//! when `i(a) = t(b)`. For scwols built from cell complexes the initial
//! object is the bigger cell and the terminal object is the face.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::ValidationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArrowId(pub usize);

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "object {}", self.0)
    }
}

impl fmt::Display for ArrowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "arrow {}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScwolError {
    #[error("a scwol needs at least one object")]
    Empty,
    #[error("{0} is out of range")]
    UnknownObject(ObjectId),
    #[error("{0} is out of range")]
    UnknownArrow(ArrowId),
    #[error("duplicate composition entry for ({0}, {1})")]
    DuplicateComposition(usize, usize),
    #[error("malformed incidence: {0}")]
    MalformedIncidence(String),
    #[error("scwol is disconnected: {0} is unreachable from object 0")]
    DisconnectedScwol(ObjectId),
    #[error("edge path does not chain at step {0}")]
    BrokenPath(usize),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("not a functor: {0}")]
    NotAFunctor(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub id: ArrowId,
    pub initial: ObjectId,
    pub terminal: ObjectId,
}

/// A morphism of the scwol: an identity or a stored arrow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Morphism {
    Identity(ObjectId),
    Arrow(ArrowId),
}

/// Anything that can resolve arrow ids to their endpoints.
pub trait ArrowLookup {
    fn lookup(&self, id: ArrowId) -> Option<Arrow>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scwol {
    labels: Vec<String>,
    arrows: Vec<Arrow>,
    composition: BTreeMap<(ArrowId, ArrowId), ArrowId>,
}

impl Scwol {
    /// Builds a scwol from `(i, t)` pairs and `(a, b, ab)` triples. Only ids
    /// and duplicates are checked here; the axioms are checked by
    /// [`validate_scwol`].
    pub fn new(labels: Vec<String>, arrows: &[(usize, usize)], composition: &[(usize, usize, usize)]) -> Result<Self, ScwolError> {
        if labels.is_empty() {
            return Err(ScwolError::Empty);
        }
        let n = labels.len();
        let arrows: Vec<Arrow> = arrows
            .iter()
            .enumerate()
            .map(|(k, &(i, t))| {
                for o in [i, t] {
                    if o >= n {
                        return Err(ScwolError::UnknownObject(ObjectId(o)));
                    }
                }
                Ok(Arrow { id: ArrowId(k), initial: ObjectId(i), terminal: ObjectId(t) })
            })
            .collect::<Result<_, _>>()?;
        let mut table = BTreeMap::new();
        for &(a, b, ab) in composition {
            for x in [a, b, ab] {
                if x >= arrows.len() {
                    return Err(ScwolError::UnknownArrow(ArrowId(x)));
                }
            }
            if table.insert((ArrowId(a), ArrowId(b)), ArrowId(ab)).is_some() {
                return Err(ScwolError::DuplicateComposition(a, b));
            }
        }
        Ok(Scwol { labels, arrows, composition: table })
    }

    /// One object, no arrows.
    pub fn trivial() -> Self {
        Scwol { labels: vec!["*".into()], arrows: Vec::new(), composition: BTreeMap::new() }
    }

    pub fn object_count(&self) -> usize {
        self.labels.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjectId> {
        (0..self.labels.len()).map(ObjectId)
    }

    pub fn label(&self, o: ObjectId) -> &str {
        &self.labels[o.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: ArrowId) -> Result<Arrow, ScwolError> {
        self.arrows.get(a.0).copied().ok_or(ScwolError::UnknownArrow(a))
    }

    pub fn has_object(&self, o: ObjectId) -> bool {
        o.0 < self.labels.len()
    }

    pub fn initial(&self, a: ArrowId) -> ObjectId {
        self.arrows[a.0].initial
    }

    pub fn terminal(&self, a: ArrowId) -> ObjectId {
        self.arrows[a.0].terminal
    }

    pub fn compose(&self, a: ArrowId, b: ArrowId) -> Option<ArrowId> {
        self.composition.get(&(a, b)).copied()
    }

    pub fn composition_table(&self) -> impl Iterator<Item = (ArrowId, ArrowId, ArrowId)> + '_ {
        self.composition.iter().map(|(&(a, b), &ab)| (a, b, ab))
    }

    /// Pairs `(a, b)` with `i(a) = t(b)`, in lexicographic id order.
    pub fn composable_pairs(&self) -> Vec<(ArrowId, ArrowId)> {
        let mut out = Vec::new();
        for a in &self.arrows {
            for b in &self.arrows {
                if a.initial == b.terminal {
                    out.push((a.id, b.id));
                }
            }
        }
        out
    }

    pub fn ends(&self, m: Morphism) -> (ObjectId, ObjectId) {
        match m {
            Morphism::Identity(o) => (o, o),
            Morphism::Arrow(a) => (self.initial(a), self.terminal(a)),
        }
    }

    /// Composite `xy` of two morphisms (identities absorb).
    pub fn compose_morphisms(&self, x: Morphism, y: Morphism) -> Option<Morphism> {
        let (ix, _) = self.ends(x);
        let (_, ty) = self.ends(y);
        if ix != ty {
            return None;
        }
        match (x, y) {
            (Morphism::Identity(_), y) => Some(y),
            (x, Morphism::Identity(_)) => Some(x),
            (Morphism::Arrow(a), Morphism::Arrow(b)) => self.compose(a, b).map(Morphism::Arrow),
        }
    }

    /// Arrows touching `o`, in ascending id order.
    fn incident(&self, o: ObjectId) -> impl Iterator<Item = &Arrow> {
        self.arrows.iter().filter(move |a| a.initial == o || a.terminal == o)
    }
}

impl ArrowLookup for Scwol {
    fn lookup(&self, id: ArrowId) -> Option<Arrow> {
        self.arrows.get(id.0).copied()
    }
}

/// Checks both scwol axioms, closure and typing of the composition table,
/// and associativity on every composable triple.
pub fn validate_scwol(x: &Scwol) -> ValidationReport {
    let mut report = ValidationReport::new("scwol");
    report.count("loop-free", x.arrows.len());
    for a in &x.arrows {
        if a.initial == a.terminal {
            report.push("loop-free", a.id.to_string(), "stored arrow has i(a) = t(a)");
        }
    }
    for (&(a, b), &ab) in &x.composition {
        let (fa, fb, fab) = (x.arrows[a.0], x.arrows[b.0], x.arrows[ab.0]);
        if fa.initial != fb.terminal {
            report.push("typing", format!("({}, {})", a.0, b.0), "composition entry for a non-composable pair");
            continue;
        }
        if fab.initial != fb.initial || fab.terminal != fa.terminal {
            report.push(
                "typing",
                format!("({}, {})", a.0, b.0),
                format!("composite {} does not run from i(b) to t(a)", ab.0),
            );
        }
    }
    let pairs = x.composable_pairs();
    report.count("closure", pairs.len());
    for &(a, b) in &pairs {
        if x.compose(a, b).is_none() {
            if x.initial(b) == x.terminal(a) {
                report.push(
                    "loop-composite",
                    format!("({}, {})", a.0, b.0),
                    "composite of non-identity arrows would have i = t",
                );
            } else {
                report.push("closure", format!("({}, {})", a.0, b.0), "composite missing from the table");
            }
        }
    }
    let mut triples = 0;
    for &(a, b) in &pairs {
        for c in x.arrows.iter().filter(|c| c.terminal == x.initial(b)) {
            triples += 1;
            let left = x.compose(a, b).and_then(|ab| x.compose(ab, c.id));
            let right = x.compose(b, c.id).and_then(|bc| x.compose(a, bc));
            if let (Some(l), Some(r)) = (left, right) {
                if l != r {
                    report.push(
                        "associativity",
                        format!("({}, {}, {})", a.0, b.0, c.id.0),
                        format!("(ab)c = {} but a(bc) = {}", l.0, r.0),
                    );
                }
            }
        }
    }
    report.count("associativity", triples);
    report
}

/// All `(a_1, ..., a_k)` with `i(a_l) = t(a_{l+1})`.
pub fn composable_sequences(x: &Scwol, k: usize) -> Vec<Vec<ArrowId>> {
    if k == 0 {
        return Vec::new();
    }
    let mut seqs: Vec<Vec<ArrowId>> = x.arrows.iter().map(|a| vec![a.id]).collect();
    for _ in 1..k {
        let mut next = Vec::new();
        for s in &seqs {
            let last = *s.last().expect("non-empty");
            for b in x.arrows.iter().filter(|b| b.terminal == x.initial(last)) {
                let mut t = s.clone();
                t.push(b.id);
                next.push(t);
            }
        }
        seqs = next;
    }
    seqs
}

/// A directed graph (when `triangles` is empty) or a simplicial complex of
/// dimension at most two. Edges are `(tail, head)` vertex pairs; triangles
/// are vertex triples whose three sides must each appear exactly once in
/// `edges`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CellComplex {
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    pub triangles: Vec<[usize; 3]>,
}

impl CellComplex {
    pub fn digraph(vertex_count: usize, edges: Vec<(usize, usize)>) -> Self {
        CellComplex {
            vertices: (0..vertex_count).map(|v| format!("v{v}")).collect(),
            edges,
            triangles: Vec::new(),
        }
    }

    pub fn vertex_object(&self, v: usize) -> ObjectId {
        ObjectId(v)
    }

    pub fn edge_object(&self, e: usize) -> ObjectId {
        ObjectId(self.vertices.len() + e)
    }

    pub fn triangle_object(&self, f: usize) -> ObjectId {
        ObjectId(self.vertices.len() + self.edges.len() + f)
    }

    /// The arrows `edge -> tail` and `edge -> head` of edge `e`.
    pub fn edge_arrows(&self, e: usize) -> (ArrowId, ArrowId) {
        (ArrowId(2 * e), ArrowId(2 * e + 1))
    }
}

/// Barycentric subdivision as a scwol.
///
/// Objects: vertices, then edges, then triangles. Arrows: for each edge its
/// tail arrow then its head arrow; then for each triangle `f -> side_k` for
/// its three sides (in the order `{v0,v1}, {v0,v2}, {v1,v2}`) followed by
/// `f -> v0, f -> v1, f -> v2`. Every arrow runs from the bigger cell to the
/// face, and `(side -> v)(f -> side) = (f -> v)`.
pub fn complex_to_scwol(complex: &CellComplex) -> Result<Scwol, ScwolError> {
    let nv = complex.vertices.len();
    if nv == 0 {
        return Err(ScwolError::Empty);
    }
    let simplicial = !complex.triangles.is_empty();
    let mut edge_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (k, &(u, v)) in complex.edges.iter().enumerate() {
        if u >= nv || v >= nv {
            return Err(ScwolError::MalformedIncidence(format!("edge {k} names a missing vertex")));
        }
        let key = (u.min(v), u.max(v));
        if simplicial {
            if u == v {
                return Err(ScwolError::MalformedIncidence(format!("edge {k} is a loop in a simplicial complex")));
            }
            if edge_index.insert(key, k).is_some() {
                return Err(ScwolError::MalformedIncidence(format!("edge {k} duplicates an earlier edge")));
            }
        }
    }
    let ne = complex.edges.len();
    let mut labels = complex.vertices.clone();
    labels.extend((0..ne).map(|k| format!("e{k}")));
    labels.extend((0..complex.triangles.len()).map(|k| format!("f{k}")));

    let mut arrows = Vec::new();
    for (k, &(u, v)) in complex.edges.iter().enumerate() {
        arrows.push((nv + k, u));
        arrows.push((nv + k, v));
    }
    let mut composition = Vec::new();
    let mut seen = BTreeSet::new();
    for (k, tri) in complex.triangles.iter().enumerate() {
        let [a, b, c] = *tri;
        if a >= nv || b >= nv || c >= nv {
            return Err(ScwolError::MalformedIncidence(format!("triangle {k} names a missing vertex")));
        }
        if a == b || b == c || a == c {
            return Err(ScwolError::MalformedIncidence(format!("triangle {k} repeats a vertex")));
        }
        let mut sorted = [a, b, c];
        sorted.sort();
        if !seen.insert(sorted) {
            return Err(ScwolError::MalformedIncidence(format!("triangle {k} duplicates an earlier triangle")));
        }
        let f = nv + ne + k;
        let sides = [(a, b), (a, c), (b, c)];
        let mut side_arrows = Vec::new();
        for &(x, y) in &sides {
            let e = *edge_index
                .get(&(x.min(y), x.max(y)))
                .ok_or_else(|| ScwolError::MalformedIncidence(format!("triangle {k} is missing side {{{x},{y}}}")))?;
            side_arrows.push((arrows.len(), e));
            arrows.push((f, nv + e));
        }
        let mut vertex_arrows = BTreeMap::new();
        for &v in &[a, b, c] {
            vertex_arrows.insert(v, arrows.len());
            arrows.push((f, v));
        }
        for &(fe, e) in &side_arrows {
            let (u, v) = complex.edges[e];
            // arrows 2e and 2e+1 run from edge e to its tail and head
            composition.push((2 * e, fe, vertex_arrows[&u]));
            composition.push((2 * e + 1, fe, vertex_arrows[&v]));
        }
    }
    Scwol::new(labels, &arrows, &composition)
}

/// Orientation of a traversed arrow: `a⁺` runs from `t(a)` to `i(a)`,
/// `a⁻` from `i(a)` to `t(a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub arrow: ArrowId,
    pub sign: Sign,
}

impl Step {
    pub fn new(arrow: ArrowId, sign: Sign) -> Self {
        Step { arrow, sign }
    }

    /// `(from, to)` of the oriented edge.
    pub fn ends(&self, a: Arrow) -> (ObjectId, ObjectId) {
        match self.sign {
            Sign::Plus => (a.terminal, a.initial),
            Sign::Minus => (a.initial, a.terminal),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgePath {
    start: ObjectId,
    end: ObjectId,
    steps: Vec<Step>,
}

impl EdgePath {
    pub fn constant(at: ObjectId) -> Self {
        EdgePath { start: at, end: at, steps: Vec::new() }
    }

    /// Checks that consecutive oriented edges chain and derives the endpoint.
    pub fn new(arrows: &impl ArrowLookup, start: ObjectId, steps: Vec<Step>) -> Result<Self, ScwolError> {
        let mut at = start;
        for (k, s) in steps.iter().enumerate() {
            let a = arrows.lookup(s.arrow).ok_or(ScwolError::UnknownArrow(s.arrow))?;
            let (from, to) = s.ends(a);
            if from != at {
                return Err(ScwolError::BrokenPath(k));
            }
            at = to;
        }
        Ok(EdgePath { start, end: at, steps })
    }

    pub fn start(&self) -> ObjectId {
        self.start
    }

    pub fn end(&self) -> ObjectId {
        self.end
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The same path walked backwards: steps reversed, signs flipped.
    pub fn reversed(&self) -> EdgePath {
        EdgePath {
            start: self.end,
            end: self.start,
            steps: self.steps.iter().rev().map(|s| Step::new(s.arrow, s.sign.flip())).collect(),
        }
    }
}

/// Deletes backtracking pairs `(a^ε, a^-ε)` until none remain.
pub fn reduce_edge_path(p: &EdgePath) -> EdgePath {
    let mut stack: Vec<Step> = Vec::with_capacity(p.steps.len());
    for &s in &p.steps {
        match stack.last() {
            Some(top) if top.arrow == s.arrow && top.sign == s.sign.flip() => {
                stack.pop();
            }
            _ => stack.push(s),
        }
    }
    EdgePath { start: p.start, end: p.end, steps: stack }
}

/// A connected, circuit-free set of arrows together with the objects it spans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    objects: BTreeSet<ObjectId>,
    arrows: Vec<Arrow>,
}

impl Tree {
    /// Checks that `arrow_ids` (plus `objects`) form a tree inside `x`.
    pub fn from_arrows(x: &Scwol, objects: &[ObjectId], arrow_ids: &[ArrowId]) -> Result<Self, ScwolError> {
        let mut objs: BTreeSet<ObjectId> = objects.iter().copied().collect();
        let mut arrows = Vec::new();
        for &a in arrow_ids {
            let arrow = x.arrow(a)?;
            objs.insert(arrow.initial);
            objs.insert(arrow.terminal);
            arrows.push(arrow);
        }
        arrows.sort_by_key(|a| a.id);
        arrows.dedup();
        if objs.is_empty() {
            return Err(ScwolError::NotATree("no objects".into()));
        }
        if arrows.len() + 1 != objs.len() {
            return Err(ScwolError::NotATree(format!(
                "{} arrows on {} objects",
                arrows.len(),
                objs.len()
            )));
        }
        let tree = Tree { objects: objs, arrows };
        let root = *tree.objects.iter().next().expect("non-empty");
        let reached = tree.bfs(root).len();
        if reached != tree.objects.len() {
            return Err(ScwolError::NotATree("not connected".into()));
        }
        Ok(tree)
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_ids(&self) -> Vec<ArrowId> {
        self.arrows.iter().map(|a| a.id).collect()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjectId> + '_ {
        self.objects.iter().copied()
    }

    pub fn contains_arrow(&self, a: ArrowId) -> bool {
        self.arrows.binary_search_by_key(&a, |x| x.id).is_ok()
    }

    pub fn contains_object(&self, o: ObjectId) -> bool {
        self.objects.contains(&o)
    }

    /// Parent step for every object reachable from `root`: the step that
    /// enters the object, walking away from the root.
    fn bfs(&self, root: ObjectId) -> BTreeMap<ObjectId, Option<(ObjectId, Step)>> {
        let mut parent = BTreeMap::new();
        parent.insert(root, None);
        let mut queue = VecDeque::from([root]);
        while let Some(o) = queue.pop_front() {
            for a in self.arrows.iter().filter(|a| a.initial == o || a.terminal == o) {
                let (next, sign) = if a.initial == o {
                    (a.terminal, Sign::Minus)
                } else {
                    (a.initial, Sign::Plus)
                };
                if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(next) {
                    e.insert(Some((o, Step::new(a.id, sign))));
                    queue.push_back(next);
                }
            }
        }
        parent
    }
}

impl ArrowLookup for Tree {
    fn lookup(&self, id: ArrowId) -> Option<Arrow> {
        self.arrows
            .binary_search_by_key(&id, |x| x.id)
            .ok()
            .map(|k| self.arrows[k])
    }
}

/// Spanning tree by breadth-first search from object 0, trying incident
/// arrows in ascending id order.
pub fn maximal_tree(x: &Scwol) -> Result<Tree, ScwolError> {
    let mut visited = vec![false; x.object_count()];
    visited[0] = true;
    let mut queue = VecDeque::from([ObjectId(0)]);
    let mut arrows = Vec::new();
    while let Some(o) = queue.pop_front() {
        for a in x.incident(o) {
            let other = if a.initial == o { a.terminal } else { a.initial };
            if !visited[other.0] {
                visited[other.0] = true;
                arrows.push(*a);
                queue.push_back(other);
            }
        }
    }
    if let Some(k) = visited.iter().position(|&v| !v) {
        return Err(ScwolError::DisconnectedScwol(ObjectId(k)));
    }
    arrows.sort_by_key(|a| a.id);
    Ok(Tree { objects: x.objects().collect(), arrows })
}

/// The unique reduced path from `v` to `w` inside the tree.
pub fn tree_path(t: &Tree, v: ObjectId, w: ObjectId) -> Result<EdgePath, ScwolError> {
    for o in [v, w] {
        if !t.contains_object(o) {
            return Err(ScwolError::UnknownObject(o));
        }
    }
    let parent = t.bfs(v);
    let mut steps = Vec::new();
    let mut at = w;
    while let Some(Some((prev, step))) = parent.get(&at) {
        steps.push(*step);
        at = *prev;
    }
    if at != v {
        return Err(ScwolError::NotATree("objects are not connected in the tree".into()));
    }
    steps.reverse();
    EdgePath::new(t, v, steps)
}

/// A functor between scwols: an object map and, per source arrow, an image
/// that is a target arrow or an identity.
#[derive(Debug, Clone)]
pub struct ScwolFunctor<'a> {
    pub source: &'a Scwol,
    pub target: &'a Scwol,
    pub objects: Vec<ObjectId>,
    pub arrows: Vec<Morphism>,
}

impl<'a> ScwolFunctor<'a> {
    pub fn identity(x: &'a Scwol) -> Self {
        ScwolFunctor {
            source: x,
            target: x,
            objects: x.objects().collect(),
            arrows: x.arrows.iter().map(|a| Morphism::Arrow(a.id)).collect(),
        }
    }

    /// Checks that endpoints and composites are preserved.
    pub fn check(&self) -> Result<(), ScwolError> {
        let (src, dst) = (self.source, self.target);
        if self.objects.len() != src.object_count() || self.arrows.len() != src.arrows.len() {
            return Err(ScwolError::NotAFunctor("map sizes do not match the source".into()));
        }
        if let Some(&o) = self.objects.iter().find(|o| !dst.has_object(**o)) {
            return Err(ScwolError::UnknownObject(o));
        }
        for a in &src.arrows {
            let image = self.arrows[a.id.0];
            if let Morphism::Arrow(b) = image {
                dst.arrow(b)?;
            }
            let (i, t) = dst.ends(image);
            if i != self.objects[a.initial.0] || t != self.objects[a.terminal.0] {
                return Err(ScwolError::NotAFunctor(format!("{} lands on the wrong endpoints", a.id)));
            }
        }
        for (&(a, b), &ab) in &src.composition {
            let composite = dst.compose_morphisms(self.arrows[a.0], self.arrows[b.0]);
            if composite != Some(self.arrows[ab.0]) {
                return Err(ScwolError::NotAFunctor(format!("f({}{}) != f({})f({})", a.0, b.0, a.0, b.0)));
            }
        }
        Ok(())
    }
}

/// True iff, for each object `v`, the functor maps the arrows with initial
/// object `v` bijectively onto the arrows with initial object `f(v)`.
pub fn is_nondegenerate(f: &ScwolFunctor) -> Result<bool, ScwolError> {
    f.check()?;
    for v in f.source.objects() {
        let fv = f.objects[v.0];
        let mut images = BTreeSet::new();
        let mut count = 0;
        for a in f.source.arrows.iter().filter(|a| a.initial == v) {
            count += 1;
            match f.arrows[a.id.0] {
                Morphism::Identity(_) => return Ok(false),
                Morphism::Arrow(b) => {
                    images.insert(b);
                }
            }
        }
        let expected: BTreeSet<ArrowId> = f
            .target
            .arrows
            .iter()
            .filter(|b| b.initial == fv)
            .map(|b| b.id)
            .collect();
        if images.len() != count || images != expected {
            return Ok(false);
        }
    }
    Ok(true)
}
