//! The B.H. category of a complex of groups, one-object group categories,
//! and functors between them.
//!
//! Arrows are pairs `(g, α)` with `α` a base morphism and `g ∈ G_{t(α)}`;
//! nothing is materialized until asked for.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::cog::{validate_cog, ComplexOfGroups, GroupMorphismData};
use crate::groups::FiniteGroup;
use crate::report::ValidationReport;
use crate::scwol::{ArrowId, Morphism, ObjectId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BhError {
    #[error("invalid complex of groups: {0}")]
    InvalidComplex(String),
    #[error("{0} is not an arrow of the category")]
    UnknownArrow(BhArrow),
    #[error("{0} is out of range")]
    UnknownObject(ObjectId),
    #[error("{0} and {1} are not composable")]
    NotComposable(BhArrow, BhArrow),
    #[error("not a functor: {0}")]
    NotAFunctor(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BhArrow {
    pub element: usize,
    pub morphism: Morphism,
}

impl BhArrow {
    pub fn new(element: usize, morphism: Morphism) -> Self {
        BhArrow { element, morphism }
    }

    pub fn local(element: usize, o: ObjectId) -> Self {
        BhArrow { element, morphism: Morphism::Identity(o) }
    }

    pub fn base(a: ArrowId) -> Self {
        BhArrow { element: 0, morphism: Morphism::Arrow(a) }
    }
}

impl fmt::Display for BhArrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.morphism {
            Morphism::Identity(o) => write!(f, "({}, id:{})", self.element, o.0),
            Morphism::Arrow(a) => write!(f, "({}, {})", self.element, a.0),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MorphismRepr {
    Arrow(usize),
    Identity(String),
}

impl Serialize for BhArrow {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m = match self.morphism {
            Morphism::Arrow(a) => MorphismRepr::Arrow(a.0),
            Morphism::Identity(o) => MorphismRepr::Identity(format!("id:{}", o.0)),
        };
        (self.element, m).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BhArrow {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (element, m) = <(usize, MorphismRepr)>::deserialize(d)?;
        let morphism = match m {
            MorphismRepr::Arrow(a) => Morphism::Arrow(ArrowId(a)),
            MorphismRepr::Identity(s) => {
                let id = s
                    .strip_prefix("id:")
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| serde::de::Error::custom(format!("expected \"id:<object>\", got {s:?}")))?;
                Morphism::Identity(ObjectId(id))
            }
        };
        Ok(BhArrow { element, morphism })
    }
}

#[derive(Debug, Clone)]
pub struct BHCategory {
    complex: Arc<ComplexOfGroups>,
}

/// Validates the complex and wraps it as a category.
pub fn build_bh_category(c: Arc<ComplexOfGroups>) -> Result<BHCategory, BhError> {
    let report = validate_cog(&c);
    if !report.passed() {
        return Err(BhError::InvalidComplex(report.to_string()));
    }
    Ok(BHCategory { complex: c })
}

impl BHCategory {
    pub fn complex(&self) -> &Arc<ComplexOfGroups> {
        &self.complex
    }

    pub fn object_count(&self) -> usize {
        self.complex.scwol().object_count()
    }

    /// `(initial, terminal)` of an arrow.
    pub fn ends(&self, x: BhArrow) -> (ObjectId, ObjectId) {
        self.complex.scwol().ends(x.morphism)
    }

    pub fn contains(&self, x: BhArrow) -> bool {
        let s = self.complex.scwol();
        let ok = match x.morphism {
            Morphism::Identity(o) => s.has_object(o),
            Morphism::Arrow(a) => a.0 < s.arrows().len(),
        };
        ok && self.complex.group(self.ends(x).1).contains(x.element)
    }

    pub fn identity(&self, o: ObjectId) -> BhArrow {
        BhArrow::local(0, o)
    }

    /// Every arrow: the local arrows at each object, then each base arrow
    /// in id order; elements ascending within each block.
    pub fn arrows(&self) -> Vec<BhArrow> {
        let s = self.complex.scwol();
        let mut out = Vec::new();
        for o in s.objects() {
            out.extend(self.complex.group(o).elements().map(|g| BhArrow::local(g, o)));
        }
        for a in s.arrows() {
            out.extend(
                self.complex
                    .group(a.terminal)
                    .elements()
                    .map(|g| BhArrow::new(g, Morphism::Arrow(a.id))),
            );
        }
        out
    }

    pub fn arrow_count(&self) -> usize {
        let s = self.complex.scwol();
        let locals: usize = self.complex.total_order();
        locals + s.arrows().iter().map(|a| self.complex.group(a.terminal).order()).sum::<usize>()
    }

    /// `(g, α)(h, β) = (g · ψ_α(h) · g_{α,β}, αβ)`.
    pub fn compose(&self, x: BhArrow, y: BhArrow) -> Result<BhArrow, BhError> {
        for z in [x, y] {
            if !self.contains(z) {
                return Err(BhError::UnknownArrow(z));
            }
        }
        let c = &self.complex;
        let s = c.scwol();
        let m = s.compose_morphisms(x.morphism, y.morphism).ok_or(BhError::NotComposable(x, y))?;
        let g = c.group(s.ends(x.morphism).1);
        let element = g.mul(
            g.mul(x.element, c.psi_morphism(x.morphism, y.element)),
            c.twist_morphism(x.morphism, y.morphism),
        );
        Ok(BhArrow::new(element, m))
    }

    /// All pairs `(x, y)` with `i(x) = t(y)`.
    pub fn composable_pairs(&self) -> Vec<(BhArrow, BhArrow)> {
        let arrows = self.arrows();
        let mut by_terminal: BTreeMap<ObjectId, Vec<BhArrow>> = BTreeMap::new();
        for &y in &arrows {
            by_terminal.entry(self.ends(y).1).or_default().push(y);
        }
        let mut out = Vec::new();
        for &x in &arrows {
            if let Some(ys) = by_terminal.get(&self.ends(x).0) {
                out.extend(ys.iter().map(|&y| (x, y)));
            }
        }
        out
    }

    /// The full table `(x, y, xy)`.
    pub fn composition_table(&self) -> Vec<(BhArrow, BhArrow, BhArrow)> {
        self.composable_pairs()
            .into_iter()
            .map(|(x, y)| (x, y, self.compose(x, y).expect("composable pair of a valid category")))
            .collect()
    }
}

pub fn compose_bh(cat: &BHCategory, x: BhArrow, y: BhArrow) -> Result<BhArrow, BhError> {
    cat.compose(x, y)
}

/// Exhaustive associativity and identity laws.
pub fn check_category_laws(cat: &BHCategory) -> ValidationReport {
    let mut report = ValidationReport::new("B.H. category");
    let arrows = cat.arrows();
    report.count("identity", arrows.len());
    for &x in &arrows {
        let (i, t) = cat.ends(x);
        let left = cat.compose(cat.identity(t), x);
        let right = cat.compose(x, cat.identity(i));
        if left != Ok(x) || right != Ok(x) {
            report.push("identity", x.to_string(), "identity does not absorb");
        }
    }
    let pairs = cat.composable_pairs();
    let mut triples = 0;
    for &(x, y) in &pairs {
        let xy = cat.compose(x, y).expect("composable");
        for z in arrows.iter().copied().filter(|&z| cat.ends(z).1 == cat.ends(y).0) {
            triples += 1;
            let left = cat.compose(xy, z);
            let right = cat.compose(y, z).and_then(|yz| cat.compose(x, yz));
            if left != right {
                report.push("associativity", format!("{x} {y} {z}"), "(xy)z != x(yz)");
            }
        }
    }
    report.count("associativity", triples);
    report
}

/// The one-object category of a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupCategory {
    group: Arc<FiniteGroup>,
}

impl GroupCategory {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn arrow_count(&self) -> usize {
        self.group.order()
    }

    pub fn compose(&self, x: usize, y: usize) -> usize {
        self.group.mul(x, y)
    }

    pub fn identity(&self) -> usize {
        0
    }
}

pub fn group_category(g: Arc<FiniteGroup>) -> GroupCategory {
    GroupCategory { group: g }
}

/// The full subcategory on `σ`, identified with the group category of
/// `G_σ` via `(g, 1_σ) ↔ g`.
pub fn full_subcategory(cat: &BHCategory, o: ObjectId) -> Result<GroupCategory, BhError> {
    if !cat.complex.scwol().has_object(o) {
        return Err(BhError::UnknownObject(o));
    }
    Ok(group_category(cat.complex.group(o).clone()))
}

/// `φ_{t(α)}(g) · φ(α)`.
pub fn cat_to_hat_image(m: &GroupMorphismData, x: BhArrow) -> Result<usize, BhError> {
    let c = m.source();
    let s = c.scwol();
    let valid = match x.morphism {
        Morphism::Identity(o) => s.has_object(o),
        Morphism::Arrow(a) => a.0 < s.arrows().len(),
    };
    if !valid {
        return Err(BhError::UnknownArrow(x));
    }
    let t = s.ends(x.morphism).1;
    if !c.group(t).contains(x.element) {
        return Err(BhError::UnknownArrow(x));
    }
    let g = m.target();
    Ok(g.mul(m.phi_sigma(t).apply(x.element), m.phi_morphism(x.morphism)))
}

/// A functor between B.H. categories, as an object map and a full arrow
/// table. Group categories enter as `Θ(G)`.
#[derive(Debug, Clone)]
pub struct BhFunctor {
    source: Arc<ComplexOfGroups>,
    target: Arc<ComplexOfGroups>,
    objects: Vec<ObjectId>,
    arrows: BTreeMap<BhArrow, BhArrow>,
}

impl BhFunctor {
    pub fn new(
        source: Arc<ComplexOfGroups>,
        target: Arc<ComplexOfGroups>,
        objects: Vec<ObjectId>,
        arrows: BTreeMap<BhArrow, BhArrow>,
    ) -> Result<Self, BhError> {
        let f = BhFunctor { source, target, objects, arrows };
        let src = BHCategory { complex: f.source.clone() };
        let dst = BHCategory { complex: f.target.clone() };
        if f.objects.len() != src.object_count() {
            return Err(BhError::NotAFunctor("object map has the wrong length".into()));
        }
        if let Some(&o) = f.objects.iter().find(|&&o| !dst.complex.scwol().has_object(o)) {
            return Err(BhError::UnknownObject(o));
        }
        for x in src.arrows() {
            let y = *f.arrows.get(&x).ok_or(BhError::UnknownArrow(x))?;
            if !dst.contains(y) {
                return Err(BhError::UnknownArrow(y));
            }
        }
        Ok(f)
    }

    pub fn identity(c: Arc<ComplexOfGroups>) -> Self {
        let cat = BHCategory { complex: c.clone() };
        let arrows = cat.arrows().into_iter().map(|x| (x, x)).collect();
        BhFunctor { source: c.clone(), target: c.clone(), objects: c.scwol().objects().collect(), arrows }
    }

    /// `Θ(G_σ) → CΛ`, `g ↦ (g, 1_σ)`.
    pub fn subcategory_inclusion(c: Arc<ComplexOfGroups>, o: ObjectId) -> Result<Self, BhError> {
        if !c.scwol().has_object(o) {
            return Err(BhError::UnknownObject(o));
        }
        let g = c.group(o).clone();
        let arrows = g
            .elements()
            .map(|x| (BhArrow::local(x, ObjectId(0)), BhArrow::local(x, o)))
            .collect();
        Ok(BhFunctor { source: Arc::new(ComplexOfGroups::theta(g)), target: c, objects: vec![o], arrows })
    }

    /// `CΛ → Θ(G)`, `(g, α) ↦ φ_{t(α)}(g) φ(α)`.
    pub fn cat_to_hat(m: &GroupMorphismData) -> Self {
        let c = m.source().clone();
        let cat = BHCategory { complex: c.clone() };
        let arrows = cat
            .arrows()
            .into_iter()
            .map(|x| (x, BhArrow::local(cat_to_hat_image(m, x).expect("arrow of the category"), ObjectId(0))))
            .collect();
        let objects = vec![ObjectId(0); c.scwol().object_count()];
        BhFunctor { source: c, target: Arc::new(ComplexOfGroups::theta(m.target().clone())), objects, arrows }
    }

    pub fn source(&self) -> &Arc<ComplexOfGroups> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ComplexOfGroups> {
        &self.target
    }

    pub fn object(&self, o: ObjectId) -> ObjectId {
        self.objects[o.0]
    }

    pub fn apply(&self, x: BhArrow) -> Result<BhArrow, BhError> {
        self.arrows.get(&x).copied().ok_or(BhError::UnknownArrow(x))
    }

    /// Endpoints, identities and composites are preserved.
    pub fn check(&self) -> ValidationReport {
        let mut report = ValidationReport::new("functor");
        let src = BHCategory { complex: self.source.clone() };
        let dst = BHCategory { complex: self.target.clone() };
        for x in src.arrows() {
            let y = self.arrows[&x];
            let (i, t) = src.ends(x);
            if dst.ends(y) != (self.objects[i.0], self.objects[t.0]) {
                report.push("endpoints", x.to_string(), format!("image {y} has the wrong endpoints"));
            }
        }
        if !report.passed() {
            return report;
        }
        for o in self.source.scwol().objects() {
            if self.arrows[&src.identity(o)] != dst.identity(self.objects[o.0]) {
                report.push("identity", o.to_string(), "identity not preserved");
            }
        }
        let pairs = src.composable_pairs();
        report.count("composition", pairs.len());
        for (x, y) in pairs {
            let xy = src.compose(x, y).expect("composable");
            let image = dst.compose(self.arrows[&x], self.arrows[&y]);
            if image != Ok(self.arrows[&xy]) {
                report.push("composition", format!("{x} {y}"), "f(xy) != f(x)f(y)");
            }
        }
        report
    }
}
