//! Complexes of groups over a scwol and morphisms into a single group.
//!
//! `psi[a]` maps `G_{i(a)}` into `G_{t(a)}`; the twist `g_{a,b}` lives in
//! `G_{t(a)}`. Missing twists default to the identity.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::groups::{validate_hom, FiniteGroup, GroupError, GroupHom, Subgroup};
use crate::report::ValidationReport;
use crate::scwol::{validate_scwol, ArrowId, Morphism, ObjectId, Scwol, ScwolError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CogError {
    #[error(transparent)]
    Scwol(#[from] ScwolError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("inclusion violated at {arrow}: {detail}")]
    InclusionViolated { arrow: ArrowId, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexOfGroups {
    scwol: Scwol,
    groups: Vec<Arc<FiniteGroup>>,
    psi: Vec<GroupHom>,
    twists: BTreeMap<(ArrowId, ArrowId), usize>,
}

impl ComplexOfGroups {
    /// Checks sizes only; the equations are checked by [`validate_cog`].
    pub fn new(
        scwol: Scwol,
        groups: Vec<Arc<FiniteGroup>>,
        psi: Vec<GroupHom>,
        twists: BTreeMap<(ArrowId, ArrowId), usize>,
    ) -> Result<Self, CogError> {
        if groups.len() != scwol.object_count() {
            return Err(CogError::Shape(format!(
                "{} local groups for {} objects",
                groups.len(),
                scwol.object_count()
            )));
        }
        if psi.len() != scwol.arrows().len() {
            return Err(CogError::Shape(format!(
                "{} homomorphisms for {} arrows",
                psi.len(),
                scwol.arrows().len()
            )));
        }
        for &(a, b) in twists.keys() {
            scwol.arrow(a)?;
            scwol.arrow(b)?;
        }
        Ok(ComplexOfGroups { scwol, groups, psi, twists })
    }

    /// Θ(G): one object, no arrows, local group `G`.
    pub fn theta(g: Arc<FiniteGroup>) -> Self {
        ComplexOfGroups { scwol: Scwol::trivial(), groups: vec![g], psi: Vec::new(), twists: BTreeMap::new() }
    }

    /// The ordinary complex: trivial groups everywhere.
    pub fn ordinary(scwol: Scwol) -> Self {
        let one = Arc::new(FiniteGroup::trivial());
        let groups = vec![one.clone(); scwol.object_count()];
        let psi = vec![GroupHom::identity(one); scwol.arrows().len()];
        ComplexOfGroups { scwol, groups, psi, twists: BTreeMap::new() }
    }

    pub fn scwol(&self) -> &Scwol {
        &self.scwol
    }

    pub fn group(&self, o: ObjectId) -> &Arc<FiniteGroup> {
        &self.groups[o.0]
    }

    pub fn groups(&self) -> &[Arc<FiniteGroup>] {
        &self.groups
    }

    pub fn psi(&self, a: ArrowId) -> &GroupHom {
        &self.psi[a.0]
    }

    pub fn psis(&self) -> &[GroupHom] {
        &self.psi
    }

    pub fn twist(&self, a: ArrowId, b: ArrowId) -> usize {
        self.twists.get(&(a, b)).copied().unwrap_or(0)
    }

    /// Stored twists, including explicit identities.
    pub fn twists(&self) -> &BTreeMap<(ArrowId, ArrowId), usize> {
        &self.twists
    }

    /// `ψ_α(x)`, with `ψ` of an identity the identity.
    pub fn psi_morphism(&self, m: Morphism, x: usize) -> usize {
        match m {
            Morphism::Identity(_) => x,
            Morphism::Arrow(a) => self.psi[a.0].apply(x),
        }
    }

    /// `g_{α,β}`, the identity whenever one side is an identity.
    pub fn twist_morphism(&self, x: Morphism, y: Morphism) -> usize {
        match (x, y) {
            (Morphism::Arrow(a), Morphism::Arrow(b)) => self.twist(a, b),
            _ => 0,
        }
    }

    pub fn set_local_group(&mut self, o: ObjectId, g: Arc<FiniteGroup>) {
        self.groups[o.0] = g;
    }

    pub fn set_psi(&mut self, a: ArrowId, h: GroupHom) {
        self.psi[a.0] = h;
    }

    pub fn set_twist(&mut self, a: ArrowId, b: ArrowId, g: usize) {
        self.twists.insert((a, b), g);
    }

    /// Sum of local group orders.
    pub fn total_order(&self) -> usize {
        self.groups.iter().map(|g| g.order()).sum()
    }
}

/// Typing, homomorphism law and injectivity of every `ψ_a`, the Ad
/// condition on every composable pair and the cocycle condition on every
/// composable triple.
pub fn validate_cog(c: &ComplexOfGroups) -> ValidationReport {
    let mut report = ValidationReport::new("complex of groups");
    let scwol_report = validate_scwol(&c.scwol);
    let scwol_ok = scwol_report.passed();
    report.absorb(scwol_report);
    if !scwol_ok {
        return report;
    }
    let x = &c.scwol;
    let mut typed = vec![true; x.arrows().len()];
    report.count("typing", x.arrows().len());
    for a in x.arrows() {
        let h = &c.psi[a.id.0];
        let (gi, gt) = (c.group(a.initial), c.group(a.terminal));
        if !h.src().same_table(gi) || !h.dst().same_table(gt) {
            typed[a.id.0] = false;
            report.push(
                "typing",
                a.id.to_string(),
                format!(
                    "psi runs {} -> {} but the arrow needs {} -> {}",
                    h.src().name(),
                    h.dst().name(),
                    gi.name(),
                    gt.name()
                ),
            );
            continue;
        }
        let mut hr = validate_hom(h, true);
        hr.subject = format!("psi {}", a.id.0);
        report.absorb(hr);
    }
    for (&(a, b), &g) in &c.twists {
        let pair = format!("({}, {})", a.0, b.0);
        if x.initial(a) != x.terminal(b) {
            report.push("twist-typing", pair, "twist on a non-composable pair");
        } else if !c.group(x.terminal(a)).contains(g) {
            report.push("twist-typing", pair, format!("element {g} is not in G_t(a)"));
        }
    }
    let mut pairs = 0;
    for (a, b, ab) in x.composition_table() {
        if !(typed[a.0] && typed[b.0] && typed[ab.0]) {
            continue;
        }
        pairs += 1;
        let gt = c.group(x.terminal(a));
        let t = c.twist(a, b);
        if !gt.contains(t) {
            continue;
        }
        let src = c.group(x.initial(b));
        if let Some(y) = src.elements().find(|&y| {
            let lhs = gt.mul(gt.mul(t, c.psi[ab.0].apply(y)), gt.inv(t));
            lhs != c.psi[a.0].apply(c.psi[b.0].apply(y))
        }) {
            report.push(
                "ad",
                format!("({}, {})", a.0, b.0),
                format!("Ad(g_ab) psi_ab != psi_a psi_b at element {y}"),
            );
        }
    }
    report.count("ad", pairs);
    let mut triples = 0;
    for (a, b, ab) in x.composition_table() {
        for (b2, cc, bc) in x.composition_table() {
            if b2 != b {
                continue;
            }
            let (Some(abc1), Some(abc2)) = (x.compose(ab, cc), x.compose(a, bc)) else {
                continue;
            };
            if abc1 != abc2 || ![a, b, cc, ab, bc].iter().all(|z| typed[z.0]) {
                continue;
            }
            triples += 1;
            let gt = c.group(x.terminal(a));
            let Some(&moved) = c.psi[a.0].image().get(c.twist(b, cc)) else {
                continue;
            };
            let lhs = gt.try_mul(moved, c.twist(a, bc));
            let rhs = gt.try_mul(c.twist(a, b), c.twist(ab, cc));
            if let (Ok(l), Ok(r)) = (lhs, rhs) {
                if l != r {
                    report.push(
                        "cocycle",
                        format!("({}, {}, {})", a.0, b.0, cc.0),
                        format!("psi_a(g_bc) g_a,bc = {l} but g_ab g_ab,c = {r}"),
                    );
                }
            }
        }
    }
    report.count("cocycle", triples);
    report
}

/// A morphism `Λ → Θ(G)`: a homomorphism `φ_σ: G_σ → G` per object and an
/// element `φ(a) ∈ G` per arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMorphismData {
    source: Arc<ComplexOfGroups>,
    target: Arc<FiniteGroup>,
    phi_sigma: Vec<GroupHom>,
    phi_arrow: Vec<usize>,
}

impl GroupMorphismData {
    pub fn new(
        source: Arc<ComplexOfGroups>,
        target: Arc<FiniteGroup>,
        phi_sigma: Vec<GroupHom>,
        phi_arrow: Vec<usize>,
    ) -> Result<Self, CogError> {
        if phi_sigma.len() != source.groups.len() || phi_arrow.len() != source.psi.len() {
            return Err(CogError::Shape("morphism sizes do not match the complex".into()));
        }
        for (k, h) in phi_sigma.iter().enumerate() {
            if !h.src().same_table(&source.groups[k]) || !h.dst().same_table(&target) {
                return Err(CogError::Shape(format!("phi at object {k} has the wrong source or target")));
            }
        }
        if let Some(&g) = phi_arrow.iter().find(|&&g| !target.contains(g)) {
            return Err(GroupError::ElementOutOfRange { element: g, order: target.order() }.into());
        }
        Ok(GroupMorphismData { source, target, phi_sigma, phi_arrow })
    }

    pub fn source(&self) -> &Arc<ComplexOfGroups> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn phi_sigma(&self, o: ObjectId) -> &GroupHom {
        &self.phi_sigma[o.0]
    }

    pub fn phi_sigmas(&self) -> &[GroupHom] {
        &self.phi_sigma
    }

    pub fn phi_arrow(&self, a: ArrowId) -> usize {
        self.phi_arrow[a.0]
    }

    pub fn phi_arrows(&self) -> &[usize] {
        &self.phi_arrow
    }

    /// `φ(α)`, with `φ` of an identity the identity of `G`.
    pub fn phi_morphism(&self, m: Morphism) -> usize {
        match m {
            Morphism::Identity(_) => 0,
            Morphism::Arrow(a) => self.phi_arrow[a.0],
        }
    }

    pub fn with_phi_arrow(mut self, a: ArrowId, g: usize) -> Self {
        self.phi_arrow[a.0] = g;
        self
    }

    pub fn with_phi_sigma(mut self, o: ObjectId, h: GroupHom) -> Self {
        self.phi_sigma[o.0] = h;
        self
    }
}

/// Both morphism equations on every element and composable pair, and,
/// when asked, injectivity of each `φ_σ`.
pub fn validate_morphism_to_group(m: &GroupMorphismData, require_injective: bool) -> ValidationReport {
    let mut report = ValidationReport::new("morphism to group");
    let c = &m.source;
    let x = c.scwol();
    let g = &m.target;
    for (k, h) in m.phi_sigma.iter().enumerate() {
        let mut hr = validate_hom(h, require_injective);
        hr.subject = format!("phi at object {k}");
        report.absorb(hr);
    }
    let mut instances = 0;
    for a in x.arrows() {
        let (hi, ht) = (&m.phi_sigma[a.initial.0], &m.phi_sigma[a.terminal.0]);
        let pa = m.phi_arrow[a.id.0];
        let psi = c.psi(a.id);
        for y in c.group(a.initial).elements() {
            instances += 1;
            let lhs = ht.apply(psi.apply(y));
            let rhs = g.mul(g.mul(pa, hi.apply(y)), g.inv(pa));
            if lhs != rhs {
                report.push(
                    "ad",
                    a.id.to_string(),
                    format!("phi_t(psi_a({y})) = {lhs} but Ad(phi(a)) phi_i({y}) = {rhs}"),
                );
                break;
            }
        }
    }
    report.count("ad", instances);
    let mut pairs = 0;
    for (a, b, ab) in x.composition_table() {
        pairs += 1;
        let ht = &m.phi_sigma[x.terminal(a).0];
        let lhs = g.mul(ht.apply(c.twist(a, b)), m.phi_arrow[ab.0]);
        let rhs = g.mul(m.phi_arrow[a.0], m.phi_arrow[b.0]);
        if lhs != rhs {
            report.push(
                "twist",
                format!("({}, {})", a.0, b.0),
                format!("phi_t(g_ab) phi(ab) = {lhs} but phi(a) phi(b) = {rhs}"),
            );
        }
    }
    report.count("twist", pairs);
    report
}

/// The complex of subgroups `assign[σ] ⊆ G` with inclusions as `ψ` and
/// identity twists, together with the canonical morphism into `G`.
pub fn simple_cog_from_subgroups(
    g: Arc<FiniteGroup>,
    base: Scwol,
    assign: &[Subgroup],
) -> Result<(Arc<ComplexOfGroups>, GroupMorphismData), CogError> {
    if assign.len() != base.object_count() {
        return Err(CogError::Shape(format!(
            "{} subgroups for {} objects",
            assign.len(),
            base.object_count()
        )));
    }
    let groups: Vec<Arc<FiniteGroup>> = assign
        .iter()
        .enumerate()
        .map(|(k, s)| Arc::new(s.as_group(&g, format!("{}<{}", base.label(ObjectId(k)), g.name()))))
        .collect();
    let mut psi = Vec::with_capacity(base.arrows().len());
    for a in base.arrows() {
        let (si, st) = (&assign[a.initial.0], &assign[a.terminal.0]);
        if !si.is_subset_of(st) {
            return Err(CogError::InclusionViolated {
                arrow: a.id,
                detail: format!("subgroup at {} is not inside the subgroup at {}", a.initial, a.terminal),
            });
        }
        let image = si.elements().iter().map(|&y| st.local_id(y).expect("subset")).collect();
        psi.push(GroupHom::new(groups[a.initial.0].clone(), groups[a.terminal.0].clone(), image)?);
    }
    let phi_sigma = assign
        .iter()
        .enumerate()
        .map(|(k, s)| GroupHom::new(groups[k].clone(), g.clone(), s.elements().to_vec()))
        .collect::<Result<Vec<_>, _>>()?;
    let arrows = base.arrows().len();
    let complex = Arc::new(ComplexOfGroups { scwol: base, groups, psi, twists: BTreeMap::new() });
    let morphism = GroupMorphismData::new(complex.clone(), g, phi_sigma, vec![0; arrows])?;
    Ok((complex, morphism))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scwol::{complex_to_scwol, CellComplex};

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(n))
    }

    fn segment() -> Scwol {
        complex_to_scwol(&CellComplex::digraph(2, vec![(0, 1)])).unwrap()
    }

    fn fix_seg() -> (Arc<ComplexOfGroups>, GroupMorphismData) {
        let g = z(12);
        let v = g.generated_subgroup(&[3]).unwrap();
        let w = g.generated_subgroup(&[2]).unwrap();
        let e = g.subgroup(&[0, 6]).unwrap();
        simple_cog_from_subgroups(g, segment(), &[v, w, e]).unwrap()
    }

    fn fix_tri() -> ComplexOfGroups {
        let tri = CellComplex {
            vertices: vec!["v0".into(), "v1".into(), "v2".into()],
            edges: vec![(0, 1), (0, 2), (1, 2)],
            triangles: vec![[0, 1, 2]],
        };
        let mut c = ComplexOfGroups::ordinary(complex_to_scwol(&tri).unwrap());
        let z2 = z(2);
        for o in 0..7 {
            c.set_local_group(ObjectId(o), z2.clone());
        }
        for a in 0..12 {
            c.set_psi(ArrowId(a), GroupHom::identity(z2.clone()));
        }
        c.set_twist(ArrowId(0), ArrowId(6), 1);
        c
    }

    /// Independent re-evaluation of all equations, iterating over scwol
    /// pairs rather than the composition table.
    fn oracle_valid(c: &ComplexOfGroups) -> bool {
        let x = c.scwol();
        for a in x.arrows() {
            let h = c.psi(a.id);
            if !h.src().same_table(c.group(a.initial)) || !h.dst().same_table(c.group(a.terminal)) {
                return false;
            }
            let (gi, gt) = (h.src(), h.dst());
            for p in gi.elements() {
                for q in gi.elements() {
                    if h.apply(gi.mul(p, q)) != gt.mul(h.apply(p), h.apply(q)) {
                        return false;
                    }
                }
                if p != 0 && h.apply(p) == 0 {
                    return false;
                }
            }
        }
        for (a, b) in x.composable_pairs() {
            let Some(ab) = x.compose(a, b) else { return false };
            let gt = c.group(x.terminal(a));
            let t = c.twist(a, b);
            for y in c.group(x.initial(b)).elements() {
                let l = gt.mul(gt.mul(t, c.psi(ab).apply(y)), gt.inv(t));
                if l != c.psi(a).apply(c.psi(b).apply(y)) {
                    return false;
                }
            }
            for (b2, cc) in x.composable_pairs() {
                if b2 != b {
                    continue;
                }
                let bc = x.compose(b, cc).unwrap();
                let l = gt.mul(c.psi(a).apply(c.twist(b, cc)), c.twist(a, bc));
                let r = gt.mul(c.twist(a, b), c.twist(ab, cc));
                if l != r {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn ordinary_complex_passes() {
        let c = ComplexOfGroups::ordinary(segment());
        assert!(validate_cog(&c).passed());
        assert!(validate_cog(&ComplexOfGroups::theta(z(5))).passed());
    }

    #[test]
    fn twisted_triangle_passes() {
        let c = fix_tri();
        let r = validate_cog(&c);
        assert!(r.passed(), "{r}");
        assert!(oracle_valid(&c));
    }

    #[test]
    fn any_twists_pass_on_abelian_identity_triangle() {
        let base = fix_tri();
        let pairs: Vec<_> = base.scwol().composition_table().map(|(a, b, _)| (a, b)).collect();
        assert_eq!(pairs.len(), 6);
        for mask in 0..(1u32 << pairs.len()) {
            let mut c = base.clone();
            for (k, &(a, b)) in pairs.iter().enumerate() {
                c.set_twist(a, b, ((mask >> k) & 1) as usize);
            }
            let r = validate_cog(&c);
            assert!(!r.has_rule("ad"));
            assert_eq!(r.passed(), oracle_valid(&c));
        }
    }

    #[test]
    fn wrong_group_fails_typing() {
        let mut c = fix_tri();
        c.set_local_group(ObjectId(0), z(3));
        let r = validate_cog(&c);
        assert!(r.has_rule("typing"));
        assert!(!oracle_valid(&c));
    }

    #[test]
    fn non_injective_psi_fails() {
        let mut c = ComplexOfGroups::ordinary(segment());
        let (z2, z1) = (z(2), z(1));
        c.set_local_group(ObjectId(2), z2.clone());
        c.set_psi(ArrowId(0), GroupHom::trivial(z2.clone(), z1.clone()));
        c.set_psi(ArrowId(1), GroupHom::trivial(z2, z1));
        let r = validate_cog(&c);
        assert!(r.has_rule("injective"));
    }

    #[test]
    fn ad_condition_detects_bad_twist() {
        // Nonabelian: a twist outside the centralizer breaks Ad.
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let sub = s3.whole();
        let tri = CellComplex {
            vertices: vec!["a".into(), "b".into(), "c".into()],
            edges: vec![(0, 1), (0, 2), (1, 2)],
            triangles: vec![[0, 1, 2]],
        };
        let (c, _) = simple_cog_from_subgroups(s3.clone(), complex_to_scwol(&tri).unwrap(), &vec![sub; 7]).unwrap();
        let mut c = (*c).clone();
        let t = (1..6).find(|&t| s3.elements().any(|y| s3.mul(t, y) != s3.mul(y, t))).unwrap();
        c.set_twist(ArrowId(0), ArrowId(6), t);
        let r = validate_cog(&c);
        assert!(r.has_rule("ad"));
        assert!(!oracle_valid(&c));
    }

    #[test]
    fn seg_subgroups() {
        let (c, m) = fix_seg();
        assert_eq!(c.groups().iter().map(|g| g.order()).collect::<Vec<_>>(), vec![4, 6, 2]);
        assert!(validate_cog(&c).passed());
        assert!(oracle_valid(&c));
        assert!(validate_morphism_to_group(&m, true).passed());
    }

    #[test]
    fn trivial_assignment_gives_ordinary_complex() {
        let g = z(12);
        let one = g.subgroup(&[0]).unwrap();
        let (c, m) = simple_cog_from_subgroups(g, segment(), &vec![one; 3]).unwrap();
        assert!(c.groups().iter().all(|g| g.order() == 1));
        assert!(m.phi_arrows().iter().all(|&x| x == 0));
        assert!(validate_morphism_to_group(&m, true).passed());
    }

    #[test]
    fn inclusion_violation_names_arrow() {
        let g = z(12);
        let v = g.generated_subgroup(&[3]).unwrap();
        let w = g.generated_subgroup(&[4]).unwrap();
        let e = g.subgroup(&[0, 6]).unwrap();
        match simple_cog_from_subgroups(g, segment(), &[v, w, e]) {
            Err(CogError::InclusionViolated { arrow, .. }) => assert_eq!(arrow, ArrowId(1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_centralizing_arrow_element_fails_ad() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let t = 1; // a transposition generator in BFS order
        assert_eq!(s3.element_order(t), 2);
        let e = s3.subgroup(&[0, t]).unwrap();
        let whole = s3.whole();
        let (c, m) = simple_cog_from_subgroups(s3.clone(), segment(), &[whole.clone(), whole, e]).unwrap();
        assert!(validate_cog(&c).passed());
        let bad = (0..6).find(|&x| s3.mul(x, t) != s3.mul(t, x)).unwrap();
        let m = m.with_phi_arrow(ArrowId(0), bad);
        let r = validate_morphism_to_group(&m, true);
        assert_eq!(r.first().unwrap().rule, "ad");
        assert_eq!(r.first().unwrap().location, ArrowId(0).to_string());
    }

    #[test]
    fn collapsed_morphism_fails_only_injectivity() {
        let (c, _) = fix_seg();
        let g = z(12);
        let phi = |o: usize, image: Vec<usize>| GroupHom::new(c.group(ObjectId(o)).clone(), g.clone(), image).unwrap();
        let m = GroupMorphismData::new(
            c.clone(),
            g.clone(),
            vec![phi(0, vec![0, 6, 0, 6]), phi(1, vec![0, 4, 8, 0, 4, 8]), phi(2, vec![0, 0])],
            vec![0, 0],
        )
        .unwrap();
        assert!(validate_morphism_to_group(&m, false).passed());
        let r = validate_morphism_to_group(&m, true);
        assert!(r.has_rule("injective"));
        assert!(!r.has_rule("ad") && !r.has_rule("twist"));
    }
}
