//! Developability certificates from sheaves satisfying the dev properties.
//!
//! A maximal tree and a base object fix a sheaf path `M_σ: F(base) → F(σ)`
//! for every object. Conjugating by these paths moves the whole sheaf into
//! `GL(F(base))`, which gives `Φ_σ(g) = M_σ⁻¹ ρ_σ(g) M_σ` and
//! `Φ(a) = M_{t(a)}⁻¹ A_a M_{i(a)}`.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cog::{validate_cog, ComplexOfGroups, GroupMorphismData};
use crate::exactlin::{LinError, Matrix};
use crate::groups::{FiniteGroup, GroupHom};
use crate::report::ValidationReport;
use crate::scwol::{maximal_tree, tree_path, ArrowId, ObjectId, ScwolError, Sign, Step, Tree};
use crate::sheaf::{dev_properties_unchecked, validate_sheaf, DevProperty, DevReport, Sheaf};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DevelopError {
    #[error(transparent)]
    Scwol(#[from] ScwolError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} on the tree path is not invertible")]
    SingularPath(ArrowId),
    #[error(transparent)]
    Lin(#[from] LinError),
}

/// `A_a` for a `a⁻` step and `A_a⁻¹` for a `a⁺` step.
fn step_factor(f: &Sheaf, step: Step) -> Result<Matrix, DevelopError> {
    let m = f.arrow_matrix(step.arrow);
    match step.sign {
        Sign::Minus => Ok(m.clone()),
        Sign::Plus => m.inverse().map_err(|_| DevelopError::SingularPath(step.arrow)),
    }
}

/// Product of the step factors along `tree_path(base, w)`, last step leftmost.
pub fn sheaf_path(f: &Sheaf, t: &Tree, base: ObjectId, w: ObjectId) -> Result<Matrix, DevelopError> {
    let path = tree_path(t, base, w)?;
    let mut m = Matrix::identity(f.field(), f.dim(base));
    for &step in path.steps() {
        let factor = step_factor(f, step)?;
        if factor.cols() != m.rows() {
            return Err(DevelopError::SingularPath(step.arrow));
        }
        m = factor.mul(&m)?;
    }
    Ok(m)
}

/// All sheaf paths from one base, with their inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheafPathTable {
    base: ObjectId,
    paths: Vec<Matrix>,
    inverses: Vec<Matrix>,
}

impl SheafPathTable {
    /// Walks the tree outwards from `base`, extending each path by one factor.
    pub fn build(f: &Sheaf, t: &Tree, base: ObjectId) -> Result<Self, DevelopError> {
        let n = f.complex().scwol().object_count();
        let mut paths: Vec<Option<Matrix>> = vec![None; n];
        paths[base.0] = Some(Matrix::identity(f.field(), f.dim(base)));
        let mut queue = VecDeque::from([base]);
        while let Some(u) = queue.pop_front() {
            for a in t.arrows().iter().filter(|a| a.initial == u || a.terminal == u) {
                let (w, sign) = if a.initial == u { (a.terminal, Sign::Minus) } else { (a.initial, Sign::Plus) };
                if paths[w.0].is_some() {
                    continue;
                }
                let factor = step_factor(f, Step::new(a.id, sign))?;
                let prev = paths[u.0].as_ref().expect("visited");
                if !factor.is_square() || factor.cols() != prev.rows() {
                    return Err(DevelopError::SingularPath(a.id));
                }
                paths[w.0] = Some(factor.mul(prev)?);
                queue.push_back(w);
            }
        }
        let paths = paths
            .into_iter()
            .enumerate()
            .map(|(k, m)| m.ok_or(ScwolError::DisconnectedScwol(ObjectId(k))))
            .collect::<Result<Vec<_>, _>>()?;
        let inverses = paths.iter().map(|m| m.inverse()).collect::<Result<Vec<_>, _>>()?;
        Ok(SheafPathTable { base, paths, inverses })
    }

    pub fn base(&self) -> ObjectId {
        self.base
    }

    pub fn path(&self, o: ObjectId) -> &Matrix {
        &self.paths[o.0]
    }

    pub fn inverse(&self, o: ObjectId) -> &Matrix {
        &self.inverses[o.0]
    }
}

/// `M_σ⁻¹ ρ_σ(g) M_σ`.
pub fn local_group_image(f: &Sheaf, paths: &SheafPathTable, o: ObjectId, g: usize) -> Result<Matrix, DevelopError> {
    if !f.complex().scwol().has_object(o) || !f.complex().group(o).contains(g) {
        return Err(DevelopError::InvalidInput(format!("no element {g} at {o}")));
    }
    Ok(paths.inverse(o).mul(f.rho(o, g))?.mul(paths.path(o))?)
}

/// `M_{t(a)}⁻¹ A_a M_{i(a)}`.
pub fn arrow_element(f: &Sheaf, paths: &SheafPathTable, a: ArrowId) -> Result<Matrix, DevelopError> {
    let arrow = f.complex().scwol().arrow(a)?;
    Ok(paths.inverse(arrow.terminal).mul(f.arrow_matrix(a))?.mul(paths.path(arrow.initial))?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub family: String,
    pub instances: usize,
    pub failures: usize,
    pub passed: bool,
    pub first_counterexample: Option<String>,
}

impl TranscriptEntry {
    fn new(family: &str) -> Self {
        TranscriptEntry { family: family.into(), instances: 0, failures: 0, passed: true, first_counterexample: None }
    }

    fn record(&mut self, ok: bool, where_: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            self.passed = false;
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(where_());
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DevCertificate {
    pub tree: Vec<ArrowId>,
    pub base: ObjectId,
    pub dev_report: DevReport,
    /// `Φ_σ(g)` per object and element; empty when the paths could not be built.
    pub local_images: Vec<Vec<Matrix>>,
    /// `Φ(a)` per arrow; empty when the paths could not be built.
    pub arrow_images: Vec<Matrix>,
    pub transcript: Vec<TranscriptEntry>,
    pub verdict: bool,
    pub reason: Option<String>,
}

impl DevCertificate {
    pub fn entry(&self, family: &str) -> Option<&TranscriptEntry> {
        self.transcript.iter().find(|e| e.family == family)
    }
}

pub const E1: &str = "E1";
pub const E2: &str = "E2";
pub const E3: &str = "E3";
pub const TREE_COLLAPSE: &str = "tree-collapse";

/// Builds the certificate for `f` over `c`. Non-developable sheaves give a
/// false verdict, not an error.
pub fn develop(c: &ComplexOfGroups, f: &Sheaf) -> Result<DevCertificate, DevelopError> {
    if f.complex().as_ref() != c {
        return Err(DevelopError::InvalidInput("sheaf is over a different complex".into()));
    }
    let cog = validate_cog(c);
    if !cog.passed() {
        return Err(DevelopError::InvalidInput(cog.to_string()));
    }
    let sheaf = validate_sheaf(f);
    if !sheaf.passed() {
        return Err(DevelopError::InvalidInput(sheaf.to_string()));
    }
    let tree = maximal_tree(c.scwol())?;
    let base = ObjectId(0);
    let dev_report = dev_properties_unchecked(f);
    let mut cert = DevCertificate {
        tree: tree.arrow_ids(),
        base,
        dev_report: dev_report.clone(),
        local_images: Vec::new(),
        arrow_images: Vec::new(),
        transcript: Vec::new(),
        verdict: false,
        reason: None,
    };
    let failing = dev_report.failing();
    if failing.contains(&DevProperty::ConstantRank) || failing.contains(&DevProperty::Invertibility) {
        cert.reason = Some(format!("fails {}", failing[0]));
        return Ok(cert);
    }
    let paths = SheafPathTable::build(f, &tree, base)?;
    let s = c.scwol();
    cert.local_images = s
        .objects()
        .map(|o| c.group(o).elements().map(|g| local_group_image(f, &paths, o, g)).collect())
        .collect::<Result<_, _>>()?;
    cert.arrow_images = s.arrows().iter().map(|a| arrow_element(f, &paths, a.id)).collect::<Result<_, _>>()?;
    let phi = &cert.local_images;
    let phi_a = &cert.arrow_images;

    let mut collapse = TranscriptEntry::new(TREE_COLLAPSE);
    for &a in &cert.tree {
        collapse.record(phi_a[a.0].is_identity(), || a.to_string());
    }

    let mut e1 = TranscriptEntry::new(E1);
    for a in s.arrows() {
        let inv = phi_a[a.id.0].inverse()?;
        let psi = c.psi(a.id);
        for g in c.group(a.initial).elements() {
            let lhs = &phi[a.terminal.0][psi.apply(g)];
            let rhs = phi_a[a.id.0].mul(&phi[a.initial.0][g])?.mul(&inv)?;
            e1.record(*lhs == rhs, || format!("{}, element {g}", a.id));
        }
    }

    let mut e2 = TranscriptEntry::new(E2);
    for (a, b, ab) in s.composition_table() {
        let lhs = phi[s.terminal(a).0][c.twist(a, b)].mul(&phi_a[ab.0])?;
        let rhs = phi_a[a.0].mul(&phi_a[b.0])?;
        e2.record(lhs == rhs, || format!("({}, {})", a.0, b.0));
    }

    let mut e3 = TranscriptEntry::new(E3);
    for o in s.objects() {
        let kernel = phi[o.0].iter().enumerate().skip(1).find(|(_, m)| m.is_identity()).map(|(g, _)| g);
        e3.record(kernel.is_none(), || format!("{o}, element {}", kernel.unwrap_or(0)));
    }

    let equations_hold = e1.passed && e2.passed && e3.passed;
    cert.transcript = vec![collapse, e1, e2, e3];
    cert.verdict = dev_report.verdict() && equations_hold;
    if !cert.verdict {
        cert.reason = Some(match failing.first() {
            Some(p) => format!("fails {p}"),
            None => {
                let bad = cert.transcript.iter().find(|e| !e.passed && e.family != TREE_COLLAPSE).expect("some family failed");
                format!("fails {}", bad.family)
            }
        });
    }
    Ok(cert)
}

/// The finite matrix group generated by the certificate's images, as a
/// morphism `Λ → Θ(G)`. `None` when the closure exceeds `bound` elements or
/// the certificate has no images.
pub fn witness_morphism(
    c: &Arc<ComplexOfGroups>,
    cert: &DevCertificate,
    bound: usize,
) -> Result<Option<GroupMorphismData>, DevelopError> {
    let Some(first) = cert.local_images.first().and_then(|t| t.first()) else {
        return Ok(None);
    };
    let identity = Matrix::identity(first.field(), first.rows());
    let generators: Vec<&Matrix> = cert.local_images.iter().flatten().chain(cert.arrow_images.iter()).collect();
    let mut elements = vec![identity.clone()];
    let mut index: HashMap<Matrix, usize> = HashMap::from([(identity, 0)]);
    let mut k = 0;
    while k < elements.len() {
        for g in &generators {
            let p = elements[k].mul(g)?;
            if !index.contains_key(&p) {
                if elements.len() == bound {
                    return Ok(None);
                }
                index.insert(p.clone(), elements.len());
                elements.push(p);
            }
        }
        k += 1;
    }
    let n = elements.len();
    let mut table = vec![vec![0; n]; n];
    for (x, row) in table.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            *cell = index[&elements[x].mul(&elements[y])?];
        }
    }
    let g = Arc::new(FiniteGroup::from_table("witness", table, None).map_err(|e| DevelopError::InvalidInput(e.to_string()))?);
    let phi_sigma = c
        .scwol()
        .objects()
        .map(|o| {
            let image = cert.local_images[o.0].iter().map(|m| index[m]).collect();
            GroupHom::new(c.group(o).clone(), g.clone(), image)
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| DevelopError::InvalidInput(e.to_string()))?;
    let phi_arrow = cert.arrow_images.iter().map(|m| index[m]).collect();
    GroupMorphismData::new(c.clone(), g, phi_sigma, phi_arrow)
        .map(Some)
        .map_err(|e| DevelopError::InvalidInput(e.to_string()))
}

/// Everything in a certificate that should hold for a true verdict.
pub fn audit_certificate(cert: &DevCertificate) -> ValidationReport {
    let mut report = ValidationReport::new("certificate");
    for e in &cert.transcript {
        report.count(&e.family, e.instances);
        if !e.passed {
            report.push(&e.family, e.first_counterexample.clone().unwrap_or_default(), format!("{} failure(s)", e.failures));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cog::{simple_cog_from_subgroups, validate_morphism_to_group};
    use crate::exactlin::Field;
    use crate::scwol::{complex_to_scwol, CellComplex};
    use crate::sheaf::sheaf_from_morphism;

    fn q() -> Field {
        Field::Rational
    }

    fn fix_seg() -> (Arc<ComplexOfGroups>, GroupMorphismData) {
        let g = Arc::new(FiniteGroup::cyclic(12));
        let v = g.generated_subgroup(&[3]).unwrap();
        let w = g.generated_subgroup(&[2]).unwrap();
        let e = g.subgroup(&[0, 6]).unwrap();
        let base = complex_to_scwol(&CellComplex::digraph(2, vec![(0, 1)])).unwrap();
        simple_cog_from_subgroups(g, base, &[v, w, e]).unwrap()
    }

    fn circ() -> (Arc<ComplexOfGroups>, Sheaf) {
        let base = complex_to_scwol(&CellComplex::digraph(2, vec![(0, 1), (0, 1)])).unwrap();
        let c = Arc::new(ComplexOfGroups::ordinary(base));
        let m = |r: &[Vec<i64>]| Matrix::from_rows_i64(q(), r).unwrap();
        let arrows = vec![
            m(&[vec![1, 0], vec![1, 1]]),
            m(&[vec![1, 1], vec![0, 1]]),
            m(&[vec![2, 0], vec![0, 1]]),
            m(&[vec![0, 1], vec![1, 0]]),
        ];
        let rho = vec![vec![Matrix::identity(q(), 2)]; 4];
        let f = Sheaf::new(c.clone(), q(), vec![2; 4], rho, arrows).unwrap();
        (c, f)
    }

    #[test]
    fn paths_agree_with_incremental_table() {
        let (c, f) = circ();
        let t = maximal_tree(c.scwol()).unwrap();
        let table = SheafPathTable::build(&f, &t, ObjectId(0)).unwrap();
        for o in c.scwol().objects() {
            assert_eq!(&sheaf_path(&f, &t, ObjectId(0), o).unwrap(), table.path(o));
        }
        assert!(table.path(ObjectId(0)).is_identity());
    }

    #[test]
    fn seg_single_edge_path() {
        let (c, m) = fix_seg();
        let (f, _) = sheaf_from_morphism(&m, q()).unwrap();
        let t = maximal_tree(c.scwol()).unwrap();
        // v -> e is the a⁺ step of arrow 0
        let p = sheaf_path(&f, &t, ObjectId(0), ObjectId(2)).unwrap();
        assert_eq!(p, f.arrow_matrix(ArrowId(0)).inverse().unwrap());
    }

    #[test]
    fn seg_develops() {
        let (c, m) = fix_seg();
        let (f, _) = sheaf_from_morphism(&m, q()).unwrap();
        let cert = develop(&c, &f).unwrap();
        assert!(cert.verdict, "{:?}", cert.reason);
        assert!(cert.arrow_images.iter().all(|x| x.is_identity()));
        assert_eq!(cert.entry(E1).unwrap().instances, 4);
        assert_eq!(cert.entry(E2).unwrap().instances, 0);
        assert_eq!(cert.entry(E3).unwrap().instances, 3);
        for g in c.group(ObjectId(0)).elements() {
            assert_eq!(&cert.local_images[0][g], f.rho(ObjectId(0), g));
        }
        let w = witness_morphism(&c, &cert, 100).unwrap().unwrap();
        assert_eq!(w.target().order(), 12);
        assert!(validate_morphism_to_group(&w, true).passed());
    }

    #[test]
    fn seg_trivial_rho_fails_injectivity() {
        let (c, _) = fix_seg();
        let cert = develop(&c, &Sheaf::constant(c.clone(), q())).unwrap();
        assert!(!cert.verdict);
        assert_eq!(cert.reason.as_deref(), Some("fails injectivity on local groups"));
        assert!(!cert.entry(E3).unwrap().passed);
        assert!(cert.entry(E1).unwrap().passed && cert.entry(E2).unwrap().passed);
    }

    #[test]
    fn circuit_holonomy() {
        let (c, f) = circ();
        let cert = develop(&c, &f).unwrap();
        assert!(cert.verdict);
        assert_eq!(cert.tree, vec![ArrowId(0), ArrowId(1), ArrowId(2)]);
        let expected = Matrix::from_strings(
            q(),
            2,
            2,
            &[vec!["-1/2".into(), "1".into()], vec!["0".into(), "1".into()]],
        )
        .unwrap();
        assert_eq!(cert.arrow_images[3], expected);
        assert!(!cert.arrow_images[3].is_identity());
    }

    #[test]
    fn disconnected_is_an_error() {
        let c = ComplexOfGroups::ordinary(complex_to_scwol(&CellComplex::digraph(2, vec![])).unwrap());
        let c = Arc::new(c);
        let f = Sheaf::constant(c.clone(), q());
        assert!(matches!(develop(&c, &f), Err(DevelopError::Scwol(ScwolError::DisconnectedScwol(_)))));
    }
}
