//! Sheaves over B.H. categories in generator form: a representation
//! `ρ_σ` of each local group and a matrix `A_a: F(i(a)) → F(t(a))` per base
//! arrow. The value on `(g, α)` is `ρ_{t(α)}(g) · A_α`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bhcat::{BhArrow, BhError, BhFunctor};
use crate::cog::{validate_morphism_to_group, ComplexOfGroups, GroupMorphismData};
use crate::exactlin::{Field, LinError, Matrix};
use crate::groups::{regular_representation, FiniteGroup};
use crate::report::ValidationReport;
use crate::scwol::{complex_to_scwol, ArrowId, CellComplex, Morphism, ObjectId, ScwolError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SheafError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error(transparent)]
    Bh(#[from] BhError),
    #[error(transparent)]
    Scwol(#[from] ScwolError),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("invalid sheaf: {0}")]
    InvalidSheaf(String),
    #[error("functor target does not match the sheaf's base")]
    WrongBase,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sheaf {
    complex: Arc<ComplexOfGroups>,
    field: Field,
    dims: Vec<usize>,
    rho: Vec<Vec<Matrix>>,
    arrows: Vec<Matrix>,
}

impl Sheaf {
    /// Checks sizes, shapes and fields; the functor equations are checked by
    /// [`validate_sheaf`].
    pub fn new(
        complex: Arc<ComplexOfGroups>,
        field: Field,
        dims: Vec<usize>,
        rho: Vec<Vec<Matrix>>,
        arrows: Vec<Matrix>,
    ) -> Result<Self, SheafError> {
        let s = complex.scwol();
        if dims.len() != s.object_count() || rho.len() != s.object_count() {
            return Err(SheafError::Shape("one dimension and one ρ table per object".into()));
        }
        if arrows.len() != s.arrows().len() {
            return Err(SheafError::Shape(format!(
                "{} matrices for {} arrows",
                arrows.len(),
                s.arrows().len()
            )));
        }
        for o in s.objects() {
            let table = &rho[o.0];
            let order = complex.group(o).order();
            if table.len() != order {
                return Err(SheafError::Shape(format!("ρ at {o} has {} entries, group order {order}", table.len())));
            }
            let n = dims[o.0];
            for (g, m) in table.iter().enumerate() {
                if m.rows() != n || m.cols() != n || m.field() != field {
                    return Err(SheafError::Shape(format!("ρ at {o}, element {g}: expected {n}x{n} over {field}")));
                }
            }
        }
        for a in s.arrows() {
            let m = &arrows[a.id.0];
            let (r, c) = (dims[a.terminal.0], dims[a.initial.0]);
            if m.rows() != r || m.cols() != c || m.field() != field {
                return Err(SheafError::Shape(format!("{}: expected {r}x{c} over {field}", a.id)));
            }
        }
        Ok(Sheaf { complex, field, dims, rho, arrows })
    }

    /// Rank one, trivial `ρ`, every `A_a = [[1]]`.
    pub fn constant(complex: Arc<ComplexOfGroups>, field: Field) -> Self {
        let one = Matrix::identity(field, 1);
        let rho = complex.groups().iter().map(|g| vec![one.clone(); g.order()]).collect();
        let arrows = vec![one; complex.scwol().arrows().len()];
        let dims = vec![1; complex.scwol().object_count()];
        Sheaf { complex, field, dims, rho, arrows }
    }

    pub fn complex(&self) -> &Arc<ComplexOfGroups> {
        &self.complex
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self, o: ObjectId) -> usize {
        self.dims[o.0]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn rho(&self, o: ObjectId, g: usize) -> &Matrix {
        &self.rho[o.0][g]
    }

    pub fn rho_table(&self, o: ObjectId) -> &[Matrix] {
        &self.rho[o.0]
    }

    pub fn arrow_matrix(&self, a: ArrowId) -> &Matrix {
        &self.arrows[a.0]
    }

    pub fn arrow_matrices(&self) -> &[Matrix] {
        &self.arrows
    }

    /// `(complex, field, dims, rho, arrows)`.
    pub fn into_parts(self) -> (Arc<ComplexOfGroups>, Field, Vec<usize>, Vec<Vec<Matrix>>, Vec<Matrix>) {
        (self.complex, self.field, self.dims, self.rho, self.arrows)
    }
}

/// `F(g, α) = ρ_{t(α)}(g) · A_α`.
pub fn sheaf_value(f: &Sheaf, x: BhArrow) -> Result<Matrix, SheafError> {
    let s = f.complex.scwol();
    match x.morphism {
        Morphism::Identity(o) => {
            if !s.has_object(o) || !f.complex.group(o).contains(x.element) {
                return Err(BhError::UnknownArrow(x).into());
            }
            Ok(f.rho[o.0][x.element].clone())
        }
        Morphism::Arrow(a) => {
            if a.0 >= s.arrows().len() {
                return Err(BhError::UnknownArrow(x).into());
            }
            let t = s.terminal(a);
            if !f.complex.group(t).contains(x.element) {
                return Err(BhError::UnknownArrow(x).into());
            }
            Ok(f.rho[t.0][x.element].mul(&f.arrows[a.0])?)
        }
    }
}

/// `ρ_σ(1) = I` and `ρ_σ` multiplicative, intertwining on every arrow and
/// element, twist compatibility on every composable pair.
pub fn validate_sheaf(f: &Sheaf) -> ValidationReport {
    let mut report = ValidationReport::new("sheaf");
    let c = &f.complex;
    let s = c.scwol();
    for o in s.objects() {
        let g = c.group(o);
        let table = &f.rho[o.0];
        report.count("rho-identity", 1);
        if !table[0].is_identity() {
            report.push("rho-identity", o.to_string(), "ρ(1) is not the identity");
        }
        report.count("rho-hom", g.order() * g.order());
        'hom: for x in g.elements() {
            for y in g.elements() {
                let prod = table[x].mul(&table[y]).expect("shapes checked");
                if prod != table[g.mul(x, y)] {
                    report.push("rho-hom", format!("{o}, ({x}, {y})"), "ρ(x)ρ(y) != ρ(xy)");
                    break 'hom;
                }
            }
        }
    }
    for a in s.arrows() {
        let m = &f.arrows[a.id.0];
        let psi = c.psi(a.id);
        report.count("intertwining", c.group(a.initial).order());
        for y in c.group(a.initial).elements() {
            let lhs = m.mul(&f.rho[a.initial.0][y]).expect("shapes checked");
            let rhs = f.rho[a.terminal.0][psi.apply(y)].mul(m).expect("shapes checked");
            if lhs != rhs {
                report.push(
                    "intertwining",
                    format!("{}, element {y}", a.id),
                    "A_a ρ_i(g) != ρ_t(ψ_a g) A_a",
                );
                break;
            }
        }
    }
    let mut pairs = 0;
    for (a, b, ab) in s.composition_table() {
        pairs += 1;
        let lhs = f.arrows[a.0].mul(&f.arrows[b.0]).expect("shapes checked");
        let t = s.terminal(a);
        let rhs = f.rho[t.0][c.twist(a, b)].mul(&f.arrows[ab.0]).expect("shapes checked");
        if lhs != rhs {
            report.push("twist-compatibility", format!("({}, {})", a.0, b.0), "A_a A_b != ρ_t(g_ab) A_ab");
        }
    }
    report.count("twist-compatibility", pairs);
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DevProperty {
    ConstantRank,
    Invertibility,
    Injectivity,
}

impl std::fmt::Display for DevProperty {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DevProperty::ConstantRank => "constant rank",
            DevProperty::Invertibility => "invertibility",
            DevProperty::Injectivity => "injectivity on local groups",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantRank {
    pub holds: bool,
    /// The common dimension when the rank is constant.
    pub dimension: Option<usize>,
    /// First arrow whose endpoints have different dimensions, as `(i(a), t(a))`.
    pub counterexample: Option<(ObjectId, ObjectId)>,
    /// Every arrow whose endpoints have different dimensions.
    pub mismatched_arrows: Vec<ArrowId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invertibility {
    pub holds: bool,
    pub singular_arrow: Option<ArrowId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Injectivity {
    pub holds: bool,
    /// First `(σ, g)` with `g ≠ 1` and `ρ_σ(g) = I`.
    pub counterexample: Option<(ObjectId, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DevReport {
    pub constant_rank: ConstantRank,
    pub all_invertible: Invertibility,
    pub injective_on_local_groups: Injectivity,
}

impl DevReport {
    pub fn verdict(&self) -> bool {
        self.constant_rank.holds && self.all_invertible.holds && self.injective_on_local_groups.holds
    }

    pub fn failing(&self) -> Vec<DevProperty> {
        let mut out = Vec::new();
        if !self.constant_rank.holds {
            out.push(DevProperty::ConstantRank);
        }
        if !self.all_invertible.holds {
            out.push(DevProperty::Invertibility);
        }
        if !self.injective_on_local_groups.holds {
            out.push(DevProperty::Injectivity);
        }
        out
    }
}

impl std::fmt::Display for DevReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let r = &self.constant_rank;
        match (r.dimension, r.counterexample) {
            (Some(n), _) => writeln!(f, "constant rank: yes ({n})")?,
            (None, Some((i, t))) => writeln!(f, "constant rank: no ({} vs {})", i.0, t.0)?,
            (None, None) => writeln!(f, "constant rank: no")?,
        }
        match self.all_invertible.singular_arrow {
            None => writeln!(f, "invertibility: yes")?,
            Some(a) => writeln!(f, "invertibility: no ({a} is singular)")?,
        }
        match self.injective_on_local_groups.counterexample {
            None => write!(f, "injectivity on local groups: yes")?,
            Some((o, g)) => write!(f, "injectivity on local groups: no ({o}, element {g})")?,
        }
        Ok(())
    }
}

/// The three dev properties with witnesses. Invertibility is judged on the
/// square `A_a` only; arrows between stalks of different dimension are
/// reported under constant rank.
pub fn check_dev_properties(f: &Sheaf) -> Result<DevReport, SheafError> {
    let report = validate_sheaf(f);
    if !report.passed() {
        return Err(SheafError::InvalidSheaf(report.to_string()));
    }
    Ok(dev_properties_unchecked(f))
}

pub(crate) fn dev_properties_unchecked(f: &Sheaf) -> DevReport {
    let s = f.complex.scwol();
    let mismatched: Vec<ArrowId> = s
        .arrows()
        .iter()
        .filter(|a| f.dims[a.initial.0] != f.dims[a.terminal.0])
        .map(|a| a.id)
        .collect();
    let uniform = f.dims.iter().all(|&d| d == f.dims[0]);
    let counterexample = match mismatched.first() {
        Some(&a) => Some((s.initial(a), s.terminal(a))),
        None if !uniform => {
            let k = f.dims.iter().position(|&d| d != f.dims[0]).expect("not uniform");
            Some((ObjectId(0), ObjectId(k)))
        }
        None => None,
    };
    let constant_rank = ConstantRank {
        holds: uniform,
        dimension: uniform.then(|| f.dims[0]),
        counterexample,
        mismatched_arrows: mismatched,
    };
    let singular_arrow = f
        .arrows
        .iter()
        .enumerate()
        .find(|(_, m)| m.is_square() && m.rank() < m.rows())
        .map(|(k, _)| ArrowId(k));
    let all_invertible = Invertibility { holds: singular_arrow.is_none(), singular_arrow };
    let mut kernel = None;
    'outer: for o in s.objects() {
        for (g, m) in f.rho[o.0].iter().enumerate().skip(1) {
            if m.is_identity() {
                kernel = Some((o, g));
                break 'outer;
            }
        }
    }
    DevReport {
        constant_rank,
        all_invertible,
        injective_on_local_groups: Injectivity { holds: kernel.is_none(), counterexample: kernel },
    }
}

/// The regular representation of `G` as a sheaf over `Θ(G)`. This is the
/// tautological sheaf restricted to the image of `G`.
pub fn regular_sheaf(g: Arc<FiniteGroup>, field: Field) -> Sheaf {
    let rho = regular_representation(&g, field);
    let n = g.order();
    Sheaf {
        complex: Arc::new(ComplexOfGroups::theta(g)),
        field,
        dims: vec![n],
        rho: vec![rho],
        arrows: Vec::new(),
    }
}

/// `f*F = F ∘ f`, re-expressed through the generators of the source.
pub fn pullback_sheaf(f: &BhFunctor, sheaf: &Sheaf) -> Result<Sheaf, SheafError> {
    if !Arc::ptr_eq(f.target(), &sheaf.complex) && **f.target() != *sheaf.complex {
        return Err(SheafError::WrongBase);
    }
    let report = f.check();
    if !report.passed() {
        return Err(BhError::NotAFunctor(report.to_string()).into());
    }
    let src = f.source();
    let s = src.scwol();
    let dims = s.objects().map(|o| sheaf.dim(f.object(o))).collect();
    let mut rho = Vec::with_capacity(s.object_count());
    for o in s.objects() {
        let table = src
            .group(o)
            .elements()
            .map(|g| sheaf_value(sheaf, f.apply(BhArrow::local(g, o))?))
            .collect::<Result<Vec<_>, _>>()?;
        rho.push(table);
    }
    let arrows = s
        .arrows()
        .iter()
        .map(|a| sheaf_value(sheaf, f.apply(BhArrow::base(a.id))?))
        .collect::<Result<Vec<_>, _>>()?;
    Sheaf::new(src.clone(), sheaf.field, dims, rho, arrows)
}

/// `ρ_σ = R ∘ φ_σ` and `A_a = R(φ(a))` for the regular representation `R`
/// of the target. The report carries an `injective` violation when some
/// `φ_σ` has a kernel; the sheaf is returned regardless.
pub fn sheaf_from_morphism(m: &GroupMorphismData, field: Field) -> Result<(Sheaf, ValidationReport), SheafError> {
    let equations = validate_morphism_to_group(m, false);
    if !equations.passed() {
        return Err(SheafError::InvalidMorphism(equations.to_string()));
    }
    let warnings = validate_morphism_to_group(m, true);
    let g = m.target();
    let r = regular_representation(g, field);
    let c = m.source().clone();
    let s = c.scwol();
    let rho = s
        .objects()
        .map(|o| m.phi_sigma(o).image().iter().map(|&x| r[x].clone()).collect())
        .collect();
    let arrows = s.arrows().iter().map(|a| r[m.phi_arrow(a.id)].clone()).collect();
    let dims = vec![g.order(); s.object_count()];
    let sheaf = Sheaf::new(c, field, dims, rho, arrows)?;
    Ok((sheaf, warnings))
}

/// A sheaf on a directed graph: a space per vertex and per edge, and for
/// each edge the maps from the edge space to its tail and head spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigraphSheaf {
    pub graph: CellComplex,
    pub vertex_dims: Vec<usize>,
    pub edge_dims: Vec<usize>,
    /// `(F(tail, e), F(head, e))` per edge.
    pub maps: Vec<(Matrix, Matrix)>,
}

/// The same data over the subdivision scwol with trivial local groups.
pub fn friedman_to_scwol_sheaf(d: &DigraphSheaf, field: Field) -> Result<Sheaf, SheafError> {
    if !d.graph.triangles.is_empty() {
        return Err(SheafError::Shape("a digraph has no triangles".into()));
    }
    if d.vertex_dims.len() != d.graph.vertices.len()
        || d.edge_dims.len() != d.graph.edges.len()
        || d.maps.len() != d.graph.edges.len()
    {
        return Err(SheafError::Shape("one dimension per vertex and edge, one map pair per edge".into()));
    }
    let complex = Arc::new(ComplexOfGroups::ordinary(complex_to_scwol(&d.graph)?));
    let mut dims = d.vertex_dims.clone();
    dims.extend(&d.edge_dims);
    let rho = dims.iter().map(|&n| vec![Matrix::identity(field, n)]).collect();
    let arrows = d.maps.iter().flat_map(|(t, h)| [t.clone(), h.clone()]).collect();
    Sheaf::new(complex, field, dims, rho, arrows)
}
