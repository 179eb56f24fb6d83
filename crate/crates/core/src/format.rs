//! JSON file formats. Every file carries `"kind"` and `"version": 1`.
//! References to other files are either a path (relative to the referring
//! file) or the referenced document inlined. Matrices are arrays of rows of
//! strings such as `"-3/2"`; plain integers are accepted on input.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::bhcat::{BHCategory, BhArrow};
use crate::cog::{ComplexOfGroups, GroupMorphismData};
use crate::develop::{DevCertificate, TranscriptEntry};
use crate::exactlin::{Field, Matrix};
use crate::groups::{validate_group_table, FiniteGroup, GroupHom};
use crate::report::ValidationReport;
use crate::scwol::{complex_to_scwol, ArrowId, CellComplex, ObjectId, Scwol};
use crate::sheaf::{DevReport, Sheaf};

pub const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    /// Well-formed input that fails a validator while being loaded.
    #[error("{path}: {report}")]
    Semantic { path: String, report: ValidationReport },
}

impl FormatError {
    fn invalid(path: &str, message: impl ToString) -> Self {
        FormatError::Invalid { path: path.into(), message: message.to_string() }
    }
}

/// A reference to another document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Source {
    Path(String),
    Inline(Value),
}

/// Matrix entry as written in a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Text(String),
    Int(i64),
}

impl Entry {
    fn text(&self) -> String {
        match self {
            Entry::Text(s) => s.clone(),
            Entry::Int(n) => n.to_string(),
        }
    }
}

pub type MatrixText = Vec<Vec<Entry>>;

pub fn matrix_text(m: &Matrix) -> MatrixText {
    m.to_strings().into_iter().map(|r| r.into_iter().map(Entry::Text).collect()).collect()
}

pub fn matrix_from_text(field: Field, rows: usize, cols: usize, text: &MatrixText) -> Result<Matrix, String> {
    if text.len() != rows || text.iter().any(|r| r.len() != cols) {
        return Err(format!("expected a {rows}x{cols} matrix"));
    }
    let strings: Vec<Vec<String>> = text.iter().map(|r| r.iter().map(Entry::text).collect()).collect();
    Matrix::from_strings(field, rows, cols, &strings).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub kind: String,
    pub version: u32,
    pub name: String,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomFile {
    pub kind: String,
    pub version: u32,
    pub source: Source,
    pub target: Source,
    pub image: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScwolFile {
    pub kind: String,
    pub version: u32,
    pub objects: Vec<String>,
    /// `[i(a), t(a)]` per arrow.
    pub arrows: Vec<[usize; 2]>,
    /// `[a, b, ab]` triples.
    #[serde(default)]
    pub composition: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellComplexFile {
    pub kind: String,
    pub version: u32,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub triangles: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub kind: String,
    pub version: u32,
    /// A `scwol` or `cell-complex` document.
    pub base: Source,
    pub groups: Vec<Source>,
    /// Image array of `ψ_a` per arrow.
    pub psi: Vec<Vec<usize>>,
    /// `[a, b, g_ab]` triples; missing pairs default to the identity.
    #[serde(default)]
    pub twists: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismFile {
    pub kind: String,
    pub version: u32,
    pub complex: Source,
    pub target: Source,
    /// Image array of `φ_σ` per object.
    pub phi: Vec<Vec<usize>>,
    /// `φ(a)` per arrow.
    pub arrows: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheafFile {
    pub kind: String,
    pub version: u32,
    pub complex: Source,
    pub field: String,
    pub dims: Vec<usize>,
    /// `ρ_σ(g)` per object, indexed by element id.
    pub rho: Vec<Vec<MatrixText>>,
    pub arrows: Vec<MatrixText>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleFile {
    pub kind: String,
    pub version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub complex: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sheaf: Option<Source>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphism: Option<Source>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub kind: String,
    pub version: u32,
    pub field: String,
    pub base: ObjectId,
    pub tree: Vec<ArrowId>,
    pub dev_report: DevReport,
    pub local_images: Vec<Vec<MatrixText>>,
    pub arrow_images: Vec<MatrixText>,
    pub transcript: Vec<TranscriptEntry>,
    pub verdict: bool,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DevReportFile {
    pub kind: String,
    pub version: u32,
    pub verdict: bool,
    pub report: DevReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BhCategoryFile {
    pub kind: String,
    pub version: u32,
    pub objects: usize,
    pub arrows: Vec<BhArrow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub composition: Option<Vec<(BhArrow, BhArrow, BhArrow)>>,
}

/// A loaded instance bundle.
#[derive(Debug, Clone)]
pub struct Bundle {
    pub name: String,
    pub complex: Arc<ComplexOfGroups>,
    pub sheaf: Option<Sheaf>,
    pub morphism: Option<GroupMorphismData>,
}

/// Any loaded document.
#[derive(Debug, Clone)]
pub enum Document {
    Group(Arc<FiniteGroup>),
    Hom(GroupHom),
    Scwol(Scwol),
    CellComplex(CellComplex, Scwol),
    Complex(Arc<ComplexOfGroups>),
    Morphism(GroupMorphismData),
    Sheaf(Sheaf),
    Bundle(Bundle),
    Certificate(CertificateFile),
    DevReport(DevReportFile),
    BhCategory(BhCategoryFile),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Group(_) => "group",
            Document::Hom(_) => "hom",
            Document::Scwol(_) => "scwol",
            Document::CellComplex(..) => "cell-complex",
            Document::Complex(_) => "complex",
            Document::Morphism(_) => "morphism",
            Document::Sheaf(_) => "sheaf",
            Document::Bundle(_) => "bundle",
            Document::Certificate(_) => "certificate",
            Document::DevReport(_) => "dev-report",
            Document::BhCategory(_) => "bh-category",
        }
    }
}

/// Text of a document together with where it came from.
struct Raw {
    label: String,
    dir: PathBuf,
    text: Option<String>,
    value: Value,
}

impl Raw {
    fn decode<T: DeserializeOwned>(&self) -> Result<T, FormatError> {
        let result = match &self.text {
            Some(text) => serde_json::from_str(text),
            None => serde_json::from_value(self.value.clone()),
        };
        result.map_err(|e| json_error(&self.label, &e))
    }
}

fn json_error(label: &str, e: &serde_json::Error) -> FormatError {
    FormatError::Parse { path: label.into(), line: e.line(), column: e.column(), message: e.to_string() }
}

/// Resolves references and caches shared documents so that, e.g., a sheaf
/// and a morphism naming the same complex file get the same `Arc`.
#[derive(Debug, Default)]
pub struct Loader {
    field: Option<Field>,
    groups: HashMap<PathBuf, Arc<FiniteGroup>>,
    complexes: HashMap<PathBuf, Arc<ComplexOfGroups>>,
}

impl Loader {
    pub fn new() -> Self {
        Loader::default()
    }

    /// Parse matrix entries over `field` instead of the field named in the file.
    pub fn with_field(field: Option<Field>) -> Self {
        Loader { field, ..Default::default() }
    }

    pub fn load_path(&mut self, path: &Path) -> Result<Document, FormatError> {
        let raw = read_raw(path)?;
        self.document(&raw)
    }

    /// Parses a document given as text; relative references resolve against `dir`.
    pub fn load_str(&mut self, text: &str, dir: &Path) -> Result<Document, FormatError> {
        let value: Value = serde_json::from_str(text).map_err(|e| json_error("<input>", &e))?;
        let raw = Raw { label: "<input>".into(), dir: dir.to_path_buf(), text: Some(text.into()), value };
        self.document(&raw)
    }

    fn resolve(&self, from: &Raw, source: &Source) -> Result<(Raw, Option<PathBuf>), FormatError> {
        match source {
            Source::Path(p) => {
                let path = from.dir.join(p);
                let key = fs::canonicalize(&path).unwrap_or_else(|_| path.clone());
                Ok((read_raw(&path)?, Some(key)))
            }
            Source::Inline(v) => Ok((
                Raw { label: format!("{} (inline)", from.label), dir: from.dir.clone(), text: None, value: v.clone() },
                None,
            )),
        }
    }

    fn document(&mut self, raw: &Raw) -> Result<Document, FormatError> {
        let kind = header(raw)?;
        Ok(match kind.as_str() {
            "group" => Document::Group(Arc::new(group_from_raw(raw)?)),
            "hom" => Document::Hom(self.hom(raw)?),
            "scwol" => Document::Scwol(scwol_from_raw(raw)?),
            "cell-complex" => {
                let c = cell_from_raw(raw)?;
                let s = complex_to_scwol(&c).map_err(|e| FormatError::invalid(&raw.label, e))?;
                Document::CellComplex(c, s)
            }
            "complex" => Document::Complex(Arc::new(self.complex(raw)?)),
            "morphism" => Document::Morphism(self.morphism(raw)?),
            "sheaf" => Document::Sheaf(self.sheaf(raw)?),
            "bundle" => Document::Bundle(self.bundle(raw)?),
            "certificate" => Document::Certificate(raw.decode()?),
            "dev-report" => Document::DevReport(raw.decode()?),
            "bh-category" => Document::BhCategory(raw.decode()?),
            other => return Err(FormatError::invalid(&raw.label, format!("unknown kind {other:?}"))),
        })
    }

    fn expect(&mut self, from: &Raw, source: &Source, kinds: &[&str]) -> Result<(Raw, Option<PathBuf>), FormatError> {
        let (raw, key) = self.resolve(from, source)?;
        let kind = header(&raw)?;
        if !kinds.contains(&kind.as_str()) {
            return Err(FormatError::invalid(&raw.label, format!("expected {}, found {kind:?}", kinds.join(" or "))));
        }
        Ok((raw, key))
    }

    fn group_ref(&mut self, from: &Raw, source: &Source) -> Result<Arc<FiniteGroup>, FormatError> {
        let (raw, key) = self.expect(from, source, &["group"])?;
        if let Some(g) = key.as_ref().and_then(|k| self.groups.get(k)) {
            return Ok(g.clone());
        }
        let g = Arc::new(group_from_raw(&raw)?);
        if let Some(k) = key {
            self.groups.insert(k, g.clone());
        }
        Ok(g)
    }

    fn complex_ref(&mut self, from: &Raw, source: &Source) -> Result<Arc<ComplexOfGroups>, FormatError> {
        let (raw, key) = self.expect(from, source, &["complex"])?;
        if let Some(c) = key.as_ref().and_then(|k| self.complexes.get(k)) {
            return Ok(c.clone());
        }
        let c = Arc::new(self.complex(&raw)?);
        if let Some(k) = key {
            self.complexes.insert(k, c.clone());
        }
        Ok(c)
    }

    fn hom(&mut self, raw: &Raw) -> Result<GroupHom, FormatError> {
        let f: HomFile = raw.decode()?;
        let src = self.group_ref(raw, &f.source)?;
        let dst = self.group_ref(raw, &f.target)?;
        GroupHom::new(src, dst, f.image).map_err(|e| FormatError::invalid(&raw.label, e))
    }

    fn complex(&mut self, raw: &Raw) -> Result<ComplexOfGroups, FormatError> {
        let f: ComplexFile = raw.decode()?;
        let (base_raw, _) = self.expect(raw, &f.base, &["scwol", "cell-complex"])?;
        let scwol = if header(&base_raw)? == "scwol" {
            scwol_from_raw(&base_raw)?
        } else {
            complex_to_scwol(&cell_from_raw(&base_raw)?).map_err(|e| FormatError::invalid(&base_raw.label, e))?
        };
        if f.groups.len() != scwol.object_count() {
            return Err(FormatError::invalid(
                &raw.label,
                format!("{} groups for {} objects", f.groups.len(), scwol.object_count()),
            ));
        }
        let groups = f.groups.iter().map(|s| self.group_ref(raw, s)).collect::<Result<Vec<_>, _>>()?;
        if f.psi.len() != scwol.arrows().len() {
            return Err(FormatError::invalid(
                &raw.label,
                format!("{} psi images for {} arrows", f.psi.len(), scwol.arrows().len()),
            ));
        }
        let psi = scwol
            .arrows()
            .iter()
            .zip(&f.psi)
            .map(|(a, image)| {
                GroupHom::new(groups[a.initial.0].clone(), groups[a.terminal.0].clone(), image.clone())
                    .map_err(|e| FormatError::invalid(&raw.label, format!("psi of {}: {e}", a.id)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut twists = BTreeMap::new();
        for &[a, b, g] in &f.twists {
            if twists.insert((ArrowId(a), ArrowId(b)), g).is_some() {
                return Err(FormatError::invalid(&raw.label, format!("twist ({a}, {b}) given twice")));
            }
        }
        ComplexOfGroups::new(scwol, groups, psi, twists).map_err(|e| FormatError::invalid(&raw.label, e))
    }

    fn morphism(&mut self, raw: &Raw) -> Result<GroupMorphismData, FormatError> {
        let f: MorphismFile = raw.decode()?;
        let complex = self.complex_ref(raw, &f.complex)?;
        let target = self.group_ref(raw, &f.target)?;
        if f.phi.len() != complex.groups().len() {
            return Err(FormatError::invalid(&raw.label, "one phi image per object"));
        }
        let phi_sigma = complex
            .groups()
            .iter()
            .zip(f.phi)
            .map(|(g, image)| GroupHom::new(g.clone(), target.clone(), image))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| FormatError::invalid(&raw.label, e))?;
        GroupMorphismData::new(complex, target, phi_sigma, f.arrows).map_err(|e| FormatError::invalid(&raw.label, e))
    }

    fn sheaf(&mut self, raw: &Raw) -> Result<Sheaf, FormatError> {
        let f: SheafFile = raw.decode()?;
        let complex = self.complex_ref(raw, &f.complex)?;
        let named: Field = f.field.parse().map_err(|e| FormatError::invalid(&raw.label, e))?;
        let field = self.field.unwrap_or(named);
        let s = complex.scwol();
        if f.dims.len() != s.object_count() || f.rho.len() != s.object_count() || f.arrows.len() != s.arrows().len() {
            return Err(FormatError::invalid(&raw.label, "sizes of dims, rho and arrows do not match the complex"));
        }
        let mut rho = Vec::new();
        for (k, table) in f.rho.iter().enumerate() {
            let n = f.dims[k];
            let parsed = table
                .iter()
                .enumerate()
                .map(|(g, m)| {
                    matrix_from_text(field, n, n, m)
                        .map_err(|e| FormatError::invalid(&raw.label, format!("rho of object {k}, element {g}: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rho.push(parsed);
        }
        let arrows = s
            .arrows()
            .iter()
            .map(|a| {
                matrix_from_text(field, f.dims[a.terminal.0], f.dims[a.initial.0], &f.arrows[a.id.0])
                    .map_err(|e| FormatError::invalid(&raw.label, format!("matrix of {}: {e}", a.id)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Sheaf::new(complex, field, f.dims, rho, arrows).map_err(|e| FormatError::invalid(&raw.label, e))
    }

    fn bundle(&mut self, raw: &Raw) -> Result<Bundle, FormatError> {
        let f: BundleFile = raw.decode()?;
        let complex = self.complex_ref(raw, &f.complex)?;
        let sheaf = match &f.sheaf {
            Some(s) => {
                let (r, _) = self.expect(raw, s, &["sheaf"])?;
                let sheaf = self.sheaf(&r)?;
                if sheaf.complex().as_ref() != complex.as_ref() {
                    return Err(FormatError::invalid(&r.label, "sheaf is over a different complex than the bundle"));
                }
                Some(sheaf)
            }
            None => None,
        };
        let morphism = match &f.morphism {
            Some(s) => {
                let (r, _) = self.expect(raw, s, &["morphism"])?;
                let m = self.morphism(&r)?;
                if m.source().as_ref() != complex.as_ref() {
                    return Err(FormatError::invalid(&r.label, "morphism is from a different complex than the bundle"));
                }
                Some(m)
            }
            None => None,
        };
        Ok(Bundle { name: f.name, complex, sheaf, morphism })
    }
}

fn read_raw(path: &Path) -> Result<Raw, FormatError> {
    let label = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| FormatError::Io { path: label.clone(), message: e.to_string() })?;
    let value: Value = serde_json::from_str(&text).map_err(|e| json_error(&label, &e))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(Raw { label, dir, text: Some(text), value })
}

fn header(raw: &Raw) -> Result<String, FormatError> {
    let kind = raw
        .value
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| FormatError::invalid(&raw.label, "missing \"kind\""))?;
    match raw.value.get("version").and_then(Value::as_u64) {
        Some(v) if v == VERSION as u64 => Ok(kind.to_string()),
        Some(v) => Err(FormatError::invalid(&raw.label, format!("unsupported version {v}"))),
        None => Err(FormatError::invalid(&raw.label, "missing \"version\"")),
    }
}

fn group_from_raw(raw: &Raw) -> Result<FiniteGroup, FormatError> {
    let f: GroupFile = raw.decode()?;
    let report = validate_group_table(&f.table);
    if !report.passed() {
        return Err(FormatError::Semantic { path: raw.label.clone(), report });
    }
    FiniteGroup::from_table(f.name, f.table, f.labels).map_err(|e| FormatError::invalid(&raw.label, e))
}

fn scwol_from_raw(raw: &Raw) -> Result<Scwol, FormatError> {
    let f: ScwolFile = raw.decode()?;
    let arrows: Vec<(usize, usize)> = f.arrows.iter().map(|&[i, t]| (i, t)).collect();
    let comp: Vec<(usize, usize, usize)> = f.composition.iter().map(|&[a, b, c]| (a, b, c)).collect();
    Scwol::new(f.objects, &arrows, &comp).map_err(|e| FormatError::invalid(&raw.label, e))
}

fn cell_from_raw(raw: &Raw) -> Result<CellComplex, FormatError> {
    let f: CellComplexFile = raw.decode()?;
    Ok(CellComplex {
        vertices: f.vertices,
        edges: f.edges.iter().map(|&[u, v]| (u, v)).collect(),
        triangles: f.triangles,
    })
}

/// Raw group table check for a group file, without building the group.
pub fn group_table_report(path: &Path) -> Result<ValidationReport, FormatError> {
    let raw = read_raw(path)?;
    let f: GroupFile = raw.decode()?;
    Ok(validate_group_table(&f.table))
}

pub fn group_file(g: &FiniteGroup) -> GroupFile {
    GroupFile {
        kind: "group".into(),
        version: VERSION,
        name: g.name().into(),
        table: g.table_rows(),
        labels: g.labels().map(<[String]>::to_vec),
    }
}

pub fn scwol_file(s: &Scwol) -> ScwolFile {
    ScwolFile {
        kind: "scwol".into(),
        version: VERSION,
        objects: s.labels().to_vec(),
        arrows: s.arrows().iter().map(|a| [a.initial.0, a.terminal.0]).collect(),
        composition: s.composition_table().map(|(a, b, c)| [a.0, b.0, c.0]).collect(),
    }
}

pub fn cell_complex_file(c: &CellComplex) -> CellComplexFile {
    CellComplexFile {
        kind: "cell-complex".into(),
        version: VERSION,
        vertices: c.vertices.clone(),
        edges: c.edges.iter().map(|&(u, v)| [u, v]).collect(),
        triangles: c.triangles.clone(),
    }
}

fn inline<T: Serialize>(x: &T) -> Source {
    Source::Inline(serde_json::to_value(x).expect("serializable"))
}

/// A complex file with the base and every group inlined.
pub fn complex_file(c: &ComplexOfGroups) -> ComplexFile {
    complex_file_with(c, inline(&scwol_file(c.scwol())), c.groups().iter().map(|g| inline(&group_file(g))).collect())
}

pub fn complex_file_with(c: &ComplexOfGroups, base: Source, groups: Vec<Source>) -> ComplexFile {
    ComplexFile {
        kind: "complex".into(),
        version: VERSION,
        base,
        groups,
        psi: c.psis().iter().map(|h| h.image().to_vec()).collect(),
        twists: c.twists().iter().map(|(&(a, b), &g)| [a.0, b.0, g]).collect(),
    }
}

pub fn morphism_file(m: &GroupMorphismData, complex: Source, target: Source) -> MorphismFile {
    MorphismFile {
        kind: "morphism".into(),
        version: VERSION,
        complex,
        target,
        phi: m.phi_sigmas().iter().map(|h| h.image().to_vec()).collect(),
        arrows: m.phi_arrows().to_vec(),
    }
}

pub fn morphism_file_inline(m: &GroupMorphismData) -> MorphismFile {
    morphism_file(m, inline(&complex_file(m.source())), inline(&group_file(m.target())))
}

pub fn sheaf_file(f: &Sheaf, complex: Source) -> SheafFile {
    let s = f.complex().scwol();
    SheafFile {
        kind: "sheaf".into(),
        version: VERSION,
        complex,
        field: f.field().to_string(),
        dims: f.dims().to_vec(),
        rho: s.objects().map(|o| f.rho_table(o).iter().map(matrix_text).collect()).collect(),
        arrows: f.arrow_matrices().iter().map(matrix_text).collect(),
    }
}

pub fn sheaf_file_inline(f: &Sheaf) -> SheafFile {
    sheaf_file(f, inline(&complex_file(f.complex())))
}

pub fn certificate_file(cert: &DevCertificate, field: Field) -> CertificateFile {
    CertificateFile {
        kind: "certificate".into(),
        version: VERSION,
        field: field.to_string(),
        base: cert.base,
        tree: cert.tree.clone(),
        dev_report: cert.dev_report.clone(),
        local_images: cert.local_images.iter().map(|t| t.iter().map(matrix_text).collect()).collect(),
        arrow_images: cert.arrow_images.iter().map(matrix_text).collect(),
        transcript: cert.transcript.clone(),
        verdict: cert.verdict,
        reason: cert.reason.clone(),
    }
}

pub fn dev_report_file(r: &DevReport) -> DevReportFile {
    DevReportFile { kind: "dev-report".into(), version: VERSION, verdict: r.verdict(), report: r.clone() }
}

pub fn bh_category_file(cat: &BHCategory, with_table: bool) -> BhCategoryFile {
    BhCategoryFile {
        kind: "bh-category".into(),
        version: VERSION,
        objects: cat.object_count(),
        arrows: cat.arrows(),
        composition: with_table.then(|| cat.composition_table()),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cog::simple_cog_from_subgroups;
    use crate::sheaf::sheaf_from_morphism;

    fn seg() -> GroupMorphismData {
        let g = Arc::new(FiniteGroup::cyclic(12));
        let v = g.generated_subgroup(&[3]).unwrap();
        let w = g.generated_subgroup(&[2]).unwrap();
        let e = g.subgroup(&[0, 6]).unwrap();
        let base = complex_to_scwol(&CellComplex::digraph(2, vec![(0, 1)])).unwrap();
        simple_cog_from_subgroups(g, base, &[v, w, e]).unwrap().1
    }

    #[test]
    fn inline_round_trip() {
        let m = seg();
        let dir = Path::new(".");
        let text = to_json(&morphism_file_inline(&m));
        match Loader::new().load_str(&text, dir).unwrap() {
            Document::Morphism(back) => assert_eq!(back, m),
            other => panic!("{}", other.kind()),
        }
        let (f, _) = sheaf_from_morphism(&m, Field::Rational).unwrap();
        let text = to_json(&sheaf_file_inline(&f));
        match Loader::new().load_str(&text, dir).unwrap() {
            Document::Sheaf(back) => assert_eq!(back, f),
            other => panic!("{}", other.kind()),
        }
    }

    #[test]
    fn field_override() {
        let (f, _) = sheaf_from_morphism(&seg(), Field::Rational).unwrap();
        let text = to_json(&sheaf_file_inline(&f));
        let p = Field::prime(7).unwrap();
        match Loader::with_field(Some(p)).load_str(&text, Path::new(".")).unwrap() {
            Document::Sheaf(back) => assert_eq!(back.field(), p),
            other => panic!("{}", other.kind()),
        }
    }

    #[test]
    fn truncated_input_reports_position() {
        let text = to_json(&group_file(&FiniteGroup::cyclic(3)));
        let cut = &text[..text.len() / 2];
        match Loader::new().load_str(cut, Path::new(".")) {
            Err(FormatError::Parse { line, column, .. }) => assert!(line > 1 && column > 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn structural_errors_carry_position() {
        let text = "{\"kind\": \"group\", \"version\": 1,\n \"name\": \"x\", \"table\": [[0, \"a\"]]}";
        match Loader::new().load_str(text, Path::new(".")) {
            Err(FormatError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_group_is_semantic() {
        let text = r#"{"kind":"group","version":1,"name":"x","table":[[0,1],[1,1]]}"#;
        assert!(matches!(Loader::new().load_str(text, Path::new(".")), Err(FormatError::Semantic { .. })));
    }

    #[test]
    fn header_errors() {
        for text in [r#"{"version":1}"#, r#"{"kind":"group"}"#, r#"{"kind":"group","version":2}"#, r#"{"kind":"x","version":1}"#] {
            assert!(matches!(Loader::new().load_str(text, Path::new(".")), Err(FormatError::Invalid { .. })));
        }
    }

    #[test]
    fn integer_entries_are_accepted() {
        let text: MatrixText = serde_json::from_str(r#"[[1, "1/2"], [0, -3]]"#).unwrap();
        let m = matrix_from_text(Field::Rational, 2, 2, &text).unwrap();
        assert_eq!(m.to_strings(), vec![vec!["1", "1/2"], vec!["0", "-3"]]);
    }
}
