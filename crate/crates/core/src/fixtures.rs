//! The shipped fixture instances, their variants, the dev-property
//! mutations and the on-disk export.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;
use std::sync::Arc;

use crate::cog::{simple_cog_from_subgroups, ComplexOfGroups, GroupMorphismData};
use crate::exactlin::{Field, FieldScalar, Matrix};
use crate::format::{
    cell_complex_file, complex_file_with, group_file, morphism_file, scwol_file, sheaf_file, to_json, BundleFile,
    Source, VERSION,
};
use crate::groups::{FiniteGroup, GroupHom};
use crate::scwol::{complex_to_scwol, ArrowId, CellComplex, ObjectId};
use crate::sheaf::{sheaf_from_morphism, validate_sheaf, DevProperty, Sheaf};

/// A complex of groups with its base description, a sheaf and, where one
/// exists, a morphism into a finite group.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub cell: Option<CellComplex>,
    pub complex: Arc<ComplexOfGroups>,
    pub sheaf: Sheaf,
    pub morphism: Option<GroupMorphismData>,
}

fn q() -> Field {
    Field::Rational
}

fn scalar(x: i64) -> Matrix {
    Matrix::from_rows_i64(q(), &[vec![x]]).expect("1x1")
}

fn segment() -> CellComplex {
    CellComplex { vertices: vec!["v".into(), "w".into()], edges: vec![(0, 1)], triangles: Vec::new() }
}

pub fn triangle() -> CellComplex {
    CellComplex {
        vertices: vec!["v0".into(), "v1".into(), "v2".into()],
        edges: vec![(0, 1), (0, 2), (1, 2)],
        triangles: vec![[0, 1, 2]],
    }
}

fn circuit() -> CellComplex {
    CellComplex { vertices: vec!["v".into(), "w".into()], edges: vec![(0, 1), (0, 1)], triangles: Vec::new() }
}

/// Θ(Z/2) with the sign representation; the identity morphism into Z/2.
pub fn fix_triv() -> Fixture {
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    let complex = Arc::new(ComplexOfGroups::theta(z2.clone()));
    let sheaf = Sheaf::new(complex.clone(), q(), vec![1], vec![vec![scalar(1), scalar(-1)]], vec![]).expect("sign");
    let morphism = GroupMorphismData::new(complex.clone(), z2.clone(), vec![GroupHom::identity(z2)], vec![]).expect("id");
    Fixture { name: "fix-triv", cell: None, complex, sheaf, morphism: Some(morphism) }
}

/// Segment `v ← e → w` with groups `Z/4 ⊇ Z/2 ⊆ Z/6` inside `Z/12`, and the
/// regular-representation sheaf of the inclusion morphism.
pub fn fix_seg() -> Fixture {
    let g = Arc::new(FiniteGroup::cyclic(12));
    let v = g.generated_subgroup(&[3]).expect("<3>");
    let w = g.generated_subgroup(&[2]).expect("<2>");
    let e = g.subgroup(&[0, 6]).expect("{0,6}");
    let cell = segment();
    let base = complex_to_scwol(&cell).expect("segment");
    let (complex, morphism) = simple_cog_from_subgroups(g, base, &[v, w, e]).expect("inclusions");
    let (sheaf, _) = sheaf_from_morphism(&morphism, q()).expect("valid morphism");
    Fixture { name: "fix-seg", cell: Some(cell), complex, sheaf, morphism: Some(morphism) }
}

/// Rank one, trivial `ρ` over the segment of groups.
pub fn fix_seg_trivial_sheaf() -> Sheaf {
    Sheaf::constant(fix_seg().complex, q())
}

/// `φ_v` and `φ_e` trivial, `φ_w: x ↦ 4x`, `φ(a) = 0`; a morphism whose
/// local maps all have kernels.
pub fn fix_seg_collapsed_morphism() -> GroupMorphismData {
    let fx = fix_seg();
    let m = fx.morphism.expect("segment morphism");
    let target = m.target().clone();
    let c = fx.complex;
    let hom = |o: usize, k: usize| {
        let g = c.group(ObjectId(o));
        GroupHom::new(g.clone(), target.clone(), g.elements().map(|x| (k * x) % 12).collect()).expect("hom")
    };
    GroupMorphismData::new(c.clone(), target.clone(), vec![hom(0, 0), hom(1, 4), hom(2, 0)], vec![0, 0]).expect("shape")
}

/// The 2-simplex with `Z/2` everywhere, `ψ = id` and `g_{a₀,b₀} = 1` for
/// `a₀ = (e₀ → v₀)`, `b₀ = (f → e₀)`; the sign sheaf with `A_{a₀} = -1`.
pub fn fix_tri() -> Fixture {
    let cell = triangle();
    let base = complex_to_scwol(&cell).expect("triangle");
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    let n = base.object_count();
    let arrows = base.arrows().len();
    let mut twists = BTreeMap::new();
    twists.insert((ArrowId(0), ArrowId(6)), 1);
    let complex = Arc::new(
        ComplexOfGroups::new(base, vec![z2.clone(); n], vec![GroupHom::identity(z2.clone()); arrows], twists)
            .expect("shape"),
    );
    let sheaf = tri_sign_sheaf(&complex, -1);
    let phi = vec![GroupHom::identity(z2.clone()); n];
    let mut phi_a = vec![0; arrows];
    phi_a[0] = 1;
    let morphism = GroupMorphismData::new(complex.clone(), z2, phi, phi_a).expect("shape");
    Fixture { name: "fix-tri", cell: Some(cell), complex, sheaf, morphism: Some(morphism) }
}

fn tri_sign_sheaf(c: &Arc<ComplexOfGroups>, a0: i64) -> Sheaf {
    let n = c.scwol().object_count();
    let mut arrows = vec![scalar(1); c.scwol().arrows().len()];
    arrows[0] = scalar(a0);
    Sheaf::new(c.clone(), q(), vec![1; n], vec![vec![scalar(1), scalar(-1)]; n], arrows).expect("shape")
}

/// The sign sheaf with `A_{a₀}` flipped to `+1`; fails twist compatibility.
pub fn fix_tri_broken_sheaf() -> Sheaf {
    tri_sign_sheaf(&fix_tri().complex, 1)
}

/// Two parallel edges between `v` and `w`, trivial groups, rank two.
pub fn fix_circ() -> Fixture {
    let cell = circuit();
    let complex = Arc::new(ComplexOfGroups::ordinary(complex_to_scwol(&cell).expect("circuit")));
    let m = |r: [[i64; 2]; 2]| Matrix::from_rows_i64(q(), &[r[0].to_vec(), r[1].to_vec()]).expect("2x2");
    let arrows = vec![m([[1, 0], [1, 1]]), m([[1, 1], [0, 1]]), m([[2, 0], [0, 1]]), m([[0, 1], [1, 0]])];
    let rho = vec![vec![Matrix::identity(q(), 2)]; 4];
    let sheaf = Sheaf::new(complex.clone(), q(), vec![2; 4], rho, arrows).expect("shape");
    Fixture { name: "fix-circ", cell: Some(cell), complex, sheaf, morphism: None }
}

/// `Φ(a)` expected on the non-tree arrow of [`fix_circ`].
pub fn fix_circ_holonomy() -> Matrix {
    let s = |x: &str| x.to_string();
    Matrix::from_strings(q(), 2, 2, &[vec![s("-1/2"), s("1")], vec![s("0"), s("1")]]).expect("2x2")
}

/// Two vertices, no edges.
pub fn disconnected() -> Fixture {
    let cell = CellComplex { vertices: vec!["v".into(), "w".into()], edges: Vec::new(), triangles: Vec::new() };
    let complex = Arc::new(ComplexOfGroups::ordinary(complex_to_scwol(&cell).expect("two points")));
    let sheaf = Sheaf::constant(complex.clone(), q());
    Fixture { name: "disconnected", cell: Some(cell), complex, sheaf, morphism: None }
}

pub fn all() -> Vec<Fixture> {
    vec![fix_triv(), fix_seg(), fix_tri(), fix_circ()]
}

/// Adds a zero coordinate to the stalk at `o`: `ρ_o` gains a trailing 1,
/// arrows into `o` gain a zero row and arrows out of `o` a zero column.
pub fn pad_stalk(f: &Sheaf, o: ObjectId) -> Sheaf {
    let (complex, field, mut dims, mut rho, mut arrows) = f.clone().into_parts();
    let n = dims[o.0];
    for m in rho[o.0].iter_mut() {
        let mut p = m.embed(n + 1, n + 1).expect("larger");
        p.set(n, n, FieldScalar::one(field)).expect("in range");
        *m = p;
    }
    for a in complex.scwol().arrows() {
        let m = &mut arrows[a.id.0];
        if a.terminal == o {
            *m = m.embed(m.rows() + 1, m.cols()).expect("larger");
        } else if a.initial == o {
            *m = m.embed(m.rows(), m.cols() + 1).expect("larger");
        }
    }
    dims[o.0] += 1;
    Sheaf::new(complex, field, dims, rho, arrows).expect("padded shapes")
}

/// Zeroes every `A_a` with `i(a) = o`. Keeps the sheaf valid when no arrow
/// ends at `o`.
pub fn zero_source_arrows(f: &Sheaf, o: ObjectId) -> Sheaf {
    let (complex, field, dims, rho, mut arrows) = f.clone().into_parts();
    for a in complex.scwol().arrows().iter().filter(|a| a.initial == o) {
        arrows[a.id.0] = Matrix::zeros(field, dims[a.terminal.0], dims[a.initial.0]);
    }
    Sheaf::new(complex, field, dims, rho, arrows).expect("same shapes")
}

/// Trivial `ρ`, keeping the arrows when that is still a sheaf and falling
/// back to identity arrows otherwise.
pub fn trivialize_rho(f: &Sheaf) -> Sheaf {
    let (complex, field, dims, _, arrows) = f.clone().into_parts();
    let rho: Vec<Vec<Matrix>> = complex
        .scwol()
        .objects()
        .map(|o| vec![Matrix::identity(field, dims[o.0]); complex.group(o).order()])
        .collect();
    let kept = Sheaf::new(complex.clone(), field, dims.clone(), rho.clone(), arrows).expect("same shapes");
    if validate_sheaf(&kept).passed() {
        return kept;
    }
    let n = dims[0];
    let identity = vec![Matrix::identity(field, n); complex.scwol().arrows().len()];
    Sheaf::new(complex, field, dims, rho, identity).expect("constant rank")
}

/// The targeted mutation breaking one dev property, when the fixture admits
/// one that stays a sheaf.
pub fn mutate(f: &Sheaf, property: DevProperty) -> Option<Sheaf> {
    let c = f.complex();
    let s = c.scwol();
    match property {
        DevProperty::ConstantRank => {
            if s.object_count() < 2 {
                return None;
            }
            let o = s.objects().find(|&o| s.arrows().iter().any(|a| a.initial == o || a.terminal == o))?;
            Some(pad_stalk(f, o))
        }
        DevProperty::Invertibility => {
            let o = s
                .objects()
                .find(|&o| s.arrows().iter().any(|a| a.initial == o) && s.arrows().iter().all(|a| a.terminal != o))?;
            Some(zero_source_arrows(f, o))
        }
        DevProperty::Injectivity => {
            if c.groups().iter().all(|g| g.order() == 1) {
                return None;
            }
            Some(trivialize_rho(f))
        }
    }
}

fn group_slug(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|ch| if ch.is_ascii_alphanumeric() { ch.to_ascii_lowercase() } else { '-' })
        .collect();
    while s.contains("--") {
        s = s.replace("--", "-");
    }
    s.trim_matches('-').to_string()
}

fn write(dir: &Path, name: &str, text: String) -> io::Result<()> {
    fs::write(dir.join(name), text)
}

fn bundle(name: &str, sheaf: Option<&str>, morphism: Option<&str>) -> BundleFile {
    BundleFile {
        kind: "bundle".into(),
        version: VERSION,
        name: name.into(),
        description: None,
        complex: Source::Path("complex.json".into()),
        sheaf: sheaf.map(|s| Source::Path(s.into())),
        morphism: morphism.map(|s| Source::Path(s.into())),
    }
}

/// Writes `complex.json`, its base and group files, `sheaf.json`,
/// `morphism.json` when present, and `bundle.json` into `dir`.
pub fn export_fixture(fx: &Fixture, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let c = &fx.complex;
    let base = match &fx.cell {
        Some(cell) => {
            write(dir, "cell-complex.json", to_json(&cell_complex_file(cell)))?;
            "cell-complex.json"
        }
        None => {
            write(dir, "scwol.json", to_json(&scwol_file(c.scwol())))?;
            "scwol.json"
        }
    };
    let mut group_paths = Vec::new();
    let mut written: BTreeMap<String, FiniteGroup> = BTreeMap::new();
    let mut export_group = |g: &FiniteGroup| -> io::Result<String> {
        let file = format!("group-{}.json", group_slug(g.name()));
        match written.get(&file) {
            Some(existing) if existing == g => {}
            Some(_) => return Err(io::Error::other(format!("two different groups map to {file}"))),
            None => {
                write(dir, &file, to_json(&group_file(g)))?;
                written.insert(file.clone(), g.clone());
            }
        }
        Ok(file)
    };
    for g in c.groups() {
        group_paths.push(Source::Path(export_group(g)?));
    }
    let target = match &fx.morphism {
        Some(m) => Some(export_group(m.target())?),
        None => None,
    };
    write(dir, "complex.json", to_json(&complex_file_with(c, Source::Path(base.into()), group_paths)))?;
    let here = || Source::Path("complex.json".into());
    write(dir, "sheaf.json", to_json(&sheaf_file(&fx.sheaf, here())))?;
    if let (Some(m), Some(t)) = (&fx.morphism, &target) {
        write(dir, "morphism.json", to_json(&morphism_file(m, here(), Source::Path(t.clone()))))?;
    }
    let morphism = fx.morphism.as_ref().map(|_| "morphism.json");
    write(dir, "bundle.json", to_json(&bundle(fx.name, Some("sheaf.json"), morphism)))?;
    Ok(())
}

/// The four fixtures, their variants, and the disconnected example.
pub fn export_all(root: &Path) -> io::Result<()> {
    for fx in all() {
        export_fixture(&fx, &root.join(fx.name))?;
    }
    let here = || Source::Path("complex.json".into());

    let seg = root.join("fix-seg");
    write(&seg, "sheaf-trivial.json", to_json(&sheaf_file(&fix_seg_trivial_sheaf(), here())))?;
    write(&seg, "bundle-trivial.json", to_json(&bundle("fix-seg-trivial", Some("sheaf-trivial.json"), None)))?;
    let collapsed = fix_seg_collapsed_morphism();
    let target = Source::Path(format!("group-{}.json", group_slug(collapsed.target().name())));
    write(&seg, "morphism-collapsed.json", to_json(&morphism_file(&collapsed, here(), target)))?;
    write(&seg, "bundle-collapsed.json", to_json(&bundle("fix-seg-collapsed", None, Some("morphism-collapsed.json"))))?;

    let tri = root.join("fix-tri");
    write(&tri, "sheaf-broken.json", to_json(&sheaf_file(&fix_tri_broken_sheaf(), here())))?;
    write(&tri, "bundle-broken.json", to_json(&bundle("fix-tri-broken", Some("sheaf-broken.json"), None)))?;

    let dis = disconnected();
    export_fixture(&dis, &root.join(dis.name))?;
    Ok(())
}
