//! Seeded generators for small random instances.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cog::{simple_cog_from_subgroups, ComplexOfGroups, GroupMorphismData};
use crate::exactlin::{Field, FieldScalar, Matrix};
use crate::groups::{FiniteGroup, Subgroup};
use crate::scwol::{complex_to_scwol, CellComplex, Scwol};
use crate::sheaf::{sheaf_from_morphism, DigraphSheaf, Sheaf};

/// A group of order at most `max_order` drawn from a fixed catalogue.
pub fn random_group<R: Rng>(rng: &mut R, max_order: usize) -> Arc<FiniteGroup> {
    let z = FiniteGroup::cyclic;
    let mut pool: Vec<FiniteGroup> = (1..=max_order).map(z).collect();
    pool.extend((3..=max_order / 2).map(FiniteGroup::dihedral));
    pool.push(FiniteGroup::quaternion());
    pool.push(FiniteGroup::alternating4());
    pool.push(FiniteGroup::symmetric(4));
    pool.push(FiniteGroup::direct_product(&z(2), &z(2)));
    pool.push(FiniteGroup::direct_product(&z(2), &z(4)));
    pool.push(FiniteGroup::direct_product(&z(2), &z(6)));
    pool.push(FiniteGroup::direct_product(&z(3), &z(3)));
    pool.push(FiniteGroup::direct_product(&FiniteGroup::direct_product(&z(2), &z(2)), &z(2)));
    pool.push(FiniteGroup::direct_product(&z(2), &FiniteGroup::symmetric(3)));
    pool.push(FiniteGroup::direct_product(&z(3), &FiniteGroup::symmetric(3)));
    pool.push(FiniteGroup::direct_product(&z(2), &FiniteGroup::alternating4()));
    pool.retain(|g| g.order() <= max_order);
    Arc::new(pool.swap_remove(rng.gen_range(0..pool.len())))
}

/// Any digraph on `1..=max_vertices` vertices; loops and parallel edges allowed.
pub fn random_digraph<R: Rng>(rng: &mut R, max_vertices: usize) -> CellComplex {
    let n = rng.gen_range(1..=max_vertices);
    let m = rng.gen_range(0..=2 * n);
    let edges = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    CellComplex::digraph(n, edges)
}

/// A connected digraph whose subdivision has at most `max_objects` objects.
pub fn random_connected_digraph<R: Rng>(rng: &mut R, max_objects: usize) -> CellComplex {
    let max_v = max_objects.div_ceil(2);
    let n = rng.gen_range(1..=max_v);
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push(if rng.gen_bool(0.5) { (u, v) } else { (v, u) });
    }
    let extra = rng.gen_range(0..=max_objects - n - edges.len());
    for _ in 0..extra {
        edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    edges.shuffle(rng);
    CellComplex::digraph(n, edges)
}

/// A simplicial complex of dimension at most two on up to `max_vertices`
/// vertices.
pub fn random_complex<R: Rng>(rng: &mut R, max_vertices: usize) -> CellComplex {
    let n = rng.gen_range(1..=max_vertices);
    let mut triangles = BTreeSet::new();
    if n >= 3 {
        for _ in 0..rng.gen_range(0..=3) {
            let mut vs: Vec<usize> = (0..n).collect();
            vs.shuffle(rng);
            let mut t = [vs[0], vs[1], vs[2]];
            t.sort();
            triangles.insert(t);
        }
    }
    let mut edges = BTreeSet::new();
    for t in &triangles {
        edges.insert((t[0], t[1]));
        edges.insert((t[0], t[2]));
        edges.insert((t[1], t[2]));
    }
    if n >= 2 {
        for _ in 0..rng.gen_range(0..=n) {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                edges.insert((u.min(v), u.max(v)));
            }
        }
    }
    let mut edges: Vec<(usize, usize)> = edges.into_iter().map(|(u, v)| if rng.gen_bool(0.5) { (u, v) } else { (v, u) }).collect();
    edges.shuffle(rng);
    let mut triangles: Vec<[usize; 3]> = triangles
        .into_iter()
        .map(|mut t| {
            t.shuffle(rng);
            t
        })
        .collect();
    triangles.shuffle(rng);
    CellComplex { vertices: (0..n).map(|v| format!("v{v}")).collect(), edges, triangles }
}

/// A connected base with at most `max_objects` objects: usually a digraph,
/// sometimes the 2-simplex.
pub fn random_base<R: Rng>(rng: &mut R, max_objects: usize) -> (CellComplex, Scwol) {
    let cell = if max_objects >= 7 && rng.gen_bool(0.2) {
        crate::fixtures::triangle()
    } else {
        random_connected_digraph(rng, max_objects)
    };
    let scwol = complex_to_scwol(&cell).expect("generated complexes are well formed");
    (cell, scwol)
}

fn random_subgroup_of<R: Rng>(rng: &mut R, g: &FiniteGroup, within: &Subgroup) -> Subgroup {
    let gens: Vec<usize> = (0..rng.gen_range(0..=2))
        .map(|_| within.elements()[rng.gen_range(0..within.order())])
        .collect();
    g.generated_subgroup(&gens).expect("elements of g")
}

/// Subgroups with `assign[i(a)] ⊆ assign[t(a)]`, chosen face-first.
pub fn random_assignment<R: Rng>(rng: &mut R, g: &FiniteGroup, base: &Scwol) -> Vec<Subgroup> {
    let mut assign: Vec<Option<Subgroup>> = vec![None; base.object_count()];
    let mut order: Vec<_> = base.objects().collect();
    // faces have smaller ids than the cells containing them
    order.sort();
    for o in order {
        let mut within = g.whole();
        for a in base.arrows().iter().filter(|a| a.initial == o) {
            let t = assign[a.terminal.0].as_ref().expect("faces first");
            within = within.intersection(t);
        }
        assign[o.0] = Some(random_subgroup_of(rng, g, &within));
    }
    assign.into_iter().map(|s| s.expect("assigned")).collect()
}

/// A developable instance: a complex of subgroups of a random group over a
/// random connected base, with its canonical morphism.
pub fn random_developable<R: Rng>(
    rng: &mut R,
    max_objects: usize,
    max_order: usize,
) -> (Arc<ComplexOfGroups>, GroupMorphismData) {
    let g = random_group(rng, max_order);
    let (_, base) = random_base(rng, max_objects);
    let assign = random_assignment(rng, &g, &base);
    simple_cog_from_subgroups(g, base, &assign).expect("assignment respects inclusions")
}

fn random_matrix<R: Rng>(rng: &mut R, field: Field, rows: usize, cols: usize) -> Matrix {
    let values: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-3..=3)).collect();
    Matrix::from_i64(field, rows, cols, &values).expect("shape")
}

/// A digraph sheaf with stalk dimensions up to 3 and random integer maps.
pub fn random_digraph_sheaf<R: Rng>(rng: &mut R, field: Field, max_vertices: usize) -> DigraphSheaf {
    let graph = random_digraph(rng, max_vertices);
    let vertex_dims: Vec<usize> = graph.vertices.iter().map(|_| rng.gen_range(0..=3)).collect();
    let edge_dims: Vec<usize> = graph.edges.iter().map(|_| rng.gen_range(0..=3)).collect();
    let maps = graph
        .edges
        .iter()
        .zip(&edge_dims)
        .map(|(&(t, h), &d)| (random_matrix(rng, field, vertex_dims[t], d), random_matrix(rng, field, vertex_dims[h], d)))
        .collect();
    DigraphSheaf { graph, vertex_dims, edge_dims, maps }
}

/// Adds one to a random entry of a random `ρ` or `A` matrix.
pub fn perturb<R: Rng>(rng: &mut R, f: &Sheaf) -> Sheaf {
    let (complex, field, dims, mut rho, mut arrows) = f.clone().into_parts();
    let mut slots: Vec<&mut Matrix> = rho.iter_mut().flatten().chain(arrows.iter_mut()).filter(|m| m.rows() * m.cols() > 0).collect();
    if let Some(m) = slots.choose_mut(rng) {
        let (r, c) = (rng.gen_range(0..m.rows()), rng.gen_range(0..m.cols()));
        let bumped = m.get(r, c).add(&FieldScalar::one(field)).expect("same field");
        m.set(r, c, bumped).expect("in range");
    }
    Sheaf::new(complex, field, dims, rho, arrows).expect("same shapes")
}

/// A small sheaf for oracle comparisons: the regular sheaf of a random
/// developable instance, a constant sheaf, or a digraph sheaf, each
/// perturbed half of the time.
pub fn random_sheaf<R: Rng>(rng: &mut R, field: Field) -> Sheaf {
    let sheaf = match rng.gen_range(0..3) {
        0 => {
            let (_, m) = random_developable(rng, 6, 8);
            sheaf_from_morphism(&m, field).expect("valid morphism").0
        }
        1 => {
            let (c, _) = random_developable(rng, 8, 12);
            Sheaf::constant(c, field)
        }
        _ => crate::sheaf::friedman_to_scwol_sheaf(&random_digraph_sheaf(rng, field, 4), field).expect("shapes"),
    };
    if rng.gen_bool(0.5) {
        perturb(rng, &sheaf)
    } else {
        sheaf
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cog::{validate_cog, validate_morphism_to_group};
    use crate::scwol::{maximal_tree, validate_scwol};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            assert!(random_group(&mut rng, 24).order() <= 24);
            let (_, s) = random_base(&mut rng, 8);
            assert!(s.object_count() <= 8);
            assert!(maximal_tree(&s).is_ok());
            assert!(validate_scwol(&s).passed());
            let (c, m) = random_developable(&mut rng, 8, 24);
            assert!(validate_cog(&c).passed());
            assert!(validate_morphism_to_group(&m, true).passed());
        }
    }

    #[test]
    fn random_complexes_are_well_formed() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let c = random_complex(&mut rng, 6);
            assert!(validate_scwol(&complex_to_scwol(&c).unwrap()).passed());
        }
    }
}
