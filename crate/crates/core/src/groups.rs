//! Finite groups as Cayley tables, homomorphisms between them, subgroups,
//! and the left regular representation.
//!
//! Element ids run over `0..order` and id `0` is always the identity.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::exactlin::{Field, Matrix};
use crate::report::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid group table: {0}")]
    InvalidTable(ValidationReportText),
    #[error("element {element} out of range for a group of order {order}")]
    ElementOutOfRange { element: usize, order: usize },
    #[error("homomorphism image has length {got}, expected {expected}")]
    ImageLength { got: usize, expected: usize },
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
}

/// Wrapper so a report can ride inside an error's Display.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReportText(pub String);

impl std::fmt::Display for ValidationReportText {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// A validated finite group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    labels: Option<Vec<String>>,
}

/// Checks a raw Cayley table for the group axioms. Reports the Latin-square
/// property, the identity role of id 0, inverses, and associativity (with
/// the first failing triple and the total number of failing triples).
pub fn validate_group_table(table: &[Vec<usize>]) -> ValidationReport {
    let mut report = ValidationReport::new("group table");
    let n = table.len();
    if n == 0 {
        report.push("shape", "table", "a group needs at least the identity");
        return report;
    }
    for (r, row) in table.iter().enumerate() {
        if row.len() != n {
            report.push("shape", format!("row {r}"), format!("length {} != order {n}", row.len()));
        }
        if let Some(&x) = row.iter().find(|&&x| x >= n) {
            report.push("shape", format!("row {r}"), format!("entry {x} out of range"));
        }
    }
    if !report.passed() {
        return report;
    }
    report.count("latin-square", 2 * n);
    for (r, row) in table.iter().enumerate() {
        let distinct: BTreeSet<_> = row.iter().collect();
        if distinct.len() != n {
            report.push("latin-square", format!("row {r}"), "row repeats an element");
        }
    }
    for c in 0..n {
        let distinct: BTreeSet<_> = table.iter().map(|row| row[c]).collect();
        if distinct.len() != n {
            report.push("latin-square", format!("column {c}"), "column repeats an element");
        }
    }
    report.count("identity", n);
    for x in 0..n {
        if table[0][x] != x || table[x][0] != x {
            report.push("identity", format!("element {x}"), "id 0 is not a two-sided identity");
        }
    }
    report.count("inverses", n);
    for x in 0..n {
        if !(0..n).any(|y| table[x][y] == 0 && table[y][x] == 0) {
            report.push("inverses", format!("element {x}"), "no two-sided inverse");
        }
    }
    report.count("associativity", n * n * n);
    let mut failures = 0usize;
    let mut first = None;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if table[table[x][y]][z] != table[x][table[y][z]] {
                    failures += 1;
                    first.get_or_insert((x, y, z));
                }
            }
        }
    }
    if let Some((x, y, z)) = first {
        report.push(
            "associativity",
            format!("({x},{y},{z})"),
            format!("(xy)z != x(yz); {failures} failing triple(s)"),
        );
    }
    report
}

impl FiniteGroup {
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self, GroupError> {
        let report = validate_group_table(&table);
        if !report.passed() {
            return Err(GroupError::InvalidTable(ValidationReportText(report.to_string())));
        }
        let order = table.len();
        if let Some(l) = &labels {
            if l.len() != order {
                return Err(GroupError::InvalidTable(ValidationReportText(format!(
                    "{} labels for order {order}",
                    l.len()
                ))));
            }
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let inverses = (0..order)
            .map(|x| (0..order).find(|&y| flat[x * order + y] == 0).expect("validated"))
            .collect();
        Ok(FiniteGroup { name: name.into(), order, table: flat, inverses, labels })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        Self::from_table(format!("Z{n}"), table, None).expect("cyclic table is a group")
    }

    /// Group generated by permutations of `0..degree`, with elements ordered by
    /// breadth-first discovery from the identity.
    pub fn from_permutations(name: impl Into<String>, degree: usize, generators: &[Vec<usize>]) -> Result<Self, GroupError> {
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index = std::collections::HashMap::new();
        index.insert(identity, 0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for g in generators {
                if g.len() != degree {
                    return Err(GroupError::NotSubgroup("generator of wrong degree".into()));
                }
                // (g * x)(i) = g(x(i))
                let prod: Vec<usize> = elements[k].iter().map(|&i| g[i]).collect();
                if !index.contains_key(&prod) {
                    index.insert(prod.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(prod);
                }
            }
        }
        let n = elements.len();
        let table = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let prod: Vec<usize> = elements[b].iter().map(|&i| elements[a][i]).collect();
                        index[&prod]
                    })
                    .collect()
            })
            .collect();
        Self::from_table(name, table, None)
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            let mut swap: Vec<usize> = (0..degree).collect();
            swap.swap(0, 1);
            gens.push(swap);
            let cycle: Vec<usize> = (0..degree).map(|i| (i + 1) % degree).collect();
            gens.push(cycle);
        }
        Self::from_permutations(format!("S{degree}"), degree, &gens).expect("symmetric group")
    }

    pub fn alternating4() -> Self {
        let gens = vec![vec![1, 2, 0, 3], vec![1, 0, 3, 2]];
        Self::from_permutations("A4", 4, &gens).expect("A4")
    }

    /// Dihedral group of order `2n` acting on the vertices of an `n`-gon.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 3);
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(format!("D{}", 2 * n), n, &[rot, refl]).expect("dihedral")
    }

    /// Quaternion group via its regular permutation action.
    pub fn quaternion() -> Self {
        // elements 1,i,j,k,-1,-i,-j,-k as 0..8; left multiplication by i and j
        let i = vec![1, 4, 3, 6, 5, 0, 7, 2];
        let j = vec![2, 7, 4, 1, 6, 3, 0, 5];
        Self::from_permutations("Q8", 8, &[i, j]).expect("Q8")
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (n, m) = (a.order, b.order);
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| a.mul(x / m, y / m) * m + b.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        Self::from_table(format!("{}x{}", a.name, b.name), table, None).expect("direct product")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    /// Same Cayley table, ignoring names and labels.
    pub fn same_table(&self, other: &FiniteGroup) -> bool {
        self.order == other.order && self.table == other.table
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.order
    }

    fn check(&self, x: usize) -> Result<(), GroupError> {
        if x < self.order {
            Ok(())
        } else {
            Err(GroupError::ElementOutOfRange { element: x, order: self.order })
        }
    }

    /// Product `xy`. Panics on out-of-range ids; use [`FiniteGroup::try_mul`] for unchecked input.
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y]
    }

    pub fn try_mul(&self, x: usize, y: usize) -> Result<usize, GroupError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inverses[x]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|x| (0..self.order).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Closure of a generating set.
    pub fn generated_subgroup(&self, generators: &[usize]) -> Result<Subgroup, GroupError> {
        for &g in generators {
            self.check(g)?;
        }
        let mut seen = BTreeSet::from([0usize]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in generators {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Ok(Subgroup { elements: seen.into_iter().collect() })
    }

    /// Checks closure and identity; for finite sets that is enough.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup, GroupError> {
        for &g in elements {
            self.check(g)?;
        }
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        if !set.contains(&0) {
            return Err(GroupError::NotSubgroup("missing identity".into()));
        }
        for &x in &set {
            for &y in &set {
                if !set.contains(&self.mul(x, y)) {
                    return Err(GroupError::NotSubgroup(format!("{x}*{y} escapes the set")));
                }
            }
        }
        Ok(Subgroup { elements: set.into_iter().collect() })
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { elements: self.elements().collect() }
    }
}

/// By `by · x · by⁻¹`.
pub fn conjugate(g: &FiniteGroup, by: usize, x: usize) -> Result<usize, GroupError> {
    g.check(by)?;
    g.check(x)?;
    Ok(g.mul(g.mul(by, x), g.inv(by)))
}

/// A subgroup as a sorted list of ambient element ids (always starting with 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            elements: self.elements.iter().copied().filter(|&x| other.contains(x)).collect(),
        }
    }

    /// Local id of an ambient element (position in the sorted list).
    pub fn local_id(&self, x: usize) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    /// The subgroup as a standalone group with local ids `0..order`, local id
    /// `k` standing for ambient element `elements()[k]`.
    pub fn as_group(&self, ambient: &FiniteGroup, name: impl Into<String>) -> FiniteGroup {
        let table = self
            .elements
            .iter()
            .map(|&x| {
                self.elements
                    .iter()
                    .map(|&y| self.local_id(ambient.mul(x, y)).expect("subgroup is closed"))
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(name, table, None).expect("subgroup table is a group")
    }
}

/// A map between two finite groups given by the image of each element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    src: Arc<FiniteGroup>,
    dst: Arc<FiniteGroup>,
    image: Vec<usize>,
}

impl GroupHom {
    /// Checks only the shape (length and ranges); the homomorphism law is
    /// checked by [`validate_hom`].
    pub fn new(src: Arc<FiniteGroup>, dst: Arc<FiniteGroup>, image: Vec<usize>) -> Result<Self, GroupError> {
        if image.len() != src.order() {
            return Err(GroupError::ImageLength { got: image.len(), expected: src.order() });
        }
        for &y in &image {
            dst.check(y)?;
        }
        Ok(GroupHom { src, dst, image })
    }

    pub fn identity(g: Arc<FiniteGroup>) -> Self {
        let image = g.elements().collect();
        GroupHom { src: g.clone(), dst: g, image }
    }

    pub fn trivial(src: Arc<FiniteGroup>, dst: Arc<FiniteGroup>) -> Self {
        let image = vec![0; src.order()];
        GroupHom { src, dst, image }
    }

    pub fn src(&self) -> &Arc<FiniteGroup> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<FiniteGroup> {
        &self.dst
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    /// Composite `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom, GroupError> {
        if self.dst != other.src {
            return Err(GroupError::NotSubgroup("composite of non-matching homomorphisms".into()));
        }
        Ok(GroupHom {
            src: self.src.clone(),
            dst: other.dst.clone(),
            image: self.image.iter().map(|&x| other.apply(x)).collect(),
        })
    }

    pub fn kernel(&self) -> Vec<usize> {
        self.src.elements().filter(|&x| self.image[x] == 0).collect()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().len() == 1
    }
}

/// Checks `h(xy) = h(x)h(y)` on all pairs and, when asked, that the kernel is trivial.
pub fn validate_hom(h: &GroupHom, require_injective: bool) -> ValidationReport {
    let mut report = ValidationReport::new(format!("hom {} -> {}", h.src.name(), h.dst.name()));
    let (src, dst) = (&h.src, &h.dst);
    if h.image[0] != 0 {
        report.push("hom-identity", "element 0", format!("identity maps to {}", h.image[0]));
    }
    report.count("hom-law", src.order() * src.order());
    let mut first = None;
    let mut failures = 0;
    for x in src.elements() {
        for y in src.elements() {
            if h.image[src.mul(x, y)] != dst.mul(h.image[x], h.image[y]) {
                failures += 1;
                first.get_or_insert((x, y));
            }
        }
    }
    if let Some((x, y)) = first {
        report.push(
            "hom-law",
            format!("({x},{y})"),
            format!("h(xy) != h(x)h(y); {failures} failing pair(s)"),
        );
    }
    if require_injective {
        report.count("injective", src.order());
        let kernel = h.kernel();
        if kernel.len() > 1 {
            report.push(
                "injective",
                format!("element {}", kernel[1]),
                format!("kernel has size {}", kernel.len()),
            );
        }
    }
    report
}

/// Left regular representation: `x` acts on the basis `{e_y}` by `e_y ↦ e_{xy}`.
pub fn regular_representation(g: &FiniteGroup, field: Field) -> Vec<Matrix> {
    g.elements()
        .map(|x| {
            let perm: Vec<usize> = g.elements().map(|y| g.mul(x, y)).collect();
            Matrix::permutation(field, &perm)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        FiniteGroup::symmetric(3)
    }

    #[test]
    fn z2_is_a_group() {
        assert!(validate_group_table(&[vec![0, 1], vec![1, 0]]).passed());
    }

    #[test]
    fn duplicate_row_entry_breaks_latin_square() {
        let r = validate_group_table(&[vec![0, 1], vec![1, 1]]);
        assert!(r.has_rule("latin-square"));
    }

    #[test]
    fn non_associative_latin_square() {
        // A 6x6 Latin square with identity row and column that is not a group.
        let t: Vec<Vec<usize>> = vec![
            vec![0, 1, 2, 3, 4, 5],
            vec![1, 0, 4, 5, 2, 3],
            vec![2, 5, 1, 4, 3, 0],
            vec![3, 2, 0, 1, 5, 4],
            vec![4, 3, 5, 0, 1, 2],
            vec![5, 4, 3, 2, 0, 1],
        ];
        // brute force over all 216 triples, independent of the validator
        let bad = (0..6)
            .flat_map(|x| (0..6).flat_map(move |y| (0..6).map(move |z| (x, y, z))))
            .filter(|&(x, y, z)| t[t[x][y]][z] != t[x][t[y][z]])
            .count();
        assert!(bad > 0);
        let r = validate_group_table(&t);
        assert!(!r.has_rule("latin-square"));
        assert!(r.has_rule("associativity"));
        assert!(r.violations.iter().any(|v| v.detail.contains(&format!("{bad} failing"))));
    }

    #[test]
    fn hom_examples() {
        let z4 = Arc::new(FiniteGroup::cyclic(4));
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let id = GroupHom::identity(z4.clone());
        assert!(validate_hom(&id, true).passed());

        let red = GroupHom::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        assert!(validate_hom(&red, false).passed());
        let r = validate_hom(&red, true);
        assert!(r.has_rule("injective"));
        assert_eq!(red.kernel(), vec![0, 2]);

        let bad = GroupHom::new(z2, z4, vec![0, 1]).unwrap();
        assert!(validate_hom(&bad, false).has_rule("hom-law"));
    }

    #[test]
    fn conjugation() {
        let g = s3();
        for x in g.elements() {
            assert_eq!(conjugate(&g, 0, x).unwrap(), x);
        }
        let z6 = FiniteGroup::cyclic(6);
        for by in z6.elements() {
            for x in z6.elements() {
                assert_eq!(conjugate(&z6, by, x).unwrap(), x);
            }
        }
        let t = g.elements().find(|&x| g.element_order(x) == 2).unwrap();
        let c = g.elements().find(|&x| g.element_order(x) == 3).unwrap();
        let other = conjugate(&g, t, c).unwrap();
        assert_ne!(other, c);
        assert_eq!(g.element_order(other), 3);
        assert_eq!(other, g.inv(c));
        assert!(conjugate(&g, 6, 0).is_err());
    }

    #[test]
    fn conjugation_undoes_itself() {
        let g = FiniteGroup::dihedral(4);
        for by in g.elements() {
            for x in g.elements() {
                let y = conjugate(&g, g.inv(by), x).unwrap();
                assert_eq!(conjugate(&g, by, y).unwrap(), x);
            }
        }
    }

    #[test]
    fn regular_representation_examples() {
        let q = Field::Rational;
        let z2 = FiniteGroup::cyclic(2);
        let r = regular_representation(&z2, q);
        assert!(r[0].is_identity());
        assert_eq!(r[1], Matrix::from_rows_i64(q, &[vec![0, 1], vec![1, 0]]).unwrap());

        let z3 = FiniteGroup::cyclic(3);
        let r = regular_representation(&z3, q);
        let cube = r[1].mul(&r[1]).unwrap().mul(&r[1]).unwrap();
        assert!(cube.is_identity());
        assert!(!r[1].is_identity());
    }

    #[test]
    fn regular_representation_is_faithful_and_multiplicative() {
        for g in [s3(), FiniteGroup::quaternion(), FiniteGroup::cyclic(5)] {
            let r = regular_representation(&g, Field::Rational);
            let distinct: BTreeSet<String> = r.iter().map(|m| m.to_string()).collect();
            assert_eq!(distinct.len(), g.order());
            for x in g.elements() {
                for y in g.elements() {
                    assert_eq!(r[g.mul(x, y)], r[x].mul(&r[y]).unwrap());
                }
            }
        }
    }

    #[test]
    fn catalogue_orders() {
        assert_eq!(FiniteGroup::symmetric(4).order(), 24);
        assert_eq!(FiniteGroup::alternating4().order(), 12);
        assert_eq!(FiniteGroup::dihedral(5).order(), 10);
        assert_eq!(FiniteGroup::quaternion().order(), 8);
        assert!(!FiniteGroup::quaternion().is_abelian());
        let p = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3));
        assert_eq!(p.order(), 6);
        assert!(p.is_abelian());
    }

    #[test]
    fn subgroups_of_z12() {
        let g = FiniteGroup::cyclic(12);
        assert_eq!(g.generated_subgroup(&[3]).unwrap().elements(), &[0, 3, 6, 9]);
        assert_eq!(g.generated_subgroup(&[2]).unwrap().order(), 6);
        let h = g.subgroup(&[0, 6]).unwrap();
        assert!(h.is_subset_of(&g.generated_subgroup(&[3]).unwrap()));
        assert!(g.subgroup(&[0, 5]).is_err());
        let local = g.generated_subgroup(&[3]).unwrap().as_group(&g, "Z4");
        assert_eq!(local.table_rows(), FiniteGroup::cyclic(4).table_rows());
    }
}
