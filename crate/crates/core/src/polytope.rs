//! H-representation polytopes.
//!
//! A polytope is an irredundant list of named inequalities
//! `α_i(v) = ⟨a_i, v⟩ + b_i ≥ 0`, one per facet. Validation enumerates the
//! vertices exhaustively over `n`-subsets of facets, which is exact and fast
//! at the sizes this crate targets (a few dozen facets, dimension ≤ 6), and
//! the vertex data is kept alongside the inequalities.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Facet<F> {
    pub name: String,
    pub a: Vec<F>,
    pub b: F,
}

impl<F: Field> Facet<F> {
    pub fn new(name: impl Into<String>, a: Vec<F>, b: F) -> Self {
        Facet { name: name.into(), a, b }
    }

    /// `α(v) = ⟨a, v⟩ + b`.
    pub fn slack(&self, v: &[F]) -> F {
        dot(&self.a, v) + self.b.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex<F> {
    pub point: Vec<F>,
    /// Every facet with zero slack, ascending.
    pub incident: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexData<F> {
    /// Sorted by coordinates.
    pub vertices: Vec<Vertex<F>>,
    pub simple: bool,
}

impl<F: Field> VertexData<F> {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Indices of the vertices lying on every facet in `facets`.
    pub fn vertices_on(&self, facets: &[usize]) -> Vec<usize> {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| facets.iter().all(|f| v.incident.binary_search(f).is_ok()))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let mut sets: Vec<Vec<usize>> = self.vertices.iter().map(|v| v.incident.clone()).collect();
        sets.sort();
        Fingerprint(sets)
    }

    /// Vertex centroid.
    pub fn centroid(&self) -> Vec<F> {
        let n = self.vertices[0].point.len();
        let k = F::from_i64(self.vertices.len() as i64);
        (0..n)
            .map(|j| self.vertices.iter().fold(F::zero(), |acc, v| acc + v.point[j].clone()) / k.clone())
            .collect()
    }
}

/// The sorted list of vertex incidence sets; facet identities are kept, so
/// two polytopes with the same facet list share a fingerprint exactly when
/// their vertex-facet incidences agree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint(pub Vec<Vec<usize>>);

impl Fingerprint {
    pub fn sets(&self) -> &[Vec<usize>] {
        &self.0
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let sets: Vec<String> = self.0.iter().map(|s| format!("{{{}}}", s.iter().map(|&i| names[i].as_str()).join(","))).collect();
        sets.join(" ")
    }
}

/// A validated full-dimensional, bounded, irredundant polytope.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HPolytope<F> {
    dim: usize,
    facets: Vec<Facet<F>>,
    vertex_data: VertexData<F>,
    inverses: SubsetInverses<F>,
}

/// Inverses of the invertible `n`-subsets of normals, computed on first use
/// and shared by every system with the same normals.
#[derive(Clone, Default)]
struct SubsetInverses<F>(Arc<OnceLock<Inverses<F>>>);

type Inverses<F> = Vec<(Vec<usize>, Matrix<F>)>;

impl<F: Field> SubsetInverses<F> {
    fn get(&self, dim: usize, rows: &[(Vec<F>, F)]) -> &[(Vec<usize>, Matrix<F>)] {
        self.0.get_or_init(|| {
            (0..rows.len())
                .combinations(dim)
                .filter_map(|subset| {
                    let m = Matrix::from_rows(dim, subset.iter().map(|&i| rows[i].0.clone()).collect());
                    m.inverse().map(|inv| (subset, inv))
                })
                .collect()
        })
    }
}

// a cache, invisible to comparisons
impl<F> PartialEq for SubsetInverses<F> {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl<F> Eq for SubsetInverses<F> {}

impl<F> Hash for SubsetInverses<F> {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl<F> fmt::Debug for SubsetInverses<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SubsetInverses")
    }
}

impl<F: Field> HPolytope<F> {
    /// Validates an inequality system.
    pub fn new(dim: usize, facets: Vec<Facet<F>>) -> Result<Self> {
        Self::build(dim, facets, true, SubsetInverses(Arc::default()))
    }

    fn build(dim: usize, facets: Vec<Facet<F>>, check_bounded: bool, inverses: SubsetInverses<F>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut seen = BTreeSet::new();
        for f in &facets {
            if f.a.len() != dim {
                return Err(Error::DimensionMismatch { facet: f.name.clone(), expected: dim, got: f.a.len() });
            }
            if !seen.insert(f.name.as_str()) {
                return Err(Error::DuplicateName(f.name.clone()));
            }
        }
        let rows: Vec<(Vec<F>, F)> = facets.iter().map(|f| (f.a.clone(), f.b.clone())).collect();
        if check_bounded && !is_bounded(dim, &rows) {
            return Err(Error::Unbounded);
        }
        let raw = raw_vertices(&rows, inverses.get(dim, &rows));
        if raw.is_empty() {
            return Err(Error::Empty);
        }
        let points: Vec<&Vec<F>> = raw.keys().collect();
        if affine_rank(&points) < dim {
            return Err(Error::LowerDimensional);
        }
        let redundant = redundant_rows(dim, rows.len(), &raw);
        if !redundant.is_empty() {
            return Err(Error::Redundant(redundant.into_iter().map(|i| facets[i].name.clone()).collect()));
        }
        let vertices: Vec<Vertex<F>> = raw.into_iter().map(|(point, incident)| Vertex { point, incident }).collect();
        let simple = vertices.iter().all(|v| v.incident.len() == dim);
        Ok(HPolytope { dim, facets, vertex_data: VertexData { vertices, simple }, inverses })
    }

    /// Parses rational strings (`"p/q"` or integers) and validates.
    pub fn parse(dim: usize, raw: &[(String, Vec<String>, String)]) -> Result<Self> {
        let parse = |s: &str| F::parse_exact(s).ok_or_else(|| Error::BadScalar(s.to_string()));
        let facets = raw
            .iter()
            .map(|(name, a, b)| Ok(Facet::new(name.clone(), a.iter().map(|x| parse(x)).collect::<Result<Vec<F>>>()?, parse(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, facets)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet<F>] {
        &self.facets
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.facets.iter().map(|f| f.name.clone()).collect()
    }

    pub fn facet_index(&self, name: &str) -> Result<usize> {
        self.facets.iter().position(|f| f.name == name).ok_or_else(|| Error::UnknownFacet(name.to_string()))
    }

    pub fn vertex_data(&self) -> &VertexData<F> {
        &self.vertex_data
    }

    pub fn vertices(&self) -> &[Vertex<F>] {
        &self.vertex_data.vertices
    }

    pub fn is_simple(&self) -> bool {
        self.vertex_data.simple
    }

    pub fn fingerprint(&self) -> Fingerprint {
        self.vertex_data.fingerprint()
    }

    /// Matrix whose rows are the linear parts `a_i`.
    pub fn normal_matrix(&self) -> Matrix<F> {
        Matrix::from_rows(self.dim, self.facets.iter().map(|f| f.a.clone()).collect())
    }

    /// The system with offsets `α_i(v) ≥ ε_i`, validated. A row that turns
    /// redundant is reported as [`Error::FacetLost`].
    pub fn with_offsets(&self, eps: &[F]) -> Result<Self> {
        if eps.len() != self.facets.len() {
            return Err(Error::DisplacementLength { expected: self.facets.len(), got: eps.len() });
        }
        let facets = self
            .facets
            .iter()
            .zip(eps)
            .map(|(f, e)| Facet::new(f.name.clone(), f.a.clone(), f.b.clone() - e.clone()))
            .collect();
        // same normals, so boundedness carries over
        match Self::build(self.dim, facets, false, self.inverses.clone()) {
            Err(Error::Redundant(names)) => Err(Error::FacetLost(names)),
            other => other,
        }
    }

    /// Vertex-set volume by pulling triangulation; works for any polytope.
    pub fn volume(&self) -> F {
        let lattice = FaceLattice::new(self);
        let pts: Vec<&Vec<F>> = self.vertices().iter().map(|v| &v.point).collect();
        let mut total = F::zero();
        for simplex in lattice.pulling_triangulation() {
            let base = pts[simplex[0]];
            let rows = simplex[1..].iter().map(|&k| pts[k].iter().zip(base).map(|(x, y)| x.clone() - y.clone()).collect()).collect();
            total = total + Matrix::from_rows(self.dim, rows).determinant().abs();
        }
        total / crate::scalar::factorial::<F>(self.dim)
    }
}

impl<F: Field> fmt::Display for HPolytope<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for facet in &self.facets {
            let mut terms = Vec::new();
            for (j, c) in facet.a.iter().enumerate() {
                if !c.is_zero() {
                    terms.push(format!("{}*v{}", c, j));
                }
            }
            writeln!(f, "{}: {} + {} >= 0", facet.name, terms.join(" + "), facet.b)?;
        }
        Ok(())
    }
}

/// Affine rank (dimension of the affine hull) of a point set; `-1` is
/// returned as `0` for the empty set.
pub fn affine_rank<F: Field>(points: &[&Vec<F>]) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let base = points[0];
    let rows = points[1..].iter().map(|p| p.iter().zip(base).map(|(x, y)| x.clone() - y.clone()).collect()).collect();
    Matrix::from_rows(base.len(), rows).rank()
}

/// Vertices of `{v : a_i v + b_i ≥ 0}` keyed by point, each with its full
/// incident row set.
fn raw_vertices<F: Field>(rows: &[(Vec<F>, F)], inverses: &[(Vec<usize>, Matrix<F>)]) -> BTreeMap<Vec<F>, Vec<usize>> {
    let mut out: BTreeMap<Vec<F>, Vec<usize>> = BTreeMap::new();
    for (subset, inv) in inverses {
        let rhs: Vec<F> = subset.iter().map(|&i| -rows[i].1.clone()).collect();
        let p = inv.mul_vec(&rhs);
        if out.contains_key(&p) {
            continue;
        }
        let mut incident = Vec::new();
        let mut feasible = true;
        for (i, (a, b)) in rows.iter().enumerate() {
            let s = dot(a, &p) + b.clone();
            if s.is_negative() {
                feasible = false;
                break;
            }
            if s.is_zero() {
                incident.push(i);
            }
        }
        if feasible {
            out.insert(p, incident);
        }
    }
    out
}

/// Whether `{v : a_i v + b_i ≥ 0}` has trivial recession cone
/// `{d : a_i d ≥ 0}`.
fn is_bounded<F: Field>(dim: usize, rows: &[(Vec<F>, F)]) -> bool {
    let normals = Matrix::from_rows(dim, rows.iter().map(|r| r.0.clone()).collect());
    if normals.rank() < dim {
        return false;
    }
    // The cone is pointed; it is nonzero iff it has an extreme ray, and every
    // extreme ray is cut out by n-1 independent tight rows.
    for subset in (0..rows.len()).combinations(dim - 1) {
        let m = Matrix::from_rows(dim, subset.iter().map(|&i| rows[i].0.clone()).collect());
        let (rank, kernel) = m.rank_nullspace();
        if rank != dim - 1 {
            continue;
        }
        let d = &kernel[0];
        let signs: Vec<F> = rows.iter().map(|(a, _)| dot(a, d)).collect();
        if signs.iter().all(|s| !s.is_negative()) || signs.iter().all(|s| !s.is_positive()) {
            return false;
        }
    }
    true
}

/// Rows that do not cut out a facet of the (bounded, full-dimensional)
/// polytope: their tight vertices span less than a hyperplane, or another
/// row has the same tight set. For a bounded polytope this is exactly the
/// set of rows whose removal leaves the vertex set unchanged.
fn redundant_rows<F: Field>(dim: usize, nrows: usize, vertices: &BTreeMap<Vec<F>, Vec<usize>>) -> Vec<usize> {
    let mut tight: Vec<Vec<&Vec<F>>> = vec![Vec::new(); nrows];
    for (p, inc) in vertices {
        for &i in inc {
            tight[i].push(p);
        }
    }
    (0..nrows)
        .filter(|&i| {
            tight[i].is_empty()
                || affine_rank(&tight[i]) + 1 < dim
                || tight.iter().enumerate().any(|(k, t)| k != i && t == &tight[i])
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    /// `-1` for the empty face.
    pub dim: isize,
    pub vertices: Vec<usize>,
    /// Facets containing the face.
    pub facets: Vec<usize>,
}

/// All faces of a polytope, from the empty face to the polytope itself,
/// ordered by dimension and then vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLattice {
    dim: usize,
    faces: Vec<Face>,
    /// `(lower, upper)` index pairs with `dim(upper) = dim(lower) + 1`.
    covers: Vec<(usize, usize)>,
}

impl FaceLattice {
    pub fn new<F: Field>(p: &HPolytope<F>) -> Self {
        let vd = p.vertex_data();
        let nf = p.facet_count();
        let facet_sets: Vec<BTreeSet<usize>> = (0..nf).map(|i| vd.vertices_on(&[i]).into_iter().collect()).collect();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut frontier: Vec<BTreeSet<usize>> = facet_sets.clone();
        for s in &facet_sets {
            found.insert(s.iter().copied().collect());
        }
        while let Some(s) = frontier.pop() {
            for f in &facet_sets {
                let meet: BTreeSet<usize> = s.intersection(f).copied().collect();
                if meet.is_empty() {
                    continue;
                }
                let key: Vec<usize> = meet.iter().copied().collect();
                if found.insert(key) {
                    frontier.push(meet);
                }
            }
        }
        let all: Vec<usize> = (0..vd.len()).collect();
        found.insert(all);
        let mut faces: Vec<Face> = found
            .into_iter()
            .map(|verts| {
                let pts: Vec<&Vec<F>> = verts.iter().map(|&k| &vd.vertices[k].point).collect();
                let facets = (0..nf).filter(|&i| verts.iter().all(|v| facet_sets[i].contains(v))).collect();
                Face { dim: affine_rank(&pts) as isize, vertices: verts, facets }
            })
            .collect();
        faces.push(Face { dim: -1, vertices: Vec::new(), facets: (0..nf).collect() });
        Self::from_faces(p.dim(), faces)
    }

    /// Lattice from an explicit face list; order and covers are derived
    /// from vertex-set inclusion. No polytope axioms are checked.
    pub fn from_faces(dim: usize, mut faces: Vec<Face>) -> Self {
        faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertices.cmp(&b.vertices)));
        let mut covers = Vec::new();
        for (i, lo) in faces.iter().enumerate() {
            for (j, hi) in faces.iter().enumerate() {
                if hi.dim == lo.dim + 1 && lo.vertices.iter().all(|v| hi.vertices.binary_search(v).is_ok()) {
                    covers.push((i, j));
                }
            }
        }
        FaceLattice { dim, faces, covers }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn faces_of_dim(&self, d: isize) -> impl Iterator<Item = (usize, &Face)> {
        self.faces.iter().enumerate().filter(move |(_, f)| f.dim == d)
    }

    /// Face counts `f_0, …, f_{n-1}`.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.dim as isize).map(|d| self.faces_of_dim(d).count()).collect()
    }

    /// `Σ_{i<n} (−1)^i f_i`, which equals `1 − (−1)^n` for a polytope.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) }).sum()
    }

    /// Index of the face with exactly this vertex set.
    pub fn find(&self, vertices: &[usize]) -> Option<usize> {
        self.faces.iter().position(|f| f.vertices == vertices)
    }

    /// `faces[i] ⊆ faces[j]`.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        let (lo, hi) = (&self.faces[i], &self.faces[j]);
        lo.dim <= hi.dim && lo.vertices.iter().all(|v| hi.vertices.binary_search(v).is_ok())
    }

    /// Pulling triangulation as vertex-index simplices. Depends only on the
    /// face lattice, so it stays valid across every realization of the
    /// combinatorial type.
    pub fn pulling_triangulation(&self) -> Vec<Vec<usize>> {
        let top = self.faces.len() - 1;
        self.pull(top)
    }

    fn pull(&self, face: usize) -> Vec<Vec<usize>> {
        let f = &self.faces[face];
        if f.dim == 0 {
            return vec![vec![f.vertices[0]]];
        }
        let apex = f.vertices[0];
        let mut out = Vec::new();
        for &(lo, hi) in &self.covers {
            if hi != face || self.faces[lo].vertices.binary_search(&apex).is_ok() {
                continue;
            }
            for mut s in self.pull(lo) {
                s.insert(0, apex);
                out.push(s);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(x: i64) -> Q {
        Q::from_i64(x)
    }

    fn row(name: &str, a: &[i64], b: i64) -> Facet<Q> {
        Facet::new(name, a.iter().map(|&x| q(x)).collect(), q(b))
    }

    fn cube_rows() -> Vec<Facet<Q>> {
        vec![
            row("x0", &[1, 0, 0], 0),
            row("x1", &[-1, 0, 0], 1),
            row("y0", &[0, 1, 0], 0),
            row("y1", &[0, -1, 0], 1),
            row("z0", &[0, 0, 1], 0),
            row("z1", &[0, 0, -1], 1),
        ]
    }

    #[test]
    fn cube_validates() {
        let p = HPolytope::new(3, cube_rows()).unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.facet_count(), 6);
        assert_eq!(p.vertices().len(), 8);
        assert!(p.vertices().iter().all(|v| v.incident.len() == 3));
        assert!(p.is_simple());
        assert_eq!(p.volume(), q(1));
    }

    #[test]
    fn redundant_row_is_named() {
        let mut rows = cube_rows();
        rows.push(row("extra", &[1, 0, 0], 1));
        assert_eq!(HPolytope::new(3, rows), Err(Error::Redundant(vec!["extra".into()])));
    }

    #[test]
    fn weakly_redundant_row_is_rejected() {
        // touches the cube only at the vertex (1,1,1)
        let mut rows = cube_rows();
        rows.push(row("corner", &[-1, -1, -1], 3));
        assert_eq!(HPolytope::new(3, rows), Err(Error::Redundant(vec!["corner".into()])));
    }

    #[test]
    fn half_line_is_unbounded() {
        assert_eq!(HPolytope::new(1, vec![row("x", &[1], 0)]), Err(Error::Unbounded));
        let mut rows = cube_rows();
        rows.pop();
        assert_eq!(HPolytope::new(3, rows), Err(Error::Unbounded));
    }

    #[test]
    fn flat_and_empty_systems() {
        let flat = vec![row("a", &[1, 0], 0), row("b", &[-1, 0], 0), row("c", &[0, 1], 0), row("d", &[0, -1], 1)];
        assert_eq!(HPolytope::new(2, flat), Err(Error::LowerDimensional));
        let empty = vec![row("a", &[1], -2), row("b", &[-1], 1)];
        assert_eq!(HPolytope::new(1, empty), Err(Error::Empty));
    }

    #[test]
    fn duplicate_names_and_ragged_rows() {
        let mut rows = cube_rows();
        rows[1].name = "x0".into();
        assert_eq!(HPolytope::new(3, rows), Err(Error::DuplicateName("x0".into())));
        let mut rows = cube_rows();
        rows[2].a.pop();
        assert!(matches!(HPolytope::new(3, rows), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn parse_strings() {
        let raw = vec![
            ("a".to_string(), vec!["1/2".to_string()], "0".to_string()),
            ("b".to_string(), vec!["-1".to_string()], "3/4".to_string()),
        ];
        let p = HPolytope::<Q>::parse(1, &raw).unwrap();
        assert_eq!(p.vertices().len(), 2);
        assert_eq!(p.volume(), Q::frac(3, 4));
        let bad = vec![("a".to_string(), vec!["0.5".to_string()], "0".to_string())];
        assert_eq!(HPolytope::<Q>::parse(1, &bad), Err(Error::BadScalar("0.5".into())));
    }

    #[test]
    fn pyramid_vertices() {
        let p = builtin::<Q>("pyr-square").unwrap();
        assert_eq!(p.vertices().len(), 5);
        assert!(!p.is_simple());
        let apex = p.vertices().iter().find(|v| v.point == vec![q(0), q(0), q(1)]).unwrap();
        let names: Vec<&str> = apex.incident.iter().map(|&i| p.facets()[i].name.as_str()).collect();
        assert_eq!(names, ["N", "S", "E", "W"]);
        assert_eq!(p.volume(), Q::frac(4, 3));
    }

    #[test]
    fn octahedron_vertices() {
        let p = builtin::<Q>("cross(3)").unwrap();
        assert_eq!(p.vertices().len(), 6);
        assert!(p.vertices().iter().all(|v| v.incident.len() == 4));
        assert!(!p.is_simple());
        assert_eq!(p.volume(), Q::frac(4, 3));
    }

    #[test]
    fn f_vectors_and_euler() {
        for (name, f) in [("pyr-square", vec![5, 8, 5]), ("cube(3)", vec![8, 12, 6]), ("cross(3)", vec![6, 12, 8])] {
            let p = builtin::<Q>(name).unwrap();
            let l = FaceLattice::new(&p);
            assert_eq!(l.f_vector(), f, "{name}");
            assert_eq!(l.euler_characteristic(), 2);
        }
        for name in ["cube(4)", "simplex(4)", "cross(4)", "pyr(pyr-square)", "prism(simplex(2))", "simplex(5)"] {
            let p = builtin::<Q>(name).unwrap();
            let l = FaceLattice::new(&p);
            let n = p.dim() as i64;
            assert_eq!(l.euler_characteristic(), 1 - (-1i64).pow(n as u32), "{name}");
        }
    }

    #[test]
    fn vertices_are_extreme_points() {
        // A vertex is extreme iff it is the unique maximizer of some linear
        // functional over the vertex set; the sum of its incident inward
        // normals, negated, is such a functional.
        for name in ["pyr-square", "cross(3)", "cube(3)", "pyr(pyr-square)"] {
            let p = builtin::<Q>(name).unwrap();
            for v in p.vertices() {
                let c: Vec<Q> = (0..p.dim())
                    .map(|j| v.incident.iter().fold(q(0), |acc, &i| acc - p.facets()[i].a[j].clone()))
                    .collect();
                let best = dot(&c, &v.point);
                for w in p.vertices().iter().filter(|w| w.point != v.point) {
                    assert!(dot(&c, &w.point) < best, "{name}");
                }
            }
        }
    }

    #[test]
    fn facet_reordering_relabels_vertices() {
        let p = builtin::<Q>("pyr-square").unwrap();
        let perm = [3usize, 0, 4, 1, 2];
        let facets: Vec<Facet<Q>> = perm.iter().map(|&i| p.facets()[i].clone()).collect();
        let r = HPolytope::new(3, facets).unwrap();
        assert_eq!(r.vertices().len(), p.vertices().len());
        for (v, w) in p.vertices().iter().zip(r.vertices()) {
            assert_eq!(v.point, w.point);
            let mut mapped: Vec<usize> = w.incident.iter().map(|&k| perm[k]).collect();
            mapped.sort();
            assert_eq!(mapped, v.incident);
        }
    }

    #[test]
    fn offsets_that_swallow_a_facet() {
        let p = builtin::<Q>("pyr-square").unwrap();
        // raise the base past the apex
        let eps = vec![q(0), q(0), q(0), q(0), q(3)];
        assert!(matches!(p.with_offsets(&eps), Err(Error::Empty)));
        let eps = vec![q(0), q(0), q(0), q(0), q(2)];
        assert!(matches!(p.with_offsets(&eps), Err(Error::LowerDimensional)));
        // pushing one octahedron facet out by 2 leaves it touching a single point
        let oct = builtin::<Q>("octahedron").unwrap();
        let mut eps = vec![q(0); 8];
        eps[0] = q(-2);
        assert_eq!(oct.with_offsets(&eps), Err(Error::FacetLost(vec!["ppp".into()])));
        eps[0] = q(-3);
        assert_eq!(oct.with_offsets(&eps), Err(Error::FacetLost(vec!["ppp".into()])));
    }

    #[test]
    fn pulling_triangulation_covers_volume() {
        let p = builtin::<Q>("cross(3)").unwrap();
        let l = FaceLattice::new(&p);
        assert!(l.pulling_triangulation().iter().all(|s| s.len() == 4));
    }
}
