//! Combinatorial predictions for the Betti numbers: the simple h-vector of
//! an f-vector, the toric (generalized) h-vector of a face lattice, and the
//! Fibonacci counts of the local-global theory.

use std::fmt;

use crate::error::{Error, Result};
use crate::polytope::FaceLattice;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HVector(pub Vec<i64>);

impl HVector {
    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_palindromic(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }
}

impl fmt::Display for HVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Integer polynomials in `t`, coefficients ascending.
type TPoly = Vec<i64>;

fn add_into(acc: &mut TPoly, p: &[i64]) {
    if acc.len() < p.len() {
        acc.resize(p.len(), 0);
    }
    for (a, b) in acc.iter_mut().zip(p) {
        *a += b;
    }
}

fn mul(a: &[i64], b: &[i64]) -> TPoly {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn t_minus_one_pow(k: usize) -> TPoly {
    (0..k).fold(vec![1], |acc, _| mul(&acc, &[-1, 1]))
}

fn trim(mut p: TPoly) -> TPoly {
    while p.len() > 1 && p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// `h(t) = Σ_k f_k (t−1)^k` with `f_n = 1`, where `f = (f_0, …, f_{n−1})`
/// counts faces by dimension. For a simple polytope this is the h-vector
/// of the dual simplicial polytope.
pub fn simple_h_vector(f: &[usize], n: usize) -> Result<HVector> {
    if f.len() != n {
        return Err(Error::DegreeMismatch { expected: n, got: f.len() });
    }
    let mut h = vec![0; n + 1];
    for (k, fk) in f.iter().map(|&x| x as i64).chain([1]).enumerate() {
        let term: TPoly = t_minus_one_pow(k).into_iter().map(|c| c * fk).collect();
        add_into(&mut h, &term);
    }
    let h = HVector(h);
    if !h.is_palindromic() || h.0.iter().any(|&x| x < 0) {
        return Err(Error::NonPalindromicInput(h.0));
    }
    Ok(h)
}

/// Which order the toric recursion runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Reversed face order, the lattice of the polar polytope.
    Dual,
    /// The face lattice as given.
    Primal,
}

/// A graded poset with bottom and top, as rank and order tables.
struct Graded {
    rank: Vec<usize>,
    leq: Vec<Vec<bool>>,
    bottom: usize,
    top: usize,
}

impl Graded {
    fn from_lattice(l: &FaceLattice, side: Side) -> Self {
        let faces = l.faces();
        let m = faces.len();
        let n1 = l.dim() as isize + 1;
        let leq: Vec<Vec<bool>> = (0..m)
            .map(|i| (0..m).map(|j| if side == Side::Primal { l.contains(i, j) } else { l.contains(j, i) }).collect())
            .collect();
        let rank = faces.iter().map(|f| if side == Side::Primal { (f.dim + 1) as usize } else { (n1 - 1 - f.dim) as usize }).collect();
        // faces are sorted by dimension, ∅ first and the polytope last
        let (bottom, top) = if side == Side::Primal { (0, m - 1) } else { (m - 1, 0) };
        Graded { rank, leq, bottom, top }
    }

    fn is_eulerian(&self) -> bool {
        let m = self.rank.len();
        (0..m).all(|x| {
            (0..m).filter(|&y| y != x && self.leq[x][y]).all(|y| {
                let s: i64 = (0..m).filter(|&z| self.leq[x][z] && self.leq[z][y]).map(|z| if self.rank[z].is_multiple_of(2) { 1 } else { -1 }).sum();
                s == 0
            })
        })
    }

    /// Toric `h` of the lower interval below every element, memoized by
    /// processing in rank order.
    fn toric_h(&self) -> Vec<TPoly> {
        let m = self.rank.len();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&x| self.rank[x]);
        let mut h: Vec<TPoly> = vec![Vec::new(); m];
        let mut g: Vec<TPoly> = vec![Vec::new(); m];
        for &x in &order {
            if x == self.bottom {
                h[x] = vec![1];
                g[x] = vec![1];
                continue;
            }
            let mut acc = vec![0];
            for (y, gy) in g.iter().enumerate() {
                if y != x && self.leq[y][x] {
                    let term = mul(gy, &t_minus_one_pow(self.rank[x] - self.rank[y] - 1));
                    add_into(&mut acc, &term);
                }
            }
            let hx = trim(acc);
            // g_0 = h_0, g_i = h_i − h_{i−1} up to ⌊d/2⌋ with d = rank − 1
            let half = (self.rank[x] - 1) / 2;
            g[x] = (0..=half).map(|i| hx.get(i).copied().unwrap_or(0) - if i > 0 { hx.get(i - 1).copied().unwrap_or(0) } else { 0 }).collect();
            h[x] = hx;
        }
        h
    }
}

/// Toric h-vector of the polar polytope, whose entries are the predicted
/// intersection-homology Betti numbers.
pub fn generalized_h_vector(l: &FaceLattice) -> Result<HVector> {
    generalized_h_vector_on(l, Side::Dual)
}

pub fn generalized_h_vector_on(l: &FaceLattice, side: Side) -> Result<HVector> {
    let g = Graded::from_lattice(l, side);
    if !g.is_eulerian() {
        return Err(Error::NotEulerian);
    }
    let mut h = g.toric_h().swap_remove(g.top);
    h.resize(l.dim() + 1, 0);
    Ok(HVector(h))
}

/// `F_1 = F_2 = 1`.
pub fn fibonacci(k: usize) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..k {
        (a, b) = (b, a + b);
    }
    a
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FibonacciCounts {
    /// `F_{n+2}` homology groups.
    pub groups: u64,
    /// `F_{n+1}` of them linearly independent.
    pub independent: u64,
    /// `F_n` strings.
    pub strings: u64,
}

pub fn fibonacci_expected(n: usize) -> FibonacciCounts {
    assert!(n >= 1, "dimension must be positive");
    FibonacciCounts { groups: fibonacci(n + 2), independent: fibonacci(n + 1), strings: fibonacci(n) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin;
    use crate::polytope::{Face, HPolytope};
    use num_rational::BigRational;

    type Q = BigRational;

    fn lattice(name: &str) -> FaceLattice {
        FaceLattice::new(&builtin::<Q>(name).unwrap())
    }

    #[test]
    fn simple_h_from_f_vectors() {
        assert_eq!(simple_h_vector(&[8, 12, 6], 3).unwrap().0, [1, 3, 3, 1]);
        assert_eq!(simple_h_vector(&[4, 6, 4], 3).unwrap().0, [1, 1, 1, 1]);
        assert_eq!(simple_h_vector(&[6, 9, 5], 3).unwrap().0, [1, 2, 2, 1]);
        // the pyramid is not simple
        assert!(matches!(simple_h_vector(&[5, 8, 5], 3), Err(Error::NonPalindromicInput(_))));
        assert!(simple_h_vector(&[8, 12], 3).is_err());
    }

    #[test]
    fn toric_h_on_the_polar_side() {
        assert_eq!(generalized_h_vector(&lattice("pyr-square")).unwrap().0, [1, 2, 2, 1]);
        assert_eq!(generalized_h_vector(&lattice("octahedron")).unwrap().0, [1, 5, 5, 1]);
        assert_eq!(generalized_h_vector(&lattice("cube(3)")).unwrap().0, [1, 3, 3, 1]);
        assert_eq!(generalized_h_vector(&lattice("pyr(pyr-square)")).unwrap().0, [1, 2, 2, 2, 1]);
    }

    #[test]
    fn primal_side_differs_for_the_octahedron() {
        assert_eq!(generalized_h_vector_on(&lattice("octahedron"), Side::Primal).unwrap().0, [1, 3, 3, 1]);
        // self-dual
        assert_eq!(generalized_h_vector_on(&lattice("pyr-square"), Side::Primal).unwrap().0, [1, 2, 2, 1]);
    }

    #[test]
    fn dual_toric_h_equals_simple_h_for_simple_builtins() {
        for name in ["cube(3)", "simplex(3)", "simplex(4)", "prism(simplex(2))", "cube(4)", "prism(cube(3))", "product(simplex(2), simplex(2))"] {
            let l = lattice(name);
            let g = generalized_h_vector(&l).unwrap();
            assert_eq!(g, simple_h_vector(&l.f_vector(), l.dim()).unwrap(), "{name}");
            assert!(g.is_palindromic());
        }
    }

    #[test]
    fn toric_h_is_palindromic() {
        for name in ["pyr-square", "octahedron", "pyr(pyr-square)", "cross(4)", "pyr(octahedron)", "prism(pyr-square)"] {
            let l = lattice(name);
            for side in [Side::Dual, Side::Primal] {
                let h = generalized_h_vector_on(&l, side).unwrap();
                assert!(h.is_palindromic(), "{name} {h}");
                assert_eq!(h.0[0], 1);
            }
        }
    }

    #[test]
    fn rejects_non_eulerian_posets() {
        let p: HPolytope<Q> = builtin("cube(2)").unwrap();
        let l = FaceLattice::new(&p);
        assert!(generalized_h_vector(&FaceLattice::from_faces(2, l.faces().to_vec())).is_ok());
        // drop a vertex: its two edges no longer have Eulerian intervals
        let faces: Vec<Face> = l.faces().iter().filter(|f| f.vertices != [0]).cloned().collect();
        assert_eq!(generalized_h_vector(&FaceLattice::from_faces(2, faces)), Err(Error::NotEulerian));
    }

    #[test]
    fn fibonacci_counts() {
        let groups: Vec<u64> = (3..=6).map(|n| fibonacci_expected(n).groups).collect();
        assert_eq!(groups, [5, 8, 13, 21]);
        assert_eq!(fibonacci_expected(3), FibonacciCounts { groups: 5, independent: 3, strings: 2 });
        assert_eq!(fibonacci_expected(4).strings, 3);
        assert_eq!(fibonacci_expected(6).strings, 8);
        assert_eq!(fibonacci(1), 1);
        assert_eq!(fibonacci(2), 1);
    }
}
