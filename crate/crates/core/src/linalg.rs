//! Dense exact linear algebra.
//!
//! Elimination pivots on the first nonzero entry in column order. There is
//! no tolerance anywhere: a pivot is nonzero or it is not.

use std::fmt;

use crate::scalar::Field;

/// Row-major dense matrix over an exact field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<F>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| F::from_i64(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + prod;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = F::one() / m[(r, c)].clone();
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].clone() * inv.clone();
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let sub = factor.clone() * m[(r, j)].clone();
                    m[(i, j)] = m[(i, j)].clone() - sub;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank and a canonical basis of the right nullspace.
    ///
    /// The basis has one vector per free column `j`, with a `1` in position
    /// `j`, zeros in the other free columns, and pivot entries read off the
    /// reduced echelon form.
    pub fn rank_nullspace(&self) -> (usize, Vec<Vec<F>>) {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let basis = (0..self.cols)
            .filter(|&j| !is_pivot[j])
            .map(|j| {
                let mut v = vec![F::zero(); self.cols];
                v[j] = F::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, j)].clone();
                }
                v
            })
            .collect();
        (pivots.len(), basis)
    }

    pub fn nullspace(&self) -> Vec<Vec<F>> {
        self.rank_nullspace().1
    }

    /// Basis of `{ y : yᵀ M = 0 }`.
    pub fn left_nullspace(&self) -> Vec<Vec<F>> {
        self.transpose().nullspace()
    }

    /// Solves a square system; `None` when singular.
    pub fn solve(&self, rhs: &[F]) -> Option<Vec<F>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(rhs.len(), self.rows);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n)] = rhs[i].clone();
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some((0..n).map(|i| red[(i, n)].clone()).collect())
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = F::one();
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = red[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = m.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = det * pivot.clone();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone() / pivot.clone();
                for j in c..n {
                    let sub = factor.clone() * m[(c, j)].clone();
                    m[(i, j)] = m[(i, j)].clone() - sub;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: fmt::Display> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.data[i * self.cols + j].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// An incrementally built row space kept in reduced echelon form.
///
/// `insert` reports whether a vector was independent of everything inserted
/// so far, which is how canonical (first-independent-in-order) bases are
/// selected throughout the crate.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F> {
    dim: usize,
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(dim: usize) -> Self {
        EchelonBasis { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Residual of `v` after eliminating against the stored rows.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.dim);
        let mut out = v.to_vec();
        for (p, row) in &self.rows {
            if out[*p].is_zero() {
                continue;
            }
            let factor = out[*p].clone();
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o = o.clone() - factor.clone() * r.clone();
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Inserts `v`; returns `true` if it enlarged the span.
    pub fn insert(&mut self, v: &[F]) -> bool {
        let mut res = self.reduce(v);
        let Some(p) = res.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = F::one() / res[p].clone();
        for x in res.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let factor = row[p].clone();
            for (r, x) in row.iter_mut().zip(&res) {
                if !x.is_zero() {
                    *r = r.clone() - factor.clone() * x.clone();
                }
            }
        }
        self.rows.push((p, res));
        true
    }
}

/// Indices of the first maximal independent subset of `vectors`, in order.
/// Whether `v` lies in the span of `span` (vectors of length `v.len()`).
pub fn in_span<F: Field>(span: &[Vec<F>], v: &[F]) -> bool {
    let mut b = EchelonBasis::new(v.len());
    for s in span {
        b.insert(s);
    }
    b.contains(v)
}

pub fn independent_prefix<F: Field>(dim: usize, vectors: &[Vec<F>]) -> Vec<usize> {
    let mut basis = EchelonBasis::new(dim);
    vectors
        .iter()
        .enumerate()
        .filter_map(|(i, v)| basis.insert(v).then_some(i))
        .collect()
}

/// Basis (in ambient coordinates) of the intersection of a subspace, given
/// by spanning vectors, with the kernel of `constraints` (each row a linear
/// functional on ambient coordinates).
pub fn restrict_kernel<F: Field>(span: &[Vec<F>], constraints: &[Vec<F>]) -> Vec<Vec<F>> {
    if span.is_empty() {
        return Vec::new();
    }
    if constraints.is_empty() {
        return span.to_vec();
    }
    let k = span.len();
    let rows: Vec<Vec<F>> = constraints.iter().map(|c| span.iter().map(|s| dot(c, s)).collect()).collect();
    let kernel = Matrix::from_rows(k, rows).nullspace();
    let dim = span[0].len();
    kernel
        .iter()
        .map(|coef| {
            let mut v = vec![F::zero(); dim];
            for (c, s) in coef.iter().zip(span) {
                if c.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(s) {
                    *x = x.clone() + c.clone() * y.clone();
                }
            }
            v
        })
        .collect()
}
