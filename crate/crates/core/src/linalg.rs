//! Dense vectors and matrices over a [`Scalar`].

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{near_zero, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Vector<S>(pub Vec<S>);

impl<S: Scalar> Vector<S> {
    pub fn new(coords: Vec<S>) -> Self {
        Vector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![S::zero(); dim])
    }

    /// The `i`-th standard basis vector.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = S::one();
        v
    }

    pub fn from_f64(coords: &[f64]) -> Self {
        Vector(coords.iter().map(|&x| S::from_f64_lossy(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, S> {
        self.0.iter()
    }

    pub fn dot(&self, other: &Self) -> S {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() - b.clone()).collect())
    }

    pub fn scale(&self, k: &S) -> Self {
        Vector(self.0.iter().map(|a| a.clone() * k.clone()).collect())
    }

    pub fn neg(&self) -> Self {
        Vector(self.0.iter().map(|a| -a.clone()).collect())
    }

    pub fn max_abs(&self) -> S {
        self.0.iter().fold(S::zero(), |m, a| {
            let a = a.abs();
            if a > m {
                a
            } else {
                m
            }
        })
    }

    pub fn norm_sq(&self) -> S {
        self.dot(self)
    }

    pub fn is_zero_within(&self, tol: &S) -> bool {
        self.0.iter().all(|a| near_zero(a, tol))
    }

    /// Coordinate-wise equality within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: &S) -> bool {
        self.dim() == other.dim()
            && self
                .0
                .iter()
                .zip(&other.0)
                .all(|(a, b)| (a.clone() - b.clone()).abs() <= *tol)
    }

    pub fn to_f64(&self) -> Vector<f64> {
        Vector(self.0.iter().map(|a| a.to_f64_lossy()).collect())
    }

    pub fn cast<T: Scalar>(&self) -> Vector<T> {
        Vector(self.0.iter().map(|a| T::from_f64_lossy(a.to_f64_lossy())).collect())
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                got: self.dim(),
            })
        }
    }
}

impl<S> Index<usize> for Vector<S> {
    type Output = S;

    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S> IndexMut<usize> for Vector<S> {
    fn index_mut(&mut self, i: usize) -> &mut S {
        &mut self.0[i]
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn diagonal(diag: Vec<S>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(Error::DimensionMismatch {
                expected: n_cols,
                got: bad.len(),
            });
        }
        Ok(Matrix {
            rows: n_rows,
            cols: n_cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_columns(cols: &[Vector<S>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            m.set_column(j, c);
        }
        m
    }

    /// Outer product `y ⊗ x*`, i.e. the rank-one map `x ↦ ⟨x*, x⟩ y`.
    pub fn outer(y: &Vector<S>, xstar: &Vector<S>) -> Self {
        let mut m = Self::zeros(y.dim(), xstar.dim());
        for i in 0..y.dim() {
            for j in 0..xstar.dim() {
                m[(i, j)] = y[i].clone() * xstar[j].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vector<S> {
        Vector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> Vector<S> {
        Vector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn set_column(&mut self, j: usize, v: &Vector<S>) {
        for i in 0..self.rows {
            self[(i, j)] = v[i].clone();
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).0).collect()
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

    pub fn mul_vec(&self, x: &Vector<S>) -> Vector<S> {
        debug_assert_eq!(x.dim(), self.cols);
        Vector(
            (0..self.rows)
                .map(|i| {
                    (0..self.cols).fold(S::zero(), |acc, j| {
                        acc + self[(i, j)].clone() * x[j].clone()
                    })
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)].clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * other[(k, j)].clone();
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, k: &S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * k.clone()).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(S, S) -> S) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a.clone(), b.clone()))
                .collect(),
        }
    }

    pub fn max_abs(&self) -> S {
        Vector(self.data.clone()).max_abs()
    }

    pub fn cast<T: Scalar>(&self) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| T::from_f64_lossy(a.to_f64_lossy())).collect(),
        }
    }

    /// Block-diagonal matrix with the given blocks in order.
    pub fn block_diagonal(blocks: &[Matrix<S>]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

/// Row-reduces `rows` in place and returns the indices of a maximal linearly
/// independent subset of the original rows.
pub fn independent_rows<S: Scalar>(rows: &[Vector<S>], tol: &S) -> Vec<usize> {
    let Some(dim) = rows.first().map(Vector::dim) else {
        return Vec::new();
    };
    // Incremental echelon basis: each stored row has a pivot column whose
    // entry is one and which is zero in every other stored row.
    let mut basis: Vec<(usize, Vector<S>)> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut r = row.clone();
        for (p, b) in &basis {
            let f = r[*p].clone();
            if !f.is_zero() {
                r = r.sub(&b.scale(&f));
            }
        }
        let scale = r.max_abs();
        let pivot = (0..dim).max_by(|&a, &b| {
            r[a].abs()
                .partial_cmp(&r[b].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let Some(p) = pivot else { continue };
        let tiny = if S::is_exact() {
            r[p].is_zero()
        } else {
            scale <= *tol
        };
        if tiny {
            continue;
        }
        let inv = S::one() / r[p].clone();
        let r = r.scale(&inv);
        for (_, b) in basis.iter_mut() {
            let f = b[p].clone();
            if !f.is_zero() {
                *b = b.sub(&r.scale(&f));
            }
        }
        basis.push((p, r));
        chosen.push(idx);
        if basis.len() == dim {
            break;
        }
    }
    chosen
}

pub fn rank<S: Scalar>(rows: &[Vector<S>], tol: &S) -> usize {
    independent_rows(rows, tol).len()
}

/// Dimension of the affine hull of `points` (`None` for an empty set).
pub fn affine_dimension<S: Scalar>(points: &[Vector<S>], tol: &S) -> Option<usize> {
    let first = points.first()?;
    let diffs: Vec<_> = points[1..].iter().map(|p| p.sub(first)).collect();
    Some(rank(&diffs, tol))
}

/// Inverse of a square matrix by Gauss-Jordan elimination with partial pivoting.
pub fn invert<S: Scalar>(m: &Matrix<S>, tol: &S) -> Option<Matrix<S>> {
    let n = m.rows();
    if n != m.cols() {
        return None;
    }
    let mut a = m.clone();
    let mut inv: Matrix<S> = Matrix::identity(n);
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| {
            a[(x, col)]
                .abs()
                .partial_cmp(&a[(y, col)].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if near_zero(&a[(pivot, col)], tol) || a[(pivot, col)].is_zero() {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                let t = a[(col, j)].clone();
                a[(col, j)] = a[(pivot, j)].clone();
                a[(pivot, j)] = t;
                let t = inv[(col, j)].clone();
                inv[(col, j)] = inv[(pivot, j)].clone();
                inv[(pivot, j)] = t;
            }
        }
        let p = a[(col, col)].clone();
        for j in 0..n {
            a[(col, j)] = a[(col, j)].clone() / p.clone();
            inv[(col, j)] = inv[(col, j)].clone() / p.clone();
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = a[(i, col)].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..n {
                a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(col, j)].clone();
                inv[(i, j)] = inv[(i, j)].clone() - f.clone() * inv[(col, j)].clone();
            }
        }
    }
    Some(inv)
}

/// Inertia summary of a symmetric matrix: whether it is positive
/// semidefinite and its rank, via symmetric Gaussian elimination.
///
/// Exact on rationals. A zero diagonal pivot forces its whole row to vanish
/// in a PSD matrix, which is what makes the test decidable without pivoting.
pub fn psd_rank<S: Scalar>(m: &Matrix<S>, tol: &S) -> (bool, usize) {
    let n = m.rows();
    let mut a = m.clone();
    let mut rank = 0;
    for k in 0..n {
        let d = a[(k, k)].clone();
        if d < -tol.clone() {
            return (false, rank);
        }
        if near_zero(&d, tol) {
            if (k + 1..n).any(|j| !near_zero(&a[(k, j)], tol)) {
                return (false, rank);
            }
            continue;
        }
        rank += 1;
        for i in k + 1..n {
            let f = a[(i, k)].clone() / d.clone();
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(k, j)].clone();
            }
        }
    }
    (true, rank)
}

/// Largest eigenvalue of a symmetric matrix, computed in `f64`.
pub fn max_symmetric_eigenvalue<S: Scalar>(m: &Matrix<S>) -> f64 {
    let n = m.rows();
    if n == 0 {
        return 0.0;
    }
    let dm = nalgebra::DMatrix::from_fn(n, n, |i, j| m[(i, j)].to_f64_lossy());
    let eig = nalgebra::SymmetricEigen::new(dm);
    eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

/// Unit eigenvector for the largest eigenvalue of a symmetric matrix (`f64`).
pub fn top_symmetric_eigenvector<S: Scalar>(m: &Matrix<S>) -> Vector<f64> {
    let n = m.rows();
    let dm = nalgebra::DMatrix::from_fn(n, n, |i, j| m[(i, j)].to_f64_lossy());
    let eig = nalgebra::SymmetricEigen::new(dm);
    let (best, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
    Vector(eig.eigenvectors.column(best).iter().cloned().collect())
}

/// Unit eigenvector for the smallest eigenvalue of a symmetric matrix (`f64`).
pub fn bottom_symmetric_eigenvector<S: Scalar>(m: &Matrix<S>) -> Vector<f64> {
    top_symmetric_eigenvector(&m.cast::<f64>().scale(&-1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![
            Vector(vec![q(1, 1), q(2, 1), q(3, 1)]),
            Vector(vec![q(2, 1), q(4, 1), q(6, 1)]),
            Vector(vec![q(0, 1), q(1, 1), q(1, 1)]),
        ];
        assert_eq!(rank(&rows, &q(0, 1)), 2);
        assert_eq!(independent_rows(&rows, &q(0, 1)), vec![0, 2]);
    }

    #[test]
    fn affine_dimension_of_segment() {
        let pts = vec![Vector(vec![1.0, 0.0]), Vector(vec![-1.0, 0.0])];
        assert_eq!(affine_dimension(&pts, &1e-9), Some(1));
        assert_eq!(affine_dimension::<f64>(&[], &1e-9), None);
    }

    #[test]
    fn invert_round_trip() {
        let m = Matrix::from_rows(vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]]).unwrap();
        let inv = invert(&m, &q(0, 1)).unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        let singular = Matrix::from_rows(vec![vec![q(1, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]]).unwrap();
        assert!(invert(&singular, &q(0, 1)).is_none());
    }

    #[test]
    fn psd_classification() {
        let pd = Matrix::from_rows(vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(2, 1)]]).unwrap();
        assert_eq!(psd_rank(&pd, &q(0, 1)), (true, 2));
        let semi = Matrix::from_rows(vec![vec![q(1, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]]).unwrap();
        assert_eq!(psd_rank(&semi, &q(0, 1)), (true, 1));
        let indef = Matrix::from_rows(vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]).unwrap();
        assert!(!psd_rank(&indef, &q(0, 1)).0);
    }

    #[test]
    fn block_diagonal_layout() {
        let a = Matrix::from_rows(vec![vec![1.0, 2.0]]).unwrap();
        let b = Matrix::identity(2);
        let m = Matrix::block_diagonal(&[a, b]);
        assert_eq!(m.rows(), 3);
        assert_eq!(m.cols(), 4);
        assert_eq!(m.row(0).0, vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(m.row(2).0, vec![0.0, 0.0, 0.0, 1.0]);
    }
}
