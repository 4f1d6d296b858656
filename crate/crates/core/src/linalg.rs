//! Dense scalar matrices over a [`Scalar`] backend, plus the complex-double
//! helpers (Hermitian eigendecomposition, orthonormal completion) used by the
//! numeric pipelines.

use std::fmt;
use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::ratfun::{Scalar, C64};

pub type CMatrix = DMatrix<C64>;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let v = rows
            .iter()
            .map(|r| r.iter().map(|&x| T::from_i64(x)).collect())
            .collect();
        Self::from_rows(v).expect("rectangular literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul_ref(s))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add_ref(b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.sub_ref(b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a.mul_ref(&other[(k, j)]);
                    out[(i, j)] = out[(i, j)].add_ref(&t);
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc.add_ref(&self[(i, i)]))
    }

    /// Row-echelon elimination returning the determinant and, when requested,
    /// the inverse (Gauss–Jordan with partial pivoting by magnitude).
    fn gauss_jordan(&self, want_inverse: bool) -> Result<(T, Option<Self>)> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("square matrix required".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let mut det = T::one();
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a[(r, col)].is_zero())
                .max_by(|&x, &y| a[(x, col)].abs().total_cmp(&a[(y, col)].abs()));
            let Some(p) = pivot else {
                return Ok((T::zero(), None));
            };
            if p != col {
                a.swap_rows(p, col);
                inv.swap_rows(p, col);
                det = -det;
            }
            let pv = a[(col, col)].clone();
            det = det.mul_ref(&pv);
            for j in 0..n {
                a[(col, j)] = a[(col, j)].div_ref(&pv);
                if want_inverse {
                    inv[(col, j)] = inv[(col, j)].div_ref(&pv);
                }
            }
            for r in 0..n {
                if r == col || (!want_inverse && r < col) {
                    continue;
                }
                let f = a[(r, col)].clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = f.mul_ref(&a[(col, j)]);
                    a[(r, j)] = a[(r, j)].sub_ref(&t);
                    if want_inverse {
                        let t = f.mul_ref(&inv[(col, j)]);
                        inv[(r, j)] = inv[(r, j)].sub_ref(&t);
                    }
                }
            }
        }
        Ok((det, want_inverse.then_some(inv)))
    }

    pub fn det(&self) -> Result<T> {
        Ok(self.gauss_jordan(false)?.0)
    }

    /// Fails with [`Error::SingularQ`] when the matrix is singular.
    pub fn inverse(&self) -> Result<Self> {
        self.gauss_jordan(true)?.1.ok_or(Error::SingularQ)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn to_cmatrix(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_c64())
    }

    pub fn from_cmatrix(m: &CMatrix) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| T::from_c64(m[(i, j)]))
    }

    pub fn cast<U: Scalar>(&self) -> Matrix<U> {
        Matrix::from_fn(self.rows, self.cols, |i, j| U::from_c64(self[(i, j)].to_c64()))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }
}

impl<T: Scalar> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Largest entry of |A - A*|.
pub fn hermitian_defect(a: &CMatrix) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            d = d.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    d
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry of |A - B| relative to max(1, |A|, |B|).
pub fn relative_gap(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    let scale = 1f64.max(max_abs(a)).max(max_abs(b));
    max_abs(&(a - b)) / scale
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// unitary eigenvector columns.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let sym = (a + a.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

/// Eigenvalues of a general complex matrix.
pub fn eigenvalues(a: &CMatrix) -> Vec<C64> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    nalgebra::Schur::new(a.clone())
        .eigenvalues()
        .expect("complex Schur form is triangular")
        .iter()
        .copied()
        .collect()
}

/// Columns completing the orthonormal columns of `sigma` to a unitary basis.
pub fn orthonormal_complement(sigma: &CMatrix) -> CMatrix {
    let (n, k) = sigma.shape();
    let mut basis: Vec<nalgebra::DVector<C64>> = sigma.column_iter().map(|c| c.into_owned()).collect();
    let mut extra = Vec::new();
    for e in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = nalgebra::DVector::from_fn(n, |i, _| C64::new(if i == e { 1.0 } else { 0.0 }, 0.0));
        for _ in 0..2 {
            for b in &basis {
                let p = b.dotc(&v);
                v -= b * p;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            v /= C64::new(norm, 0.0);
            basis.push(v.clone());
            extra.push(v);
        }
    }
    debug_assert_eq!(extra.len(), n - k);
    CMatrix::from_fn(n, extra.len(), |i, j| extra[j][i])
}

/// Largest entry of |Σ*Σ - I|.
pub fn orthonormality_defect(sigma: &CMatrix) -> f64 {
    let g = sigma.adjoint() * sigma;
    max_abs(&(g - CMatrix::identity(sigma.ncols(), sigma.ncols())))
}

pub fn block_diag(blocks: &[&CMatrix]) -> CMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let m: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(n, m);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), b.shape()).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

pub fn c64(re: f64) -> C64 {
    C64::new(re, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::{ExactRational as Q, FloatComplex};

    #[test]
    fn exact_inverse_and_det() {
        let a: Matrix<Q> = Matrix::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det().unwrap(), Q::from_i64(18));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(3));
        let s: Matrix<Q> = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.det().unwrap(), Q::zero());
        assert_eq!(s.inverse(), Err(Error::SingularQ));
    }

    #[test]
    fn complement_is_unitary() {
        let s = 0.5f64.sqrt();
        let sigma = CMatrix::from_row_slice(3, 1, &[c64(s), c64(s), c64(0.0)]);
        let d = orthonormal_complement(&sigma);
        let mut w = CMatrix::zeros(3, 3);
        w.set_column(0, &sigma.column(0));
        w.view_mut((0, 1), (3, 2)).copy_from(&d);
        assert!(orthonormality_defect(&w) < 1e-14);
    }

    #[test]
    fn hermitian_eigen_is_sorted() {
        let a: Matrix<FloatComplex> = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
        let (vals, vecs) = hermitian_eigen(&a.to_cmatrix());
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        assert!(orthonormality_defect(&vecs) < 1e-14);
    }
}
