//! Dense matrices over the field of rational functions.
//!
//! The exact backend inverts and takes determinants by fraction-field
//! elimination. The float backend samples the matrix on a circle in the
//! complex plane, solves numerically at each node, and interpolates the
//! numerator and denominator polynomials, whose degrees are known in advance.

mod interp;
mod pfd;

use std::fmt;
use std::ops::{Index, IndexMut};

pub use interp::{interpolate_on_circle, sample_on_circle, CircleGrid};
pub(crate) use interp::{fit_polynomial, rational_matrix_from_samples};
pub use pfd::{pfd_matrix, MatrixPfdTerm, PartialFractionForm};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Matrix};
use crate::ratfun::{cluster_roots, Polynomial, RationalFunction, RootCluster, Scalar, C64};
use crate::tolerance::float_delta;

/// Row-major matrix of rational functions; may be rectangular.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMatrix<T: Scalar> {
    rows: usize,
    cols: usize,
    entries: Vec<RationalFunction<T>>,
}

impl<T: Scalar> RatMatrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<RationalFunction<T>>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RatMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> RationalFunction<T>) -> Self {
        let entries = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        RatMatrix { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| RationalFunction::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { RationalFunction::one() } else { RationalFunction::zero() })
    }

    /// Lifts a scalar matrix to constant functions.
    pub fn from_scalar(m: &Matrix<T>) -> Self {
        Self::from_fn(m.rows(), m.cols(), |i, j| RationalFunction::constant(m[(i, j)].clone()))
    }

    /// λI - A for a square scalar matrix.
    pub fn lambda_minus(a: &Matrix<T>) -> Self {
        Self::from_fn(a.rows(), a.cols(), |i, j| {
            let c = RationalFunction::constant(-a[(i, j)].clone());
            if i == j {
                &c + &RationalFunction::x()
            } else {
                c
            }
        })
    }

    /// λI - self.
    pub fn lambda_minus_self(&self) -> Result<Self> {
        self.require_square()?;
        let mut out = -self;
        for i in 0..self.rows {
            out[(i, i)] = &out[(i, i)] + &RationalFunction::x();
        }
        Ok(out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[RationalFunction<T>] {
        &self.entries
    }

    fn require_square(&self) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "square matrix required, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    fn zip(&self, other: &Self, f: impl Fn(&RationalFunction<T>, &RationalFunction<T>) -> RationalFunction<T>) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        Ok(RatMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(RationalFunction::zero(), |acc, k| {
                let (a, b) = (&self[(i, k)], &other[(k, j)]);
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    &acc + &(a * b)
                }
            })
        }))
    }

    pub fn scale(&self, s: &RationalFunction<T>) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * s)
    }

    pub fn is_proper(&self) -> bool {
        self.entries.iter().all(RationalFunction::is_proper)
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(RationalFunction::is_constant)
    }

    /// Entrywise limit λ→∞ (the constant part of a proper matrix).
    pub fn constant_part(&self) -> Result<Matrix<T>> {
        let data = self
            .entries
            .iter()
            .map(RationalFunction::limit_at_infinity)
            .collect::<Result<Vec<_>>>()?;
        Matrix::new(self.rows, self.cols, data)
    }

    /// Entrywise evaluation; reports the first entry with a pole at λ₀.
    pub fn eval(&self, x: &T) -> Result<Matrix<T>> {
        let mut data = Vec::with_capacity(self.entries.len());
        for (k, e) in self.entries.iter().enumerate() {
            data.push(e.eval(x).map_err(|_| Error::EvaluationAtPole {
                entry: Some((k / self.cols, k % self.cols)),
            })?);
        }
        Matrix::new(self.rows, self.cols, data)
    }

    /// Unchecked complex evaluation.
    pub fn eval_c64(&self, x: C64) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].eval_c64(x))
    }

    /// Distinct poles of all entries, pooled by δ-clustering; multiplicity is
    /// the largest order of the pole in any entry.
    pub fn poles(&self) -> Result<Vec<RootCluster>> {
        let mut all: Vec<RootCluster> = Vec::new();
        for e in &self.entries {
            if !e.den().is_constant() {
                all.extend(e.poles()?);
            }
        }
        pool_poles(&all)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        if T::EXACT {
            self.inverse_exact()
        } else {
            interp::inverse_float(self)
        }
    }

    pub fn det(&self) -> Result<RationalFunction<T>> {
        self.require_square()?;
        if T::EXACT {
            Ok(self.det_exact())
        } else {
            interp::det_float(self)
        }
    }

    /// self⁻¹·b.
    pub fn solve(&self, b: &Self) -> Result<Self> {
        self.require_square()?;
        if b.rows != self.rows {
            return Err(Error::DimensionMismatch("right-hand side rows".into()));
        }
        if T::EXACT {
            self.eliminate(Some(b.clone())).map(|x| x.expect("requested solution"))
        } else {
            self.inverse()?.mul(b)
        }
    }

    pub fn cast<U: Scalar>(&self) -> RatMatrix<U> {
        RatMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].cast())
    }

    fn pivot_row(a: &Self, col: usize, from: usize) -> Option<usize> {
        // Prefer the pivot of lowest total degree to limit growth.
        (from..a.rows)
            .filter(|&r| !a[(r, col)].is_zero())
            .min_by_key(|&r| {
                let e = &a[(r, col)];
                e.num().degree().unwrap_or(0) + e.den().degree().unwrap_or(0)
            })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Gauss–Jordan on [self | rhs]; returns the transformed rhs.
    fn eliminate(&self, rhs: Option<Self>) -> Result<Option<Self>> {
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.unwrap_or_else(|| Self::identity(n));
        for col in 0..n {
            let p = Self::pivot_row(&a, col, col).ok_or(Error::SingularOverFunctionField)?;
            a.swap_rows(p, col);
            b.swap_rows(p, col);
            let inv = a[(col, col)].inv()?;
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] * &inv;
            }
            for j in 0..b.cols {
                b[(col, j)] = &b[(col, j)] * &inv;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    if !a[(col, j)].is_zero() {
                        a[(r, j)] = &a[(r, j)] - &(&f * &a[(col, j)]);
                    }
                }
                for j in 0..b.cols {
                    if !b[(col, j)].is_zero() {
                        b[(r, j)] = &b[(r, j)] - &(&f * &b[(col, j)]);
                    }
                }
            }
        }
        Ok(Some(b))
    }

    fn inverse_exact(&self) -> Result<Self> {
        self.eliminate(None).map(|x| x.expect("requested inverse"))
    }

    fn det_exact(&self) -> RationalFunction<T> {
        let n = self.rows;
        let mut a = self.clone();
        let mut det = RationalFunction::one();
        for col in 0..n {
            let Some(p) = Self::pivot_row(&a, col, col) else {
                return RationalFunction::zero();
            };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let pv = a[(col, col)].clone();
            det = &det * &pv;
            let inv = pv.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = &a[(r, col)] * &inv;
                for j in col..n {
                    if !a[(col, j)].is_zero() {
                        a[(r, j)] = &a[(r, j)] - &(&f * &a[(col, j)]);
                    }
                }
            }
        }
        det
    }
}

/// Pools per-entry poles: values within δ are identified, the order is the maximum.
pub(crate) fn pool_poles(all: &[RootCluster]) -> Result<Vec<RootCluster>> {
    if all.is_empty() {
        return Ok(Vec::new());
    }
    let values: Vec<C64> = all.iter().map(|c| c.value).collect();
    let mut pooled = cluster_roots(&values, float_delta())?;
    for p in &mut pooled {
        p.multiplicity = all
            .iter()
            .filter(|c| (c.value - p.value).norm() <= float_delta() * 1f64.max(p.value.norm()))
            .map(|c| c.multiplicity)
            .max()
            .unwrap_or(1);
    }
    Ok(pooled)
}

impl<T: Scalar> Index<(usize, usize)> for RatMatrix<T> {
    type Output = RationalFunction<T>;
    fn index(&self, (i, j): (usize, usize)) -> &RationalFunction<T> {
        &self.entries[i * self.cols + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for RatMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RationalFunction<T> {
        &mut self.entries[i * self.cols + j]
    }
}

impl<T: Scalar> std::ops::Neg for &RatMatrix<T> {
    type Output = RatMatrix<T>;
    fn neg(self) -> RatMatrix<T> {
        RatMatrix::from_fn(self.rows, self.cols, |i, j| -&self[(i, j)])
    }
}

impl<T: Scalar> fmt::Display for RatMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Polynomial matrix helper: the row-wise product of distinct entry denominators.
pub(crate) fn row_denominators<T: Scalar>(m: &RatMatrix<T>) -> Vec<Polynomial<T>> {
    (0..m.rows)
        .map(|i| {
            let mut dens: Vec<&Polynomial<T>> = Vec::new();
            for j in 0..m.cols {
                let d = m[(i, j)].den();
                if !d.is_constant() && !dens.contains(&d) {
                    dens.push(d);
                }
            }
            dens.into_iter().fold(Polynomial::one(), |acc, d| &acc * d)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::{ExactRational as Q, FloatComplex};

    fn x<T: Scalar>() -> RationalFunction<T> {
        RationalFunction::x()
    }

    fn c<T: Scalar>(v: i64) -> RationalFunction<T> {
        RationalFunction::from_i64(v)
    }

    #[test]
    fn inverse_of_jordan_block() {
        let a = RatMatrix::<Q>::new(2, 2, vec![x(), c(1), c(0), x()]).unwrap();
        let inv = a.inverse().unwrap();
        let l = x::<Q>();
        assert_eq!(inv[(0, 0)], c::<Q>(1) / l.clone());
        assert_eq!(inv[(0, 1)], -(c::<Q>(1) / (&l * &l)));
        assert_eq!(inv[(1, 0)], c(0));
        assert_eq!(a.mul(&inv).unwrap(), RatMatrix::identity(2));
    }

    #[test]
    fn singular_and_det() {
        let a = RatMatrix::<Q>::new(2, 2, vec![x(), x(), x(), x()]).unwrap();
        assert_eq!(a.inverse(), Err(Error::SingularOverFunctionField));
        let b = RatMatrix::<Q>::new(2, 2, vec![x(), c(1), c(1), x()]).unwrap();
        assert_eq!(b.det().unwrap(), &(&x() * &x()) - &c(1));
    }

    #[test]
    fn float_inverse_matches_exact() {
        let a = RatMatrix::<Q>::new(2, 2, vec![x(), c(1), c(0), x()]).unwrap();
        let exact = a.inverse().unwrap();
        let float = a.cast::<FloatComplex>().inverse().unwrap();
        assert_eq!(float, exact.cast::<FloatComplex>());
        let d = RatMatrix::<Q>::new(2, 2, vec![x(), c(1), c(1), x()]).unwrap();
        assert_eq!(d.cast::<FloatComplex>().det().unwrap(), d.det().unwrap().cast());
    }

    #[test]
    fn evaluation_reports_entry() {
        let one = RationalFunction::<Q>::one();
        let r = RatMatrix::new(1, 2, vec![one.clone(), &one / &(&x() - &c(1))]).unwrap();
        assert_eq!(r.eval(&Q::from_i64(1)), Err(Error::EvaluationAtPole { entry: Some((0, 1)) }));
        assert_eq!(r.eval(&Q::from_i64(2)).unwrap(), Matrix::from_i64(&[&[1, 1]]));
    }
}
