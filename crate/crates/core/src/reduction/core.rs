use super::{check_frame, LabeledMatrix};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, orthonormal_complement, CMatrix, Matrix};
use crate::ratfun::{Polynomial, RationalFunction, Scalar, C64};
use crate::ratmat::{fit_polynomial, rational_matrix_from_samples, sample_on_circle, CircleGrid, RatMatrix};

/// χ_A(λ) = det(λI - A) and adj(λI - A) = Σₖ Bₖ λ^{n-1-k}.
#[derive(Clone, Debug)]
pub struct Resolvent<T: Scalar> {
    pub char_poly: Polynomial<T>,
    pub adjugate: Vec<Matrix<T>>,
}

impl<T: Scalar> Resolvent<T> {
    /// Entry (i, j) of adj(λI - A) as a polynomial.
    pub fn adj_entry(&self, i: usize, j: usize) -> Polynomial<T> {
        let n = self.adjugate.len();
        Polynomial::new((0..n).map(|p| self.adjugate[n - 1 - p][(i, j)].clone()).collect())
    }

    /// Polynomial matrix L·adj(λI - A)·R.
    pub fn sandwich(&self, l: &Matrix<T>, r: &Matrix<T>) -> Result<Vec<Vec<Polynomial<T>>>> {
        let n = self.adjugate.len();
        let blocks = self
            .adjugate
            .iter()
            .map(|b| l.mul(b)?.mul(r))
            .collect::<Result<Vec<_>>>()?;
        Ok((0..l.rows())
            .map(|i| {
                (0..r.cols())
                    .map(|j| Polynomial::new((0..n).map(|p| blocks[n - 1 - p][(i, j)].clone()).collect()))
                    .collect()
            })
            .collect())
    }
}

/// Faddeev–LeVerrier recursion; exact over the exact backend.
pub fn resolvent<T: Scalar>(a: &Matrix<T>) -> Resolvent<T> {
    let n = a.rows();
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    let mut adjugate = Vec::with_capacity(n);
    let mut b = Matrix::identity(n);
    for k in 1..=n {
        adjugate.push(b.clone());
        let ab = a.mul(&b).expect("square");
        let c = -(ab.trace() / T::from_i64(k as i64));
        coeffs[n - k] = c.clone();
        b = ab.add(&Matrix::identity(n).scale(&c)).expect("square");
    }
    Resolvent { char_poly: Polynomial::new(coeffs), adjugate }
}

fn spectral_radius(a: &CMatrix) -> f64 {
    eigenvalues(a).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn float_grid(a: &CMatrix, degree: usize) -> CircleGrid {
    CircleGrid::new(degree + 1, 1.5 * 1f64.max(spectral_radius(a)))
}

/// det(λI - A).
pub fn char_poly<T: Scalar>(a: &Matrix<T>) -> Polynomial<T> {
    if T::EXACT {
        return resolvent(a).char_poly;
    }
    let ac = a.to_cmatrix();
    let n = ac.nrows();
    let grid = float_grid(&ac, n);
    let samples = sample_on_circle(&grid, |z| shifted(&ac, z).determinant());
    fit_polynomial(&grid, &samples, n)
}

/// zI - A.
fn shifted(a: &CMatrix, z: C64) -> CMatrix {
    CMatrix::from_diagonal_element(a.nrows(), a.ncols(), z) - a
}

/// M + C(λI - F)⁻¹D for scalar blocks.
pub fn reduce_blocks<T: Scalar>(m: &Matrix<T>, c: &Matrix<T>, d: &Matrix<T>, f: &Matrix<T>) -> Result<RatMatrix<T>> {
    let s = m.rows();
    let n = f.rows();
    if !m.is_square() || !f.is_square() || c.rows() != s || c.cols() != n || d.rows() != n || d.cols() != s {
        return Err(Error::DimensionMismatch("blocks M, C, D, F do not conform".into()));
    }
    if n == 0 {
        return Ok(RatMatrix::from_scalar(m));
    }
    if T::EXACT {
        let res = resolvent(f);
        let chi = &res.char_poly;
        let adj = res.sandwich(c, d)?;
        let mut entries = Vec::with_capacity(s * s);
        for (i, row) in adj.into_iter().enumerate() {
            for (j, p) in row.into_iter().enumerate() {
                let num = &chi.scale(&m[(i, j)]) + &p;
                entries.push(RationalFunction::new(num, chi.clone())?);
            }
        }
        return RatMatrix::new(s, s, entries);
    }
    let (mc, cc, dc, fc) = (m.to_cmatrix(), c.to_cmatrix(), d.to_cmatrix(), f.to_cmatrix());
    let grid = float_grid(&fc, n);
    let samples: Vec<(C64, CMatrix)> = sample_on_circle(&grid, |z| {
        let lu = shifted(&fc, z).lu();
        let det = lu.determinant();
        let x = lu.solve(&dc).expect("nodes avoid the spectrum");
        (det, (&mc + &cc * x) * det)
    });
    let dets: Vec<C64> = samples.iter().map(|s| s.0).collect();
    let chi = fit_polynomial::<T>(&grid, &dets, n).monic();
    let values: Vec<CMatrix> = samples.into_iter().map(|s| s.1).collect();
    rational_matrix_from_samples(s, s, &grid, &values, &chi, n)
}

fn complement(n: usize, s: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !s.contains(i)).collect()
}

/// Reduction of a scalar matrix onto the index set `s` (in the given order).
pub fn reduce_indices<T: Scalar>(a: &Matrix<T>, s: &[usize]) -> Result<RatMatrix<T>> {
    if s.is_empty() {
        return Err(Error::EmptySubset);
    }
    let sb = complement(a.rows(), s);
    reduce_blocks(&a.submatrix(s, s), &a.submatrix(s, &sb), &a.submatrix(&sb, s), &a.submatrix(&sb, &sb))
}

/// R(λ, S, A) = M + C(λI - F)⁻¹D.
pub fn reduce<T: Scalar, S: AsRef<str>>(a: &LabeledMatrix<T>, subset: &[S]) -> Result<RatMatrix<T>> {
    let idx = a.resolve(subset)?;
    reduce_indices(a.matrix(), &idx)
}

/// The same formula applied to a matrix of rational functions.
pub fn reduce_ratmatrix<T: Scalar>(r: &RatMatrix<T>, s: &[usize]) -> Result<RatMatrix<T>> {
    if s.is_empty() {
        return Err(Error::EmptySubset);
    }
    let sb = complement(r.rows(), s);
    let m = r.submatrix(s, s);
    if sb.is_empty() {
        return Ok(m);
    }
    let c = r.submatrix(s, &sb);
    let d = r.submatrix(&sb, s);
    let f = r.submatrix(&sb, &sb);
    let x = f.lambda_minus_self()?.solve(&d)?;
    m.add(&c.mul(&x)?)
}

/// λI - G⁻¹ for a square rational matrix G.
fn lambda_minus_inverse<T: Scalar>(g: &RatMatrix<T>) -> Result<RatMatrix<T>> {
    g.inverse()?.lambda_minus_self()
}

/// R(λ, Σ, A) = λI - (Σ*(λI - A)⁻¹Σ)⁻¹ for a frame with orthonormal columns.
pub fn reduce_frame<T: Scalar>(a: &LabeledMatrix<T>, sigma: &Matrix<T>) -> Result<RatMatrix<T>> {
    check_frame(sigma)?;
    if sigma.rows() != a.size() {
        return Err(Error::DimensionMismatch("frame rows differ from matrix size".into()));
    }
    let am = a.matrix();
    if T::EXACT {
        let res = resolvent(am);
        let g = resolvent_block(&res, &sigma.adjoint(), sigma)?;
        return lambda_minus_inverse(&g);
    }
    // Rotating by a unitary completion [Σ Δ] turns the frame into the leading coordinates.
    let sc = sigma.to_cmatrix();
    let (n, k) = sc.shape();
    let mut w = CMatrix::zeros(n, n);
    w.view_mut((0, 0), (n, k)).copy_from(&sc);
    w.view_mut((0, k), (n, n - k)).copy_from(&orthonormal_complement(&sc));
    let rotated = Matrix::from_cmatrix(&(w.adjoint() * am.to_cmatrix() * w));
    reduce_indices(&rotated, &(0..k).collect::<Vec<_>>())
}

/// L·(λI - A)⁻¹·R as a rational matrix.
pub(crate) fn resolvent_block<T: Scalar>(res: &Resolvent<T>, l: &Matrix<T>, r: &Matrix<T>) -> Result<RatMatrix<T>> {
    let polys = res.sandwich(l, r)?;
    let mut entries = Vec::new();
    for row in polys {
        for p in row {
            entries.push(RationalFunction::new(p, res.char_poly.clone())?);
        }
    }
    RatMatrix::new(l.rows(), r.cols(), entries)
}

/// λI - (Σᵀ(λI - A)⁻¹Σ)⁻¹ with Σ the coordinate frame of the subset.
pub fn reduce_via_formula2<T: Scalar, S: AsRef<str>>(a: &LabeledMatrix<T>, subset: &[S]) -> Result<RatMatrix<T>> {
    let idx = a.resolve(subset)?;
    let am = a.matrix();
    let n = am.rows();
    let sigma = Matrix::from_fn(n, idx.len(), |i, j| if idx[j] == i { T::one() } else { T::zero() });
    let g = if T::EXACT {
        resolvent_block(&resolvent(am), &sigma.transpose(), &sigma)?
    } else {
        let ac = am.to_cmatrix();
        let grid = float_grid(&ac, n);
        let samples: Vec<(C64, CMatrix)> = sample_on_circle(&grid, |z| {
            let lu = shifted(&ac, z).lu();
            let det = lu.determinant();
            let inv = lu.try_inverse().expect("nodes avoid the spectrum");
            let block = CMatrix::from_fn(idx.len(), idx.len(), |i, j| inv[(idx[i], idx[j])]);
            (det, block * det)
        });
        let dets: Vec<C64> = samples.iter().map(|s| s.0).collect();
        let chi = fit_polynomial::<T>(&grid, &dets, n).monic();
        let values: Vec<CMatrix> = samples.into_iter().map(|s| s.1).collect();
        rational_matrix_from_samples(idx.len(), idx.len(), &grid, &values, &chi, n.saturating_sub(1))?
    };
    lambda_minus_inverse(&g)
}

/// Pointwise M + C(zI - F)⁻¹D.
pub fn reduce_at(a: &CMatrix, s: &[usize], z: C64) -> Result<CMatrix> {
    let sb = complement(a.nrows(), s);
    let pick = |r: &[usize], c: &[usize]| CMatrix::from_fn(r.len(), c.len(), |i, j| a[(r[i], c[j])]);
    let m = pick(s, s);
    if sb.is_empty() {
        return Ok(m);
    }
    let x = shifted(&pick(&sb, &sb), z)
        .lu()
        .solve(&pick(&sb, s))
        .ok_or(Error::EvaluationAtPole { entry: None })?;
    Ok(m + pick(s, &sb) * x)
}

/// Pointwise zI - (Σ*(zI - A)⁻¹Σ)⁻¹; `a` may itself be the value of a rational matrix.
pub fn reduce_frame_at(a: &CMatrix, sigma: &CMatrix, z: C64) -> Result<CMatrix> {
    let pole = || Error::EvaluationAtPole { entry: None };
    let x = shifted(a, z).lu().solve(sigma).ok_or_else(pole)?;
    let g = sigma.adjoint() * x;
    let k = g.nrows();
    let gi = g.try_inverse().ok_or_else(pole)?;
    Ok(CMatrix::from_diagonal_element(k, k, z) - gi)
}

/// Pointwise form of the alternative formula for a subset.
pub fn formula2_at(a: &CMatrix, s: &[usize], z: C64) -> Result<CMatrix> {
    let sigma = CMatrix::from_fn(a.nrows(), s.len(), |i, j| C64::new(if s[j] == i { 1.0 } else { 0.0 }, 0.0));
    reduce_frame_at(a, &sigma, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::{ExactRational as Q, FloatComplex};

    fn lm<T: Scalar>(rows: &[&[i64]]) -> LabeledMatrix<T> {
        LabeledMatrix::unlabeled(Matrix::from_i64(rows)).unwrap()
    }

    fn inv_lambda<T: Scalar>() -> RationalFunction<T> {
        RationalFunction::x().inv().unwrap()
    }

    #[test]
    fn faddeev_matches_cofactor_expansion() {
        // det(λI - [[1,2],[3,4]]) = λ² - 5λ - 2
        let r = resolvent(&Matrix::<Q>::from_i64(&[&[1, 2], &[3, 4]]));
        let want = Polynomial::new(vec![Q::from_i64(-2), Q::from_i64(-5), Q::one()]);
        assert_eq!(r.char_poly, want);
        // adj(λI - A) = [[λ-4, 2],[3, λ-1]]
        assert_eq!(r.adj_entry(0, 0), Polynomial::linear(&Q::from_i64(4)));
        assert_eq!(r.adj_entry(1, 0), Polynomial::constant(Q::from_i64(3)));
    }

    #[test]
    fn decoupled_and_two_vertex_examples() {
        let d = lm::<Q>(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        let r = reduce(&d, &["1", "2"]).unwrap();
        assert_eq!(r, RatMatrix::from_scalar(&Matrix::from_i64(&[&[1, 0], &[0, 2]])));
        let k2 = lm::<Q>(&[&[0, 1], &[1, 0]]);
        assert_eq!(reduce(&k2, &["1"]).unwrap()[(0, 0)], inv_lambda());
    }

    #[test]
    fn path_endpoints() {
        for r in [
            reduce(&lm::<Q>(&[&[0, 1, 0], &[1, 0, 1], &[0, 1, 0]]), &["1", "3"]).unwrap(),
            reduce_via_formula2(&lm::<Q>(&[&[0, 1, 0], &[1, 0, 1], &[0, 1, 0]]), &["1", "3"]).unwrap(),
        ] {
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(r[(i, j)], inv_lambda());
                }
            }
        }
    }

    #[test]
    fn float_reduction_matches_exact() {
        let a = [&[2, 1, 0, 1][..], &[1, 0, 3, 0], &[0, 3, -1, 2], &[1, 0, 2, 1]];
        let exact = reduce(&lm::<Q>(&a), &["1", "4"]).unwrap();
        let float = reduce(&lm::<FloatComplex>(&a), &["1", "4"]).unwrap();
        assert_eq!(float, exact.cast());
        let f2 = reduce_via_formula2(&lm::<FloatComplex>(&a), &["1", "4"]).unwrap();
        assert_eq!(f2, exact.cast());
    }

    #[test]
    fn full_subset_is_verbatim() {
        let a = lm::<Q>(&[&[1, 2], &[2, 5]]);
        let r = reduce(&a, &["2", "1"]).unwrap();
        assert_eq!(r, RatMatrix::from_scalar(&Matrix::from_i64(&[&[5, 2], &[2, 1]])));
        assert!(matches!(reduce(&a, &[] as &[&str]), Err(Error::EmptySubset)));
        assert!(matches!(reduce(&a, &["7"]), Err(Error::UnknownLabel(_))));
    }
}
