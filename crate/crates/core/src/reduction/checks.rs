use nalgebra::DVector;

use super::core::{char_poly, reduce, reduce_at, reduce_blocks, reduce_frame, reduce_frame_at, reduce_indices, reduce_ratmatrix};
use super::sampling::{sampled_gap, SAMPLE_COUNT, SAMPLE_TOL};
use super::{check_frame, LabeledMatrix, Selector};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, max_abs, orthonormal_complement, orthonormality_defect, CMatrix, Matrix};
use crate::ratfun::{RationalFunction, Scalar, C64};
use crate::ratmat::{pfd_matrix, RatMatrix};
use crate::tolerance::{float_delta, float_eps};

/// Tolerance of the residue comparison.
const RESIDUE_TOL: f64 = 1e-8;
/// Tolerance of the sampled determinant comparison for frames.
const FRAME_DET_TOL: f64 = 1e-7;

fn complement(n: usize, s: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !s.contains(i)).collect()
}

fn pick(a: &CMatrix, r: &[usize], c: &[usize]) -> CMatrix {
    CMatrix::from_fn(r.len(), c.len(), |i, j| a[(r[i], c[j])])
}

fn spectrum_of(a: &CMatrix, idx: &[usize]) -> Vec<C64> {
    eigenvalues(&pick(a, idx, idx))
}

/// Both sides of det(λI - R) = det(λI - A) / det(λI - F).
#[derive(Clone, Debug, PartialEq)]
pub struct CharPolyIdentity<T: Scalar> {
    pub lhs: RationalFunction<T>,
    pub rhs: RationalFunction<T>,
    pub equal: bool,
}

pub fn char_poly_identity<T: Scalar, S: AsRef<str>>(a: &LabeledMatrix<T>, subset: &[S]) -> Result<CharPolyIdentity<T>> {
    let idx = a.resolve(subset)?;
    let sb = complement(a.size(), &idx);
    let r = reduce_indices(a.matrix(), &idx)?;
    let lhs = r.lambda_minus_self()?.det()?;
    let rhs = RationalFunction::new(char_poly(a.matrix()), char_poly(&a.matrix().submatrix(&sb, &sb)))?;
    let equal = lhs == rhs;
    Ok(CharPolyIdentity { lhs, rhs, equal })
}

fn positions(outer: &[usize], inner: &[usize]) -> Result<Vec<usize>> {
    inner
        .iter()
        .map(|i| {
            outer
                .iter()
                .position(|o| o == i)
                .ok_or_else(|| Error::SubsetViolation("inner subset is not contained in the outer one".into()))
        })
        .collect()
}

/// R(λ, S′, R(λ, S, A)) = R(λ, S′, A) for S′ ⊆ S.
pub fn reduce_sequential_check<T: Scalar, S: AsRef<str>>(a: &LabeledMatrix<T>, outer: &[S], inner: &[S]) -> Result<bool> {
    let s = a.resolve(outer)?;
    let s2 = a.resolve(inner)?;
    let pos = positions(&s, &s2)?;
    if T::EXACT {
        let nested = reduce_ratmatrix(&reduce_indices(a.matrix(), &s)?, &pos)?;
        return Ok(nested == reduce_indices(a.matrix(), &s2)?);
    }
    let ac = a.to_cmatrix();
    let mut poles = spectrum_of(&ac, &complement(a.size(), &s));
    poles.extend(spectrum_of(&ac, &complement(a.size(), &s2)));
    let gap = sampled_gap(
        &poles,
        SAMPLE_COUNT,
        |z| reduce_at(&reduce_at(&ac, &s, z)?, &pos, z),
        |z| reduce_at(&ac, &s2, z),
    )?;
    Ok(gap <= SAMPLE_TOL)
}

/// Reduction onto S of the matrix rotated by a unitary completion of the selector's frame.
fn rotated_blocks<T: Scalar>(a: &LabeledMatrix<T>, sel: &Selector<T>) -> Result<(CMatrix, usize)> {
    let ac = a.to_cmatrix();
    match sel {
        Selector::Subset(s) => {
            let idx = a.resolve(s)?;
            let perm: Vec<usize> = idx.iter().copied().chain(complement(a.size(), &idx)).collect();
            Ok((pick(&ac, &perm, &perm), idx.len()))
        }
        Selector::Frame(_) => {
            let sigma = sel.frame_for(a)?.to_cmatrix();
            let (n, k) = sigma.shape();
            let mut w = CMatrix::zeros(n, n);
            w.view_mut((0, 0), (n, k)).copy_from(&sigma);
            w.view_mut((0, k), (n, n - k)).copy_from(&orthonormal_complement(&sigma));
            Ok((w.adjoint() * ac * w, k))
        }
    }
}

/// R(λ₀)·Σ*u = λ₀·Σ*u for an eigenpair (λ₀, u) of A.
pub fn eigvec_restriction_check<T: Scalar>(a: &LabeledMatrix<T>, sel: &Selector<T>, lambda0: C64, u: &DVector<C64>) -> Result<bool> {
    let ac = a.to_cmatrix();
    let scale = 1f64.max(max_abs(&ac)) * u.norm().max(f64::MIN_POSITIVE);
    let residual = (&ac * u - u * lambda0).norm();
    if residual > 10.0 * float_eps() * scale {
        return Err(Error::NotAnEigenpair(residual));
    }
    let sigma = sel.frame_for(a)?.to_cmatrix();
    let (rot, k) = rotated_blocks(a, sel)?;
    let tail: Vec<usize> = (k..rot.nrows()).collect();
    let f = pick(&rot, &tail, &tail);
    if !tail.is_empty() {
        let sv = (CMatrix::from_diagonal_element(tail.len(), tail.len(), lambda0) - &f).singular_values();
        if sv.min() <= float_delta() * 1f64.max(max_abs(&f)) {
            return Err(Error::EvaluationAtPole { entry: None });
        }
    }
    let head: Vec<usize> = (0..k).collect();
    let r = reduce_at(&rot, &head, lambda0)?;
    let v = sigma.adjoint() * u;
    let gap = (&r * &v - &v * lambda0).norm();
    Ok(gap <= 10.0 * float_eps() * 1f64.max(max_abs(&r)) * u.norm().max(f64::MIN_POSITIVE))
}

/// Two vertices are cospectral when their one-vertex reductions coincide.
pub fn cospectral_check<T: Scalar>(a: &LabeledMatrix<T>, u: &str, v: &str) -> Result<bool> {
    if u == v {
        return Err(Error::SubsetViolation("cospectrality needs two distinct vertices".into()));
    }
    Ok(reduce(a, &[u])? == reduce(a, &[v])?)
}

/// Residue of the reduction at a pole μ against C·E_μ·D.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueReport {
    pub expected: CMatrix,
    pub actual: CMatrix,
    /// `false` when μ cancels and is not a pole of the reduction.
    pub pole_survives: bool,
    pub gap: f64,
    pub equal: bool,
}

pub fn residue_check<T: Scalar, S: AsRef<str>>(a: &LabeledMatrix<T>, subset: &[S], mu: C64) -> Result<ResidueReport> {
    let idx = a.resolve(subset)?;
    let sb = complement(a.size(), &idx);
    let ac = a.to_cmatrix();
    let f = pick(&ac, &sb, &sb);
    let c = pick(&ac, &idx, &sb);
    let d = pick(&ac, &sb, &idx);
    let fscale = 1f64.max(max_abs(&f));
    let commutator = &f * f.adjoint() - f.adjoint() * &f;
    if max_abs(&commutator) > 10.0 * float_eps() * fscale * fscale {
        return Err(Error::NotNormalF(max_abs(&commutator)));
    }
    let near = |z: C64| (z - mu).norm() <= float_delta() * 1f64.max(mu.norm());
    // The Schur form of a normal matrix is diagonal, so its vectors are eigenvectors.
    let mut proj = CMatrix::zeros(sb.len(), sb.len());
    if !sb.is_empty() {
        let (q, t) = nalgebra::Schur::new(f).unpack();
        for i in 0..sb.len() {
            if near(t[(i, i)]) {
                let v = q.column(i);
                proj += v * v.adjoint();
            }
        }
    }
    let expected = if sb.is_empty() { CMatrix::zeros(idx.len(), idx.len()) } else { &c * proj * &d };
    let pfd = pfd_matrix(&reduce_indices(a.matrix(), &idx)?)?;
    let term = pfd.terms.iter().find(|t| t.order == 1 && near(t.pole));
    let actual = term.map_or_else(|| CMatrix::zeros(idx.len(), idx.len()), |t| t.coeff.clone());
    let gap = max_abs(&(&expected - &actual));
    let equal = gap <= RESIDUE_TOL * 1f64.max(max_abs(&expected));
    Ok(ResidueReport { expected, actual, pole_survives: term.is_some(), gap, equal })
}

/// One summand (Mᵢ, Cᵢ, Dᵢ, Fᵢ) of a block matrix sharing the leading block.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockPart<T: Scalar> {
    pub m: Matrix<T>,
    pub c: Matrix<T>,
    pub d: Matrix<T>,
    pub f: Matrix<T>,
}

fn blocks_at(m: &CMatrix, c: &CMatrix, d: &CMatrix, f: &CMatrix, z: C64) -> Result<CMatrix> {
    if f.nrows() == 0 {
        return Ok(m.clone());
    }
    let x = (CMatrix::from_diagonal_element(f.nrows(), f.nrows(), z) - f)
        .lu()
        .solve(d)
        .ok_or(Error::EvaluationAtPole { entry: None })?;
    Ok(m + c * x)
}

/// The reduction of the assembled block matrix equals the sum of the parts' reductions.
pub fn edge_split_check<T: Scalar>(parts: &[BlockPart<T>]) -> Result<bool> {
    let Some(first) = parts.first() else {
        return Err(Error::DimensionMismatch("no parts".into()));
    };
    let s = first.m.rows();
    if parts.iter().any(|p| p.m.rows() != s || !p.m.is_square()) {
        return Err(Error::DimensionMismatch("leading blocks differ in size".into()));
    }
    let n: usize = parts.iter().map(|p| p.f.rows()).sum();
    let mut m = Matrix::zeros(s, s);
    let mut c = Matrix::zeros(s, n);
    let mut d = Matrix::zeros(n, s);
    let mut f = Matrix::zeros(n, n);
    let mut off = 0;
    for p in parts {
        let k = p.f.rows();
        if p.c.rows() != s || p.c.cols() != k || p.d.rows() != k || p.d.cols() != s || p.f.cols() != k {
            return Err(Error::DimensionMismatch("part blocks do not conform".into()));
        }
        m = m.add(&p.m)?;
        for i in 0..s {
            for j in 0..k {
                c[(i, off + j)] = p.c[(i, j)].clone();
                d[(off + j, i)] = p.d[(j, i)].clone();
            }
        }
        for i in 0..k {
            for j in 0..k {
                f[(off + i, off + j)] = p.f[(i, j)].clone();
            }
        }
        off += k;
    }
    if T::EXACT {
        let whole = reduce_blocks(&m, &c, &d, &f)?;
        let mut sum = RatMatrix::zeros(s, s);
        for p in parts {
            sum = sum.add(&reduce_blocks(&p.m, &p.c, &p.d, &p.f)?)?;
        }
        return Ok(whole == sum);
    }
    let fc = f.to_cmatrix();
    let poles = eigenvalues(&fc);
    let cparts: Vec<[CMatrix; 4]> = parts
        .iter()
        .map(|p| [p.m.to_cmatrix(), p.c.to_cmatrix(), p.d.to_cmatrix(), p.f.to_cmatrix()])
        .collect();
    let (mc, cc, dc) = (m.to_cmatrix(), c.to_cmatrix(), d.to_cmatrix());
    let gap = sampled_gap(
        &poles,
        SAMPLE_COUNT,
        |z| blocks_at(&mc, &cc, &dc, &fc, z),
        |z| {
            cparts.iter().try_fold(CMatrix::zeros(s, s), |acc, [pm, pc, pd, pf]| {
                Ok(acc + blocks_at(pm, pc, pd, pf, z)?)
            })
        },
    )?;
    Ok(gap <= SAMPLE_TOL)
}

/// reduce(XAX⁻¹, S) = reduce(A, S) for X = blockdiag(I, Q).
pub fn similarity_invariance_check<T: Scalar, S: AsRef<str>>(a: &LabeledMatrix<T>, subset: &[S], q: &Matrix<T>) -> Result<bool> {
    let idx = a.resolve(subset)?;
    let sb = complement(a.size(), &idx);
    if q.rows() != sb.len() || !q.is_square() {
        return Err(Error::DimensionMismatch("Q must match the complement of S".into()));
    }
    let qi = q.inverse()?;
    let s = idx.len();
    let n = a.size();
    let perm: Vec<usize> = idx.iter().copied().chain(sb.iter().copied()).collect();
    let ap = a.matrix().submatrix(&perm, &perm);
    let embed = |b: &Matrix<T>| {
        Matrix::from_fn(n, n, |i, j| match (i < s, j < s) {
            (true, true) => if i == j { T::one() } else { T::zero() },
            (false, false) => b[(i - s, j - s)].clone(),
            _ => T::zero(),
        })
    };
    let conj = embed(q).mul(&ap)?.mul(&embed(&qi))?;
    let head: Vec<usize> = (0..s).collect();
    if T::EXACT {
        return Ok(reduce_indices(&conj, &head)? == reduce_indices(&ap, &head)?);
    }
    let (cc, apc) = (conj.to_cmatrix(), ap.to_cmatrix());
    let poles = spectrum_of(&apc, &(s..n).collect::<Vec<_>>());
    let gap = sampled_gap(&poles, SAMPLE_COUNT, |z| reduce_at(&cc, &head, z), |z| reduce_at(&apc, &head, z))?;
    Ok(gap <= SAMPLE_TOL)
}

/// R(λ, Σ₁Σ₂, A) = R(λ, Σ₂, R(λ, Σ₁, A)).
pub fn frame_sequential_check<T: Scalar>(a: &LabeledMatrix<T>, sigma1: &Matrix<T>, sigma2: &Matrix<T>) -> Result<bool> {
    check_frame(sigma1)?;
    check_frame(sigma2)?;
    if sigma1.rows() != a.size() || sigma2.rows() != sigma1.cols() {
        return Err(Error::DimensionMismatch("frames do not compose".into()));
    }
    let composed = sigma1.mul(sigma2)?;
    if T::EXACT {
        let r1 = reduce_frame(a, sigma1)?;
        let s2 = RatMatrix::from_scalar(sigma2);
        let g = RatMatrix::from_scalar(&sigma2.adjoint()).mul(&r1.lambda_minus_self()?.solve(&s2)?)?;
        let nested = g.inverse()?.lambda_minus_self()?;
        return Ok(nested == reduce_frame(a, &composed)?);
    }
    let ac = a.to_cmatrix();
    let (s1, s2, s12) = (sigma1.to_cmatrix(), sigma2.to_cmatrix(), composed.to_cmatrix());
    let gap = sampled_gap(
        &eigenvalues(&ac),
        SAMPLE_COUNT,
        |z| reduce_frame_at(&reduce_frame_at(&ac, &s1, z)?, &s2, z),
        |z| reduce_frame_at(&ac, &s12, z),
    )?;
    Ok(gap <= SAMPLE_TOL)
}

/// det(λI - R(λ, Σ, A)) = det(λI - A) / det(λI - Δ*AΔ) for a unitary [Σ Δ].
pub fn frame_det_check<T: Scalar>(a: &LabeledMatrix<T>, sigma: &Matrix<T>, delta: &Matrix<T>) -> Result<bool> {
    let n = a.size();
    if sigma.rows() != n || delta.rows() != n || sigma.cols() + delta.cols() != n {
        return Err(Error::NotAUnitaryCompletion(f64::INFINITY));
    }
    let w = Matrix::from_fn(n, n, |i, j| {
        if j < sigma.cols() {
            sigma[(i, j)].clone()
        } else {
            delta[(i, j - sigma.cols())].clone()
        }
    });
    let unitary = if T::EXACT {
        w.adjoint().mul(&w)? == Matrix::identity(n)
    } else {
        orthonormality_defect(&w.to_cmatrix()) <= float_eps()
    };
    if !unitary {
        return Err(Error::NotAUnitaryCompletion(orthonormality_defect(&w.to_cmatrix())));
    }
    let tail = delta.adjoint().mul(a.matrix())?.mul(delta)?;
    if T::EXACT {
        let lhs = reduce_frame(a, sigma)?.lambda_minus_self()?.det()?;
        let rhs = RationalFunction::new(char_poly(a.matrix()), char_poly(&tail))?;
        return Ok(lhs == rhs);
    }
    let (ac, sc, tc) = (a.to_cmatrix(), sigma.to_cmatrix(), tail.to_cmatrix());
    let mut poles = eigenvalues(&ac);
    poles.extend(eigenvalues(&tc));
    let k = sc.ncols();
    let scalar = |v: C64| CMatrix::from_element(1, 1, v);
    let gap = sampled_gap(
        &poles,
        10,
        |z| {
            let r = reduce_frame_at(&ac, &sc, z)?;
            Ok(scalar((CMatrix::from_diagonal_element(k, k, z) - r).determinant()))
        },
        |z| {
            let num = (CMatrix::from_diagonal_element(n, n, z) - &ac).determinant();
            let den = (CMatrix::from_diagonal_element(tc.nrows(), tc.nrows(), z) - &tc).determinant();
            Ok(scalar(num / den))
        },
    )?;
    Ok(gap <= FRAME_DET_TOL)
}
