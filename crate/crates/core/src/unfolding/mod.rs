//! Unfoldings: scalar matrices whose reduction onto their leading block is a
//! prescribed rational matrix, and the similarities that keep that reduction.

mod band;
mod hermitian;

pub use band::{block_bandwidth_defect, compress_band, sign_cleanup};
pub use hermitian::{check_hermitian_feasibility, hollow, hollowing_unitary, unfold_hermitian, HermitianFeasibility};

use nalgebra::ColPivQR;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, hermitian_defect, max_abs, relative_gap, CMatrix, Matrix};
use crate::ratfun::{FloatComplex, Scalar, C64};
use crate::ratmat::{pfd_matrix, RatMatrix};
use crate::reduction::{reduce_at, sample_points, LabeledMatrix, SAMPLE_COUNT};
use crate::tolerance::{float_eps, rank_tol};

/// Diagonal entries at most this large count as zero for hollowness.
pub const HOLLOW_TOL: f64 = 1e-10;
/// Largest relative change of the reduction a transform may introduce.
pub const INVARIANCE_TOL: f64 = 1e-6;

/// One step of the construction history.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transform {
    pub op: String,
    pub params: Value,
}

/// A matrix whose reduction onto its first `s` vertices is the source rational matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Unfolding {
    matrix: LabeledMatrix<FloatComplex>,
    s: usize,
    provenance: Vec<Transform>,
    blocks: Vec<usize>,
}

impl Unfolding {
    /// Wraps `matrix`, labeling vertices "1".."n"; the first `s` form the reduced block.
    pub fn new(matrix: CMatrix, s: usize, provenance: Vec<Transform>) -> Result<Self> {
        if s > matrix.nrows() {
            return Err(Error::DimensionMismatch(format!("subset of size {s} in a {}-vertex matrix", matrix.nrows())));
        }
        let matrix = LabeledMatrix::unlabeled(Matrix::from_cmatrix(&matrix))?;
        Ok(Unfolding { matrix, s, provenance, blocks: Vec::new() })
    }

    /// Rebuilds an unfolding from its parts, keeping the given labels.
    pub fn from_labeled(matrix: LabeledMatrix<FloatComplex>, s: usize, provenance: Vec<Transform>) -> Result<Self> {
        if s > matrix.size() {
            return Err(Error::DimensionMismatch("subset larger than the matrix".into()));
        }
        // Band structure is recorded by the last transform that produced one.
        let blocks = provenance
            .iter()
            .rev()
            .find_map(|t| serde_json::from_value::<Vec<usize>>(t.params.get("blocks")?.clone()).ok())
            .filter(|b| b.iter().sum::<usize>() == matrix.size())
            .unwrap_or_default();
        Ok(Unfolding { matrix, s, provenance, blocks })
    }

    pub fn matrix(&self) -> &LabeledMatrix<FloatComplex> {
        &self.matrix
    }

    pub fn cmatrix(&self) -> CMatrix {
        self.matrix.to_cmatrix()
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    pub fn tail_size(&self) -> usize {
        self.size() - self.s
    }

    /// Labels of the reduced block.
    pub fn subset(&self) -> Vec<String> {
        self.matrix.labels()[..self.s].to_vec()
    }

    pub fn provenance(&self) -> &[Transform] {
        &self.provenance
    }

    /// Block sizes of the band structure, empty unless produced by [`compress_band`].
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn hermitian_defect(&self) -> f64 {
        hermitian_defect(&self.cmatrix())
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= float_eps() * 1f64.max(max_abs(&self.cmatrix()))
    }

    pub fn max_diagonal(&self) -> f64 {
        let a = self.cmatrix();
        (0..a.nrows()).map(|i| a[(i, i)].norm()).fold(0.0, f64::max)
    }

    pub fn is_hollow(&self) -> bool {
        self.max_diagonal() <= HOLLOW_TOL
    }

    pub fn eigenvalues(&self) -> Vec<C64> {
        eigenvalues(&self.cmatrix())
    }

    /// The reduction onto the leading block, evaluated at `z`.
    pub fn reduction_at(&self, z: C64) -> Result<CMatrix> {
        reduce_at(&self.cmatrix(), &(0..self.s).collect::<Vec<_>>(), z)
    }

    /// The reduction onto the leading block as a rational matrix.
    pub fn reduction(&self) -> Result<RatMatrix<FloatComplex>> {
        crate::reduction::reduce_indices(self.matrix.matrix(), &(0..self.s).collect::<Vec<_>>())
    }

    fn tail_spectrum(&self) -> Vec<C64> {
        let a = self.cmatrix();
        let t = self.tail_size();
        eigenvalues(&a.view((self.s, self.s), (t, t)).into_owned())
    }

    /// Largest relative gap between the reduction and `r` over the sample points.
    pub fn round_trip_gap<T: Scalar>(&self, r: &RatMatrix<T>) -> Result<f64> {
        let mut poles: Vec<C64> = r.poles()?.into_iter().map(|p| p.value).collect();
        poles.extend(self.tail_spectrum());
        let mut worst: f64 = 0.0;
        for z in sample_points(&poles, SAMPLE_COUNT) {
            worst = worst.max(relative_gap(&self.reduction_at(z)?, &r.eval_c64(z)));
        }
        Ok(worst)
    }

    /// Largest relative gap between the reductions of two unfoldings over the sample points.
    pub fn reduction_gap(&self, other: &Unfolding) -> Result<f64> {
        if self.s != other.s {
            return Err(Error::DimensionMismatch("unfoldings reduce to blocks of different sizes".into()));
        }
        let mut poles = self.tail_spectrum();
        poles.extend(other.tail_spectrum());
        let mut worst: f64 = 0.0;
        for z in sample_points(&poles, SAMPLE_COUNT) {
            worst = worst.max(relative_gap(&self.reduction_at(z)?, &other.reduction_at(z)?));
        }
        Ok(worst)
    }

    /// A successor with a new matrix of possibly larger size and one more provenance entry.
    fn derive(&self, matrix: CMatrix, op: &str, params: Value) -> Result<Self> {
        let mut provenance = self.provenance.clone();
        provenance.push(Transform { op: op.into(), params });
        Unfolding::new(matrix, self.s, provenance)
    }

    /// Fails unless `next` has the same reduction as `self`.
    fn ensure_invariant(&self, next: Self) -> Result<Self> {
        let gap = self.reduction_gap(&next)?;
        if gap > INVARIANCE_TOL {
            return Err(Error::ReductionsDiffer(format!("relative gap {gap:e} after {}", next.provenance.last().map_or("", |t| t.op.as_str()))));
        }
        Ok(next)
    }
}

/// K = XY with X of full column rank, from a column-pivoted QR factorization.
/// Columns whose pivot falls below τ_rank·‖K‖ are dropped.
pub fn rank_decomposition(k: &CMatrix) -> (CMatrix, CMatrix) {
    let (s, m) = k.shape();
    let scale = max_abs(k);
    if scale == 0.0 || s == 0 || m == 0 {
        return (CMatrix::zeros(s, 0), CMatrix::zeros(0, m));
    }
    let qr = ColPivQR::new(k.clone());
    let (q, mut r, p) = qr.unpack();
    let tol = rank_tol() * scale;
    let rank = (0..r.nrows().min(r.ncols())).take_while(|&i| r[(i, i)].norm() > tol).count();
    p.inv_permute_columns(&mut r);
    (q.columns(0, rank).into_owned(), r.rows(0, rank).into_owned())
}

/// An unfolding of K/(λ - ν)ⁿ.
///
/// With K = XY of rank r the tail is n blocks νI_r chained by identities,
/// entered through X from the first block and left through Y from the last,
/// so the (1, n) block of the tail resolvent is (λ - ν)⁻ⁿ.
pub fn unfold_basic(k: &CMatrix, nu: C64, n: usize) -> Result<Unfolding> {
    if !k.is_square() {
        return Err(Error::DimensionMismatch("residue matrix must be square".into()));
    }
    if n == 0 {
        return Err(Error::DimensionMismatch("pole order must be positive".into()));
    }
    let s = k.nrows();
    let (x, y) = rank_decomposition(k);
    let r = x.ncols();
    let size = s + n * r;
    let mut a = CMatrix::zeros(size, size);
    if r > 0 {
        a.view_mut((0, s), (s, r)).copy_from(&x);
        a.view_mut((s + (n - 1) * r, 0), (r, s)).copy_from(&y);
        for b in 0..n {
            let o = s + b * r;
            a.view_mut((o, o), (r, r)).fill_diagonal(nu);
            if b + 1 < n {
                a.view_mut((o, o + r), (r, r)).fill_diagonal(C64::new(1.0, 0.0));
            }
        }
    }
    Unfolding::new(a, s, vec![basic_provenance(nu, n, r)])
}

fn basic_provenance(nu: C64, n: usize, rank: usize) -> Transform {
    Transform { op: "unfold_basic".into(), params: json!({"pole": [nu.re, nu.im], "order": n, "rank": rank}) }
}

/// Joins unfoldings of R₁, …, R_k into one unfolding of M + ΣRᵢ: top-left
/// blocks add, tails are placed block-diagonally and coupled only to the
/// leading block.
pub fn assemble(parts: &[Unfolding], m: &CMatrix) -> Result<Unfolding> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("constant part must be square".into()));
    }
    let s = m.nrows();
    if let Some(p) = parts.iter().find(|p| p.s != s) {
        return Err(Error::DimensionMismatch(format!("part reduces to {} vertices, expected {s}", p.s)));
    }
    let size = s + parts.iter().map(Unfolding::tail_size).sum::<usize>();
    let mut a = CMatrix::zeros(size, size);
    a.view_mut((0, 0), (s, s)).copy_from(m);
    let mut o = s;
    let mut provenance = Vec::new();
    for p in parts {
        let pa = p.cmatrix();
        let t = p.tail_size();
        let mut top = a.view_mut((0, 0), (s, s));
        top += pa.view((0, 0), (s, s));
        a.view_mut((0, o), (s, t)).copy_from(&pa.view((0, s), (s, t)));
        a.view_mut((o, 0), (t, s)).copy_from(&pa.view((s, 0), (t, s)));
        a.view_mut((o, o), (t, t)).copy_from(&pa.view((s, s), (t, t)));
        o += t;
        provenance.extend(p.provenance.iter().cloned());
    }
    provenance.push(Transform { op: "assemble".into(), params: json!({"parts": parts.len()}) });
    Unfolding::new(a, s, provenance)
}

/// Partial fractions, one basic unfolding per term, then assembly with the constant part.
pub fn unfold_general<T: Scalar>(r: &RatMatrix<T>) -> Result<Unfolding> {
    if r.rows() != r.cols() {
        return Err(Error::DimensionMismatch("reduction must be square".into()));
    }
    let pfd = pfd_matrix(r)?;
    let parts = pfd
        .terms
        .iter()
        .map(|t| unfold_basic(&t.coeff, t.pole, t.order))
        .collect::<Result<Vec<_>>>()?;
    let mut u = assemble(&parts, &pfd.constant)?;
    u.provenance.push(Transform { op: "unfold_general".into(), params: json!({"terms": pfd.terms.len()}) });
    check_round_trip(u, r)
}

fn check_round_trip<T: Scalar>(u: Unfolding, r: &RatMatrix<T>) -> Result<Unfolding> {
    let gap = u.round_trip_gap(r)?;
    if gap > INVARIANCE_TOL {
        return Err(Error::ReductionsDiffer(format!("unfolding reproduces the source only to {gap:e}")));
    }
    Ok(u)
}

/// Conjugates by blockdiag(I, Q), which leaves the reduction unchanged.
pub fn conjugate_tail(u: &Unfolding, q: &CMatrix) -> Result<Unfolding> {
    let t = u.tail_size();
    if q.shape() != (t, t) {
        return Err(Error::DimensionMismatch(format!("Q must be {t}x{t}")));
    }
    let qi = q.clone().try_inverse().ok_or(Error::SingularQ)?;
    let (s, n) = (u.s, u.size());
    let mut w = CMatrix::identity(n, n);
    let mut wi = CMatrix::identity(n, n);
    w.view_mut((s, s), (t, t)).copy_from(q);
    wi.view_mut((s, s), (t, t)).copy_from(&qi);
    let next = u.derive(&w * u.cmatrix() * wi, "conjugate_tail", json!({"size": t}))?;
    u.ensure_invariant(next)
}

/// Conjugation by a unitary blockdiag(I_s, Q) on the tail, as W*AW.
pub(crate) fn rotate_tail(a: &CMatrix, s: usize, q: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let mut w = CMatrix::identity(n, n);
    w.view_mut((s, s), q.shape()).copy_from(q);
    w.adjoint() * a * w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;
    use crate::ratfun::{ExactRational as Q, Polynomial, RationalFunction};
    use crate::reduction::reduce;

    fn cm(rows: &[&[f64]]) -> CMatrix {
        CMatrix::from_fn(rows.len(), rows[0].len(), |i, j| c64(rows[i][j]))
    }

    fn simple(c: i64, nu: i64) -> RationalFunction<Q> {
        RationalFunction::new(Polynomial::constant(Q::from_i64(c)), Polynomial::linear(&Q::from_i64(nu))).unwrap()
    }

    #[test]
    fn rank_decomposition_reproduces_k() {
        let k = cm(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0], &[0.0, 1.0, 1.0]]);
        let (x, y) = rank_decomposition(&k);
        assert_eq!(x.ncols(), 2);
        assert!((x * y - k).norm() < 1e-12);
    }

    #[test]
    fn basic_unfoldings() {
        let zero = unfold_basic(&CMatrix::zeros(2, 2), c64(3.0), 1).unwrap();
        assert_eq!(zero.size(), 2);
        assert_eq!(zero.cmatrix(), CMatrix::zeros(2, 2));

        let k2 = unfold_basic(&cm(&[&[1.0]]), c64(0.0), 1).unwrap();
        assert!((k2.cmatrix() - cm(&[&[0.0, 1.0], &[1.0, 0.0]])).norm() < 1e-14);

        let u = unfold_basic(&CMatrix::identity(2, 2), c64(2.0), 2).unwrap();
        assert_eq!(u.size(), 6);
        for z in sample_points(&[c64(2.0)], SAMPLE_COUNT) {
            let want = CMatrix::identity(2, 2) / ((z - 2.0) * (z - 2.0));
            assert!(relative_gap(&u.reduction_at(z).unwrap(), &want) <= 1e-9);
        }
    }

    #[test]
    fn assembled_sum() {
        let a = unfold_basic(&cm(&[&[1.0]]), c64(1.0), 1).unwrap();
        let b = unfold_basic(&cm(&[&[1.0]]), c64(2.0), 1).unwrap();
        let single = assemble(std::slice::from_ref(&a), &CMatrix::zeros(1, 1)).unwrap();
        assert_eq!(single.cmatrix(), a.cmatrix());
        let sum = assemble(&[a, b], &CMatrix::zeros(1, 1)).unwrap();
        // (2λ - 3)/((λ - 1)(λ - 2))
        let want = simple(1, 1) + simple(1, 2);
        assert_eq!(
            want.num().clone(),
            Polynomial::new(vec![Q::from_i64(-3), Q::from_i64(2)])
        );
        let r = RatMatrix::new(1, 1, vec![want]).unwrap();
        assert!(sum.round_trip_gap(&r).unwrap() <= 1e-9);
        assert!(sum.is_hermitian());
    }

    #[test]
    fn general_round_trip() {
        let a = LabeledMatrix::<Q>::unlabeled(Matrix::from_i64(&[
            &[1, 2, 0, -1, 3, 0],
            &[0, -1, 1, 2, 0, 1],
            &[2, 0, 0, 1, -2, 1],
            &[1, 1, -1, 0, 0, 2],
            &[0, 3, 1, 1, 1, 0],
            &[-1, 0, 2, 0, 1, 1],
        ]))
        .unwrap();
        let r = reduce(&a, &["1", "2"]).unwrap();
        let u = unfold_general(&r).unwrap();
        assert!(u.round_trip_gap(&r).unwrap() <= 1e-9);
        let constant = RatMatrix::from_scalar(&Matrix::<Q>::from_i64(&[&[1, 2], &[3, 4]]));
        let c = unfold_general(&constant).unwrap();
        assert_eq!(c.size(), 2);
        let inv = RatMatrix::new(1, 1, vec![simple(1, 0)]).unwrap();
        assert!((unfold_general(&inv).unwrap().cmatrix() - cm(&[&[0.0, 1.0], &[1.0, 0.0]])).norm() < 1e-12);
        let improper = RatMatrix::new(1, 1, vec![RationalFunction::<Q>::x()]).unwrap();
        assert!(matches!(unfold_general(&improper), Err(Error::NotProper { .. })));
    }

    #[test]
    fn conjugation_keeps_reduction() {
        let u = unfold_basic(&CMatrix::identity(2, 2), c64(2.0), 2).unwrap();
        let same = conjugate_tail(&u, &CMatrix::identity(4, 4)).unwrap();
        assert_eq!(same.cmatrix(), u.cmatrix());
        let q = cm(&[&[1.0, 2.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 3.0], &[1.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 1.0]]);
        let v = conjugate_tail(&u, &q).unwrap();
        assert!(v.reduction_gap(&u).unwrap() <= 1e-9);
        assert!(matches!(conjugate_tail(&u, &CMatrix::zeros(4, 4)), Err(Error::SingularQ)));
    }
}
