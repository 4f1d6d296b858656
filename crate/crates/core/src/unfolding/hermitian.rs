use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{assemble, check_round_trip, rotate_tail, Transform, Unfolding, HOLLOW_TOL};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_defect, hermitian_eigen, max_abs, orthonormal_complement, CMatrix};
use crate::ratfun::{Scalar, C64};
use crate::ratmat::{pfd_matrix, PartialFractionForm, RatMatrix};
use crate::tolerance::{float_eps, pole_tol, psd_tol};

/// Conditions for a Hermitian unfolding to exist.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermitianFeasibility {
    pub poles_real: bool,
    pub poles_simple: bool,
    /// For every pole, the smallest eigenvalue of its residue. A residue that
    /// is not Hermitian reports its smallest Hermitian-part eigenvalue minus
    /// its Hermitian defect.
    pub residues_psd: Vec<(C64, f64)>,
    pub limit_hermitian: bool,
    /// Why the partial fraction decomposition could not be formed, if it failed.
    pub failure: Option<String>,
}

impl HermitianFeasibility {
    pub fn feasible(&self) -> bool {
        self.failure.is_none()
            && self.poles_real
            && self.poles_simple
            && self.limit_hermitian
            && self.residues_psd.iter().all(|&(_, m)| m >= -psd_tol())
    }

    /// A short description of the first failed condition.
    pub fn reason(&self) -> String {
        if let Some(f) = &self.failure {
            return f.clone();
        }
        if !self.poles_real {
            return "a pole is not real".into();
        }
        if !self.poles_simple {
            return "a pole is not simple".into();
        }
        if let Some((p, m)) = self.residues_psd.iter().find(|&&(_, m)| m < -psd_tol()) {
            return format!("residue at λ = {} is not positive semidefinite (min eigenvalue {m:e})", p.re);
        }
        if !self.limit_hermitian {
            return "the limit at infinity is not Hermitian".into();
        }
        "feasible".into()
    }
}

fn hermitian_part(k: &CMatrix) -> CMatrix {
    (k + k.adjoint()).scale(0.5)
}

fn feasibility(pfd: &PartialFractionForm) -> HermitianFeasibility {
    let poles_real = pfd.terms.iter().all(|t| t.pole.im.abs() <= pole_tol() * 1f64.max(t.pole.norm()));
    let poles_simple = pfd.terms.iter().all(|t| t.order == 1);
    let residues_psd = pfd
        .terms
        .iter()
        .filter(|t| t.order == 1)
        .map(|t| {
            let (vals, _) = hermitian_eigen(&hermitian_part(&t.coeff));
            let min = vals.first().copied().unwrap_or(0.0);
            (t.pole, min - hermitian_defect(&t.coeff))
        })
        .collect();
    let limit_hermitian = hermitian_defect(&pfd.constant) <= float_eps() * 1f64.max(max_abs(&pfd.constant));
    HermitianFeasibility { poles_real, poles_simple, residues_psd, limit_hermitian, failure: None }
}

/// Reports whether `r` has a Hermitian unfolding: real simple poles, positive
/// semidefinite residues and a Hermitian limit at infinity.
pub fn check_hermitian_feasibility<T: Scalar>(r: &RatMatrix<T>) -> HermitianFeasibility {
    match pfd_matrix(r) {
        Ok(pfd) => feasibility(&pfd),
        Err(e) => HermitianFeasibility {
            poles_real: false,
            poles_simple: false,
            residues_psd: Vec::new(),
            limit_hermitian: false,
            failure: Some(e.to_string()),
        },
    }
}

/// Columns X with XX* = K for a positive semidefinite K; eigenvalues at most
/// τ_psd are dropped. Each column is phased so its largest entry is real positive.
fn psd_factor(k: &CMatrix) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(&hermitian_part(k));
    let keep: Vec<usize> = (0..vals.len()).rev().filter(|&i| vals[i] > psd_tol()).collect();
    CMatrix::from_fn(k.nrows(), keep.len(), |r, c| {
        let v = vecs.column(keep[c]);
        let pivot = v.iter().copied().fold(C64::new(0.0, 0.0), |a, b| if b.norm() > a.norm() + 1e-12 { b } else { a });
        let phase = pivot.conj() / pivot.norm();
        v[r] * phase * vals[keep[c]].sqrt()
    })
}

/// Hermitian unfolding: each residue K = XX* contributes a tail νI coupled
/// through X, on top of the Hermitian constant part.
pub fn unfold_hermitian<T: Scalar>(r: &RatMatrix<T>) -> Result<Unfolding> {
    if r.rows() != r.cols() {
        return Err(Error::DimensionMismatch("reduction must be square".into()));
    }
    let pfd = pfd_matrix(r)?;
    let report = feasibility(&pfd);
    if !report.feasible() {
        return Err(Error::NotHermitianFeasible(report.reason()));
    }
    let s = r.rows();
    let parts = pfd
        .terms
        .iter()
        .map(|t| {
            let x = psd_factor(&t.coeff);
            let k = x.ncols();
            let mut a = CMatrix::zeros(s + k, s + k);
            a.view_mut((0, s), (s, k)).copy_from(&x);
            a.view_mut((s, 0), (k, s)).copy_from(&x.adjoint());
            a.view_mut((s, s), (k, k)).fill_diagonal(C64::new(t.pole.re, 0.0));
            let step = Transform { op: "unfold_basic".into(), params: json!({"pole": [t.pole.re, 0.0], "order": 1, "rank": k}) };
            Unfolding::new(a, s, vec![step])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut u = assemble(&parts, &hermitian_part(&pfd.constant))?;
    u.provenance.push(Transform { op: "unfold_hermitian".into(), params: json!({"poles": pfd.terms.len()}) });
    check_round_trip(u, r)
}

/// A unitary Q with Q*FQ hollow, for a Hermitian F of trace zero.
///
/// Each step takes unit eigenvectors v₊, v₋ for the extreme eigenvalues
/// λ₊ > 0 > λ₋ and the vector x = cos θ·v₊ + sin θ·v₋ with tan²θ = λ₊/(-λ₋),
/// for which x*Fx = 0; x becomes the next basis vector and the process
/// continues on the orthogonal complement, whose compression again has trace zero.
pub fn hollowing_unitary(f: &CMatrix) -> CMatrix {
    let m = f.nrows();
    let scale = 1f64.max(max_abs(f));
    let mut q = CMatrix::identity(m, m);
    let mut cur = f.clone();
    for k in 0..m.saturating_sub(1) {
        let g = cur.view((k, k), (m - k, m - k)).into_owned();
        if max_abs(&g) <= 1e-14 * scale {
            break;
        }
        let (vals, vecs) = hermitian_eigen(&g);
        let (lo, hi) = (vals[0], vals[m - k - 1]);
        if hi <= 0.0 || lo >= 0.0 {
            break;
        }
        let theta = (hi / -lo).sqrt().atan();
        let x = vecs.column(m - k - 1) * C64::new(theta.cos(), 0.0) + vecs.column(0) * C64::new(theta.sin(), 0.0);
        let x = CMatrix::from_column_slice(m - k, 1, x.as_slice());
        let mut b = CMatrix::zeros(m - k, m - k);
        b.view_mut((0, 0), (m - k, 1)).copy_from(&x);
        b.view_mut((0, 1), (m - k, m - k - 1)).copy_from(&orthonormal_complement(&x));
        cur = rotate_tail(&cur, k, &b);
        let mut w = CMatrix::identity(m, m);
        w.view_mut((k, k), (m - k, m - k)).copy_from(&b);
        q *= w;
    }
    q
}

/// Makes a Hermitian unfolding hollow without changing its reduction.
///
/// The constant part of the reduction must already be hollow. If the tail has
/// nonzero trace, a decoupled vertex with diagonal -tr(F) is appended first.
pub fn hollow(u: &Unfolding) -> Result<Unfolding> {
    let a = u.cmatrix();
    if !u.is_hermitian() {
        return Err(Error::NotHermitian(u.hermitian_defect()));
    }
    let s = u.s();
    let lead = (0..s).map(|i| a[(i, i)].norm()).fold(0.0, f64::max);
    if lead > HOLLOW_TOL {
        return Err(Error::ConstantPartNotHollow(lead));
    }
    let t = u.tail_size();
    let tr: f64 = (s..s + t).map(|i| a[(i, i)].re).sum();
    let appended = tr.abs() > HOLLOW_TOL;
    let a = if appended {
        let mut b = a.clone().resize(s + t + 1, s + t + 1, C64::new(0.0, 0.0));
        b[(s + t, s + t)] = C64::new(-tr, 0.0);
        b
    } else {
        a
    };
    let n = a.nrows();
    let f = a.view((s, s), (n - s, n - s)).into_owned();
    let q = hollowing_unitary(&f);
    let mut out = rotate_tail(&a, s, &q);
    for i in 0..n {
        out[(i, i)].im = 0.0;
    }
    let next = u.derive(out, "hollow", json!({"appended_vertex": appended, "tail_trace": tr}))?;
    u.ensure_invariant(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;
    use crate::ratfun::{ExactRational as Q, FloatComplex, Polynomial, RationalFunction};

    fn simple<T: Scalar>(c: T, nu: T) -> RationalFunction<T> {
        RationalFunction::new(Polynomial::constant(c), Polynomial::linear(&nu)).unwrap()
    }

    #[test]
    fn infeasible_examples() {
        let at_i = RatMatrix::new(1, 1, vec![simple(FloatComplex::one(), FloatComplex::i())]).unwrap();
        let rep = check_hermitian_feasibility(&at_i);
        assert!(!rep.poles_real && !rep.feasible());
        let negative = RatMatrix::new(1, 1, vec![simple(Q::from_i64(-1), Q::from_i64(1))]).unwrap();
        let rep = check_hermitian_feasibility(&negative);
        assert!(rep.poles_real && rep.poles_simple);
        assert!((rep.residues_psd[0].1 + 1.0).abs() < 1e-12);
        assert!(matches!(unfold_hermitian(&negative), Err(Error::NotHermitianFeasible(_))));
        let constant = RatMatrix::from_scalar(&crate::linalg::Matrix::<Q>::from_i64(&[&[0, 1], &[2, 0]]));
        assert!(matches!(unfold_hermitian(&constant), Err(Error::NotHermitianFeasible(_))));
    }

    #[test]
    fn rank_one_residue() {
        let f = simple(Q::one(), Q::one());
        let r = RatMatrix::new(2, 2, vec![f.clone(), f.clone(), f.clone(), f]).unwrap();
        let u = unfold_hermitian(&r).unwrap();
        let want = CMatrix::from_fn(3, 3, |i, j| c64([[0.0, 0.0, 1.0], [0.0, 0.0, 1.0], [1.0, 1.0, 1.0]][i][j]));
        assert!((u.cmatrix() - want).norm() < 1e-12);
        assert!(u.is_hermitian());
    }

    #[test]
    fn hollow_single_pole() {
        let r = RatMatrix::new(1, 1, vec![simple(Q::one(), Q::one())]).unwrap();
        let u = unfold_hermitian(&r).unwrap();
        let h = hollow(&u).unwrap();
        assert_eq!(h.size(), 3);
        assert!(h.is_hollow() && h.is_hermitian());
        assert!(h.round_trip_gap(&r).unwrap() <= 1e-9);
        // The tail [1] ⊕ [-1] becomes the hollow [[0, 1], [1, 0]].
        let a = h.cmatrix();
        assert!((a[(1, 2)].norm() - 1.0).abs() < 1e-12);
        let mut ev: Vec<f64> = hermitian_eigen(&a).0;
        let mut before = hermitian_eigen(&u.cmatrix()).0;
        before.push(-1.0);
        ev.sort_by(f64::total_cmp);
        before.sort_by(f64::total_cmp);
        assert!(ev.iter().zip(&before).all(|(x, y)| (x - y).abs() < 1e-8));
    }

    #[test]
    fn hollow_requires_hollow_constant_part() {
        let r = RatMatrix::from_scalar(&crate::linalg::Matrix::<Q>::from_i64(&[&[1]]));
        let u = unfold_hermitian(&r).unwrap();
        assert!(matches!(hollow(&u), Err(Error::ConstantPartNotHollow(_))));
    }

    #[test]
    fn hollowing_unitary_zeroes_diagonal() {
        let f = CMatrix::from_fn(4, 4, |i, j| {
            let v = [[3.0, 1.0, 0.5, 0.0], [1.0, -1.0, 0.0, 2.0], [0.5, 0.0, -4.0, 1.0], [0.0, 2.0, 1.0, 2.0]][i][j];
            c64(v)
        });
        let q = hollowing_unitary(&f);
        let h = q.adjoint() * &f * &q;
        assert!((0..4).all(|i| h[(i, i)].norm() < 1e-12));
        assert!((q.adjoint() * &q - CMatrix::identity(4, 4)).norm() < 1e-12);
    }
}
