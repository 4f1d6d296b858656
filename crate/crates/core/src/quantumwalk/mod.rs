//! Continuous-time quantum walks U(t) = e^{-itA}: restricted walks, perfect
//! state transfer and fractional revival certificates, and the link between
//! restricted walks and reductions.

mod trig;

pub use trig::{
    reduction_from_trig_walk, trig_walk_from_spectrum, weighted_target, TrigKind, TrigPoly, TrigTerm,
    TrigWalkSpec,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, hermitian_defect, hermitian_eigen, max_abs, CMatrix};
use crate::ratfun::{Scalar, C64};
use crate::reduction::{reduce, reduce_at, sample_points, LabeledMatrix, SAMPLE_COUNT, SAMPLE_TOL};
use crate::tolerance::float_eps;

/// Eigendecomposition A = QΛQ* of a Hermitian matrix, from which U(t) is
/// formed at any number of times.
#[derive(Clone, Debug)]
pub struct Propagator {
    labels: Vec<String>,
    values: Vec<f64>,
    vectors: CMatrix,
}

impl Propagator {
    pub fn new<T: Scalar>(a: &LabeledMatrix<T>) -> Result<Self> {
        let c = a.to_cmatrix();
        let defect = hermitian_defect(&c);
        if defect > float_eps() * 1f64.max(max_abs(&c)) {
            return Err(Error::NotHermitian(defect));
        }
        let (values, vectors) = hermitian_eigen(&c);
        Ok(Propagator { labels: a.labels().to_vec(), values, vectors })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    fn index(&self, label: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| Error::UnknownLabel(label.into()))
    }

    fn phases(&self, t: f64) -> Vec<C64> {
        self.values.iter().map(|&l| C64::from_polar(1.0, -l * t)).collect()
    }

    /// U(t) restricted to the given rows and columns.
    pub fn block(&self, rows: &[usize], cols: &[usize], t: f64) -> CMatrix {
        let ph = self.phases(t);
        let q = &self.vectors;
        CMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            (0..ph.len()).map(|k| q[(rows[i], k)] * ph[k] * q[(cols[j], k)].conj()).sum()
        })
    }

    pub fn at(&self, t: f64) -> CMatrix {
        let all: Vec<usize> = (0..self.labels.len()).collect();
        self.block(&all, &all, t)
    }
}

/// e^{-itA}.
pub fn evolve<T: Scalar>(a: &LabeledMatrix<T>, t: f64) -> Result<CMatrix> {
    Ok(Propagator::new(a)?.at(t))
}

/// The blocks Σ*U(t)Σ of a walk restricted to a vertex subset.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkSample {
    pub subset: Vec<String>,
    pub times: Vec<f64>,
    pub blocks: Vec<CMatrix>,
}

pub fn restricted_walk<T: Scalar, S: AsRef<str>>(a: &LabeledMatrix<T>, subset: &[S], times: &[f64]) -> Result<WalkSample> {
    let idx = a.resolve(subset)?;
    let p = Propagator::new(a)?;
    Ok(WalkSample {
        subset: idx.iter().map(|&i| a.labels()[i].clone()).collect(),
        times: times.to_vec(),
        blocks: times.iter().map(|&t| p.block(&idx, &idx, t)).collect(),
    })
}

/// U(τ)e_u = γe_v up to `deviation`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PstCertificate {
    pub u: String,
    pub v: String,
    pub tau: f64,
    pub gamma: C64,
    pub deviation: f64,
}

/// Why a PST check failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PstFailure {
    pub u: String,
    pub v: String,
    pub tau: f64,
    /// |U(τ)_{v,u}|².
    pub mass: f64,
    pub required: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PstOutcome {
    Certified(PstCertificate),
    Failed(PstFailure),
}

impl PstOutcome {
    pub fn certificate(&self) -> Option<&PstCertificate> {
        match self {
            PstOutcome::Certified(c) => Some(c),
            PstOutcome::Failed(_) => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        self.certificate().is_some()
    }
}

pub fn pst_check<T: Scalar>(a: &LabeledMatrix<T>, u: &str, v: &str, tau: f64, tol: f64) -> Result<PstOutcome> {
    pst_check_with(&Propagator::new(a)?, u, v, tau, tol)
}

/// Certifies PST when the mass of U(τ)e_u on v is at least 1 - tol².
///
/// For a unit column this is the condition |U(τ)e_u - γe_v| ≤ tol, which is
/// what gets tested: the deviation is assembled from the small entries and
/// stays accurate where 1 - mass would be lost to rounding.
pub fn pst_check_with(p: &Propagator, u: &str, v: &str, tau: f64, tol: f64) -> Result<PstOutcome> {
    if u == v {
        return Err(Error::SubsetViolation("perfect state transfer needs two distinct vertices".into()));
    }
    let (iu, iv) = (p.index(u)?, p.index(v)?);
    let all: Vec<usize> = (0..p.labels.len()).collect();
    let col = p.block(&all, &[iu], tau);
    let entry = col[(iv, 0)];
    let mass = entry.norm_sqr();
    let leak: f64 = (0..col.nrows()).filter(|&i| i != iv).map(|i| col[(i, 0)].norm_sqr()).sum();
    let deviation = (leak + (1.0 - entry.norm()).powi(2)).sqrt();
    if deviation > tol || entry.norm() == 0.0 {
        return Ok(PstOutcome::Failed(PstFailure { u: u.into(), v: v.into(), tau, mass, required: 1.0 - tol * tol }));
    }
    let gamma = entry / entry.norm();
    Ok(PstOutcome::Certified(PstCertificate { u: u.into(), v: v.into(), tau, gamma, deviation }))
}

/// A local maximum of |U(t)_{v,u}| found by [`pst_scan`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanCandidate {
    pub tau: f64,
    pub amplitude: f64,
    pub certificate: Option<PstCertificate>,
}

fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-10 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    (lo + hi) / 2.0
}

/// Local maxima of |U(t)_{v,u}| on an even grid over [0, T], refined by
/// golden-section search; maxima above 1 - tol carry a PST certificate.
pub fn pst_scan<T: Scalar>(a: &LabeledMatrix<T>, u: &str, v: &str, t_max: f64, grid: usize, tol: f64) -> Result<Vec<ScanCandidate>> {
    if t_max.is_nan() || t_max <= 0.0 || grid < 2 {
        return Err(Error::DimensionMismatch("scan needs T > 0 and at least two grid points".into()));
    }
    let p = Propagator::new(a)?;
    let (iu, iv) = (p.index(u)?, p.index(v)?);
    let amp = |t: f64| p.block(&[iv], &[iu], t)[(0, 0)].norm();
    let all: Vec<usize> = (0..p.labels.len()).collect();
    // Squared deviation from a transfer; unlike |U_vu| it is not flat to
    // rounding at the optimum, so the refinement reaches the requested width.
    let closeness = |t: f64| {
        let col = p.block(&all, &[iu], t);
        let leak: f64 = (0..col.nrows()).filter(|&i| i != iv).map(|i| col[(i, 0)].norm_sqr()).sum();
        -(leak + (1.0 - col[(iv, 0)].norm()).powi(2))
    };
    let ts: Vec<f64> = (0..grid).map(|i| t_max * i as f64 / (grid - 1) as f64).collect();
    let fs: Vec<f64> = ts.iter().map(|&t| amp(t)).collect();
    let mut out = Vec::new();
    for i in 0..grid {
        let left = if i == 0 { f64::NEG_INFINITY } else { fs[i - 1] };
        let right = if i + 1 == grid { f64::NEG_INFINITY } else { fs[i + 1] };
        if fs[i] < left || fs[i] < right || (fs[i] == left && i > 0) {
            continue;
        }
        let lo = ts[i.saturating_sub(1)];
        let hi = ts[(i + 1).min(grid - 1)];
        let tau = golden_max(&closeness, lo, hi);
        let amplitude = amp(tau);
        let certificate = if amplitude > 1.0 - tol {
            pst_check_with(&p, u, v, tau, tol)?.certificate().cloned()
        } else {
            None
        };
        out.push(ScanCandidate { tau, amplitude, certificate });
    }
    Ok(out)
}

/// Outcome of [`fr_check`].
#[derive(Clone, Debug, PartialEq)]
pub enum FrOutcome {
    /// U(τ) is block diagonal with this unitary block on S.
    Revival(CMatrix),
    /// The column of S with the most mass outside S.
    Leak { column: String, mass: f64 },
}

impl FrOutcome {
    pub fn is_revival(&self) -> bool {
        matches!(self, FrOutcome::Revival(_))
    }
}

/// Fractional revival on S: every column of U(τ) indexed by S has at most
/// `tol` of its mass outside S.
pub fn fr_check<T: Scalar, S: AsRef<str>>(a: &LabeledMatrix<T>, subset: &[S], tau: f64, tol: f64) -> Result<FrOutcome> {
    let idx = a.resolve(subset)?;
    let p = Propagator::new(a)?;
    let all: Vec<usize> = (0..a.size()).collect();
    let cols = p.block(&all, &idx, tau);
    let mut worst = (0, 0.0);
    for (j, &c) in idx.iter().enumerate() {
        let mass: f64 = (0..a.size()).filter(|i| !idx.contains(i)).map(|i| cols[(i, j)].norm_sqr()).sum();
        if mass > worst.1 {
            worst = (c, mass);
        }
    }
    if worst.1 > tol {
        return Ok(FrOutcome::Leak { column: a.labels()[worst.0].clone(), mass: worst.1 });
    }
    Ok(FrOutcome::Revival(CMatrix::from_fn(idx.len(), idx.len(), |i, j| cols[(idx[i], j)])))
}

fn complement_spectrum(a: &CMatrix, s: &[usize]) -> Vec<C64> {
    let rest: Vec<usize> = (0..a.nrows()).filter(|i| !s.contains(i)).collect();
    eigenvalues(&CMatrix::from_fn(rest.len(), rest.len(), |i, j| a[(rest[i], rest[j])]))
}

/// Checks that the two reductions agree, then that the restricted walks agree
/// within `tol` at every time.
///
/// Exact inputs compare reductions exactly; float inputs use the sampled protocol.
pub fn walk_equivalence_check<T: Scalar, S: AsRef<str>>(
    a1: &LabeledMatrix<T>,
    s1: &[S],
    a2: &LabeledMatrix<T>,
    s2: &[S],
    times: &[f64],
    tol: f64,
) -> Result<bool> {
    if s1.len() != s2.len() {
        return Err(Error::DimensionMismatch("subsets differ in size".into()));
    }
    if T::EXACT {
        let (r1, r2) = (reduce(a1, s1)?, reduce(a2, s2)?);
        if r1 != r2 {
            return Err(Error::ReductionsDiffer("exact reductions are not equal".into()));
        }
    } else {
        let (c1, c2) = (a1.to_cmatrix(), a2.to_cmatrix());
        let (i1, i2) = (a1.resolve(s1)?, a2.resolve(s2)?);
        let mut poles = complement_spectrum(&c1, &i1);
        poles.extend(complement_spectrum(&c2, &i2));
        for z in sample_points(&poles, SAMPLE_COUNT) {
            let gap = crate::linalg::relative_gap(&reduce_at(&c1, &i1, z)?, &reduce_at(&c2, &i2, z)?);
            if gap > SAMPLE_TOL {
                return Err(Error::ReductionsDiffer(format!("λ = {}", z.re)));
            }
        }
    }
    let w1 = restricted_walk(a1, s1, times)?;
    let w2 = restricted_walk(a2, s2, times)?;
    Ok(w1.blocks.iter().zip(&w2.blocks).all(|(x, y)| max_abs(&(x - y)) <= tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{cycle, hypercube, path, antipode};
    use crate::linalg::{c64, Matrix};
    use crate::ratfun::{ExactRational as Q, FloatComplex};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn k2() -> LabeledMatrix<FloatComplex> {
        path(2)
    }

    #[test]
    fn evolve_k2() {
        let a = k2();
        assert!((evolve(&a, 0.0).unwrap() - CMatrix::identity(2, 2)).norm() < 1e-14);
        let u = evolve(&a, FRAC_PI_2).unwrap();
        let want = CMatrix::from_row_slice(2, 2, &[c64(0.0), C64::new(0.0, -1.0), C64::new(0.0, -1.0), c64(0.0)]);
        assert!((u - want).norm() < 1e-14);
        let w = restricted_walk(&a, &["1"], &[0.3]).unwrap();
        assert!((w.blocks[0][(0, 0)] - c64(0.3f64.cos())).norm() < 1e-14);
    }

    #[test]
    fn non_hermitian_rejected() {
        let a = LabeledMatrix::unlabeled(Matrix::<Q>::from_i64(&[&[0, 1], &[0, 0]])).unwrap();
        assert!(matches!(evolve(&a, 1.0), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn pst_examples() {
        let c = pst_check(&k2(), "1", "2", FRAC_PI_2, 1e-8).unwrap();
        let cert = c.certificate().unwrap();
        assert!((cert.gamma - C64::new(0.0, -1.0)).norm() < 1e-12);
        let q4 = hypercube::<Q>(4);
        let c = pst_check(&q4, "0000", &antipode("0000"), FRAC_PI_2, 1e-8).unwrap();
        assert!(c.certificate().unwrap().deviation <= 1e-10);
        let p4 = path::<Q>(4);
        assert!(!pst_check(&p4, "1", "4", FRAC_PI_2, 1e-8).unwrap().is_certified());
        let back = pst_check(&q4, &antipode("0000"), "0000", FRAC_PI_2, 1e-8).unwrap();
        assert!((back.certificate().unwrap().gamma - c.certificate().unwrap().gamma).norm() < 1e-12);
    }

    #[test]
    fn scans() {
        let k = pst_scan(&k2(), "1", "2", PI, 64, 1e-8).unwrap();
        let best: Vec<_> = k.iter().filter_map(|c| c.certificate.as_ref()).collect();
        assert_eq!(best.len(), 1);
        assert!((best[0].tau - FRAC_PI_2).abs() < 1e-8);
        let q = pst_scan(&hypercube::<Q>(4), "0000", "1111", PI, 64, 1e-8).unwrap();
        assert!(q.iter().any(|c| c.certificate.as_ref().is_some_and(|c| (c.tau - FRAC_PI_2).abs() < 1e-8)));
        let c4 = pst_scan(&cycle::<Q>(4), "1", "2", 2.0 * PI, 128, 1e-8).unwrap();
        assert!(c4.iter().all(|c| c.certificate.is_none()));
    }

    #[test]
    fn fractional_revival() {
        let q4 = hypercube::<Q>(4);
        match fr_check(&q4, &["0000", "1111"], FRAC_PI_2, 1e-10).unwrap() {
            FrOutcome::Revival(h) => {
                assert!(h[(0, 0)].norm() < 1e-10 && h[(1, 1)].norm() < 1e-10);
                assert!((h[(0, 1)].norm() - 1.0).abs() < 1e-10);
            }
            other => panic!("{other:?}"),
        }
        let all: Vec<String> = q4.labels().to_vec();
        assert!(fr_check(&q4, &all, 0.7, 1e-12).unwrap().is_revival());
        assert!(!fr_check(&q4, &["0000", "1111"], 0.7, 1e-6).unwrap().is_revival());
    }

    #[test]
    fn equivalence_needs_equal_reductions() {
        let q4 = hypercube::<Q>(4);
        let q3 = hypercube::<Q>(3);
        let r = walk_equivalence_check(&q4, &["0000", "1111"], &q3, &["000", "111"], &[0.1], 1e-9);
        assert!(matches!(r, Err(Error::ReductionsDiffer(_))));
        let times: Vec<f64> = (0..10).map(|k| k as f64 * 0.3).collect();
        assert!(walk_equivalence_check(&q4, &["0000", "1111"], &q4, &["0101", "1010"], &times, 1e-9).unwrap());
    }
}
