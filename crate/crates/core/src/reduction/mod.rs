//! Isospectral reductions to a vertex subset or to an orthonormal frame,
//! walk generating functions, and checks of the identities they satisfy.

mod checks;
mod core;
mod sampling;
mod walks;

pub use self::checks::{
    char_poly_identity, cospectral_check, edge_split_check, eigvec_restriction_check,
    frame_det_check, frame_sequential_check, reduce_sequential_check, residue_check,
    similarity_invariance_check, BlockPart, CharPolyIdentity, ResidueReport,
};
pub use self::core::{
    char_poly, reduce, reduce_at, reduce_blocks, reduce_frame, reduce_frame_at, reduce_indices,
    reduce_ratmatrix, reduce_via_formula2, formula2_at, resolvent, Resolvent,
};
pub(crate) use self::core::resolvent_block;
pub use self::sampling::{sample_points, sampled_gap, SAMPLE_COUNT, SAMPLE_RANGE, SAMPLE_TOL};
pub use self::walks::{
    walk_identity_check, walk_series_brute, walk_series_nonreturning, walk_series_returning,
    WalkSeries, BRUTE_FORCE_LIMIT,
};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_defect, orthonormality_defect, CMatrix, Matrix};
use crate::ratfun::Scalar;
use crate::tolerance::float_eps;

/// Square matrix with distinct vertex labels.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledMatrix<T: Scalar> {
    labels: Vec<String>,
    matrix: Matrix<T>,
    hermitian: bool,
}

impl<T: Scalar> LabeledMatrix<T> {
    pub fn new(labels: Vec<String>, matrix: Matrix<T>) -> Result<Self> {
        if !matrix.is_square() || labels.len() != matrix.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for a {}x{} matrix",
                labels.len(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let hermitian = hermitian_defect(&matrix.to_cmatrix()) <= float_eps();
        Ok(LabeledMatrix { labels, matrix, hermitian })
    }

    /// Labels "1", "2", ….
    pub fn unlabeled(matrix: Matrix<T>) -> Result<Self> {
        let labels = (1..=matrix.rows()).map(|i| i.to_string()).collect();
        Self::new(labels, matrix)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn to_cmatrix(&self) -> CMatrix {
        self.matrix.to_cmatrix()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Indices of a subset; rejects empty subsets, unknown labels and repeats.
    pub fn resolve<S: AsRef<str>>(&self, subset: &[S]) -> Result<Vec<usize>> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut idx = Vec::with_capacity(subset.len());
        for s in subset {
            let i = self.index_of(s.as_ref())?;
            if idx.contains(&i) {
                return Err(Error::DuplicateLabel(s.as_ref().to_string()));
            }
            idx.push(i);
        }
        Ok(idx)
    }

    pub fn cast<U: Scalar>(&self) -> LabeledMatrix<U> {
        LabeledMatrix {
            labels: self.labels.clone(),
            matrix: self.matrix.cast(),
            hermitian: self.hermitian,
        }
    }

    /// Applies a new matrix of the same size, keeping labels.
    pub fn with_matrix(&self, matrix: Matrix<T>) -> Result<Self> {
        Self::new(self.labels.clone(), matrix)
    }
}

/// What a reduction is taken onto.
#[derive(Clone, Debug, PartialEq)]
pub enum Selector<T: Scalar> {
    Subset(Vec<String>),
    Frame(Matrix<T>),
}

impl<T: Scalar> Selector<T> {
    pub fn subset<S: ToString>(labels: &[S]) -> Self {
        Selector::Subset(labels.iter().map(ToString::to_string).collect())
    }

    /// The frame matrix Σ for a matrix of the given labels.
    pub fn frame_for(&self, a: &LabeledMatrix<T>) -> Result<Matrix<T>> {
        match self {
            Selector::Subset(s) => {
                let idx = a.resolve(s)?;
                Ok(Matrix::from_fn(a.size(), idx.len(), |i, j| {
                    if idx[j] == i {
                        T::one()
                    } else {
                        T::zero()
                    }
                }))
            }
            Selector::Frame(f) => {
                check_frame(f)?;
                if f.rows() != a.size() {
                    return Err(Error::DimensionMismatch("frame rows".into()));
                }
                Ok(f.clone())
            }
        }
    }
}

/// Σ*Σ = I, exactly for the exact backend and within ε otherwise.
pub fn check_frame<T: Scalar>(sigma: &Matrix<T>) -> Result<()> {
    if sigma.cols() == 0 || sigma.cols() > sigma.rows() {
        return Err(Error::FrameNotOrthonormal(f64::INFINITY));
    }
    if T::EXACT {
        let g = sigma.adjoint().mul(sigma)?;
        if g != Matrix::identity(sigma.cols()) {
            let d = g.sub(&Matrix::identity(sigma.cols()))?.max_abs();
            return Err(Error::FrameNotOrthonormal(d));
        }
        return Ok(());
    }
    let d = orthonormality_defect(&sigma.to_cmatrix());
    if d > float_eps() {
        return Err(Error::FrameNotOrthonormal(d));
    }
    Ok(())
}
