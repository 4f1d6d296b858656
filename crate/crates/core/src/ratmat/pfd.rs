use serde::{Deserialize, Serialize};

use super::RatMatrix;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::ratfun::{principal_parts, Scalar, C64};
use crate::tolerance::float_delta;

/// K / (λ - ν)^order with a scalar coefficient matrix K.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixPfdTerm {
    pub pole: C64,
    pub order: usize,
    pub coeff: CMatrix,
}

/// M + Σᵢ Σₖ K_{i,k} / (λ - νᵢ)^k.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialFractionForm {
    pub constant: CMatrix,
    pub terms: Vec<MatrixPfdTerm>,
}

impl PartialFractionForm {
    pub fn eval(&self, x: C64) -> CMatrix {
        self.terms.iter().fold(self.constant.clone(), |acc, t| {
            acc + t.coeff.map(|k| k / (x - t.pole).powu(t.order as u32))
        })
    }

    /// Distinct poles with their top order.
    pub fn poles(&self) -> Vec<(C64, usize)> {
        let mut out: Vec<(C64, usize)> = Vec::new();
        for t in &self.terms {
            match out.iter_mut().find(|p| p.0 == t.pole) {
                Some(p) => p.1 = p.1.max(t.order),
                None => out.push((t.pole, t.order)),
            }
        }
        out
    }

    /// The coefficient of (λ - ν)^{-k}, if present.
    pub fn coeff(&self, pole: C64, order: usize) -> Option<&CMatrix> {
        self.terms
            .iter()
            .find(|t| t.order == order && t.pole == pole)
            .map(|t| &t.coeff)
    }
}

/// Entrywise partial fractions with poles pooled across entries.
pub fn pfd_matrix<T: Scalar>(r: &RatMatrix<T>) -> Result<PartialFractionForm> {
    if let Some(e) = r.entries().iter().find(|e| !e.is_proper()) {
        return Err(Error::NotProper {
            num: e.num().degree().unwrap_or(0),
            den: e.den().degree().unwrap_or(0),
        });
    }
    let (rows, cols) = (r.rows(), r.cols());
    let constant = r.constant_part()?.to_cmatrix();
    let pooled = r.poles()?;
    let mut terms: Vec<MatrixPfdTerm> = Vec::new();
    for p in &pooled {
        for k in 1..=p.multiplicity {
            terms.push(MatrixPfdTerm { pole: p.value, order: k, coeff: CMatrix::zeros(rows, cols) });
        }
    }
    let delta = float_delta();
    for i in 0..rows {
        for j in 0..cols {
            let e = &r[(i, j)];
            if e.den().is_constant() {
                continue;
            }
            for pe in principal_parts(e, &e.poles()?) {
                let target = pooled
                    .iter()
                    .find(|p| (p.value - pe.pole).norm() <= delta * 1f64.max(p.value.norm()))
                    .expect("entry pole belongs to the pooled set")
                    .value;
                for (k, c) in pe.coeffs.into_iter().enumerate() {
                    let t = terms
                        .iter_mut()
                        .find(|t| t.pole == target && t.order == k + 1)
                        .expect("order within pooled multiplicity");
                    t.coeff[(i, j)] += c;
                }
            }
        }
    }
    Ok(PartialFractionForm { constant, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::{ExactRational as Q, Polynomial, RationalFunction};

    #[test]
    fn shared_simple_pole() {
        let f = RationalFunction::<Q>::new(
            Polynomial::one(),
            Polynomial::linear(&Q::from_i64(1)),
        )
        .unwrap();
        let r = RatMatrix::new(2, 2, vec![f.clone(), RationalFunction::zero(), RationalFunction::zero(), f])
            .unwrap();
        let d = pfd_matrix(&r).unwrap();
        assert_eq!(d.terms.len(), 1);
        assert!((d.terms[0].pole - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((d.terms[0].coeff.clone() - CMatrix::identity(2, 2)).norm() < 1e-14);
        assert!(d.constant.norm() == 0.0);
    }
}
