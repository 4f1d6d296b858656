use serde::{Deserialize, Serialize};

use super::poly::Polynomial;
use super::rational::RationalFunction;
use super::roots::RootCluster;
use super::scalar::{FloatComplex, Scalar, C64};
use crate::error::{Error, Result};

/// One summand c / (λ - ν)^order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PfdTerm {
    pub pole: C64,
    pub order: usize,
    pub coeff: C64,
}

/// constant + Σ c / (λ - ν)^k.
///
/// Poles are algebraic numbers in general, so both backends report them as
/// complex doubles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarPfd {
    pub constant: C64,
    pub terms: Vec<PfdTerm>,
}

impl ScalarPfd {
    pub fn eval(&self, x: C64) -> C64 {
        self.terms
            .iter()
            .fold(self.constant, |acc, t| acc + t.coeff / (x - t.pole).powu(t.order as u32))
    }

    /// Re-sums the terms into a float rational function.
    pub fn to_rational(&self) -> RationalFunction<FloatComplex> {
        // Summed over the common denominator Π (λ - ν)^order so that repeated
        // poles never pass through float root cancellation.
        let mut order: Vec<(C64, usize)> = Vec::new();
        for t in &self.terms {
            match order.iter_mut().find(|(p, _)| *p == t.pole) {
                Some(e) => e.1 = e.1.max(t.order),
                None => order.push((t.pole, t.order)),
            }
        }
        let power = |p: C64, k: usize| Polynomial::linear(&FloatComplex(p)).pow(k as u32);
        let den = order.iter().fold(Polynomial::one(), |acc, &(p, k)| &acc * &power(p, k));
        let mut num = den.scale(&FloatComplex(self.constant));
        for t in &self.terms {
            let rest = order.iter().fold(Polynomial::one(), |acc, &(p, k)| {
                let k = if p == t.pole { k - t.order } else { k };
                &acc * &power(p, k)
            });
            num = &num + &rest.scale(&FloatComplex(t.coeff));
        }
        RationalFunction::new(num, den).expect("monic denominator")
    }
}

/// Laurent coefficients at a pole: `coeffs[k-1]` multiplies (λ - ν)^{-k}.
pub(crate) struct PoleExpansion {
    pub pole: C64,
    pub coeffs: Vec<C64>,
}

/// Principal parts of a proper rational function at each of its poles.
pub(crate) fn principal_parts<T: Scalar>(
    r: &RationalFunction<T>,
    poles: &[RootCluster],
) -> Vec<PoleExpansion> {
    poles
        .iter()
        .map(|pc| PoleExpansion { pole: pc.value, coeffs: principal_part(r, pc) })
        .collect()
}

fn principal_part<T: Scalar>(r: &RationalFunction<T>, pc: &RootCluster) -> Vec<C64> {
    let m = pc.multiplicity;
    if m == 1 {
        // Simple pole: num(ν) / den'(ν), evaluated in the backend's own arithmetic.
        let nu = T::from_c64(pc.value);
        let d = r.den().derivative().eval(&nu);
        return vec![r.num().eval(&nu).div_ref(&d).to_c64()];
    }
    // h(ν + x) = num(ν + x) / (den(ν + x) / x^m); the Taylor coefficients of h
    // are the Laurent coefficients of r at ν in reverse.
    let nu = FloatComplex(pc.value);
    let num: Polynomial<FloatComplex> = r.num().cast::<FloatComplex>().taylor_shift(&nu);
    let den = r.den().cast::<FloatComplex>().taylor_shift(&nu);
    let q: Vec<C64> = (0..m).map(|k| den.coeff(m + k).0).collect();
    let mut h = vec![C64::new(0.0, 0.0); m];
    for k in 0..m {
        let mut acc = num.coeff(k).0;
        for i in 1..=k {
            acc -= q[i] * h[k - i];
        }
        h[k] = acc / q[0];
    }
    h.reverse();
    h
}

/// Partial fraction decomposition of a proper rational function.
pub fn pfd_scalar<T: Scalar>(r: &RationalFunction<T>) -> Result<ScalarPfd> {
    if !r.is_proper() {
        return Err(Error::NotProper {
            num: r.num().degree().unwrap_or(0),
            den: r.den().degree().unwrap_or(0),
        });
    }
    let constant = r.limit_at_infinity()?.to_c64();
    let poles = if r.is_zero() { Vec::new() } else { r.poles()? };
    let mut terms = Vec::new();
    for pe in principal_parts(r, &poles) {
        for (k, c) in pe.coeffs.into_iter().enumerate() {
            terms.push(PfdTerm { pole: pe.pole, order: k + 1, coeff: c });
        }
    }
    Ok(ScalarPfd { constant, terms })
}
