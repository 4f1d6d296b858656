//! Restricted walks written as finite trigonometric polynomials, and their
//! reductions via the Laplace transform at s = -iλ.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Matrix};
use crate::ratfun::{ExactRational as Q, Polynomial, RationalFunction, Scalar, C64};
use crate::ratmat::RatMatrix;
use crate::reduction::{char_poly, LabeledMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TrigKind {
    Cos,
    Sin,
}

/// amp · cos(freq·t) or amp · sin(freq·t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrigTerm {
    pub amp: Q,
    pub freq: u32,
    pub kind: TrigKind,
}

impl TrigTerm {
    pub fn cos(amp: Q, freq: u32) -> Self {
        TrigTerm { amp, freq, kind: TrigKind::Cos }
    }

    pub fn sin(amp: Q, freq: u32) -> Self {
        TrigTerm { amp, freq, kind: TrigKind::Sin }
    }
}

/// A finite sum of trig terms with at most one term per (frequency, kind).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrigPoly {
    terms: Vec<TrigTerm>,
}

/// Laurent polynomial in z = e^{it}.
type Laurent = BTreeMap<i64, Q>;

fn laurent_mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (i, x) in a {
        for (j, y) in b {
            let e = out.entry(i + j).or_insert_with(Q::zero);
            *e = e.add_ref(&x.mul_ref(y));
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

impl TrigPoly {
    /// Merges repeated (frequency, kind) pairs and drops zero terms, including sin 0t.
    pub fn new(terms: Vec<TrigTerm>) -> Self {
        let mut acc: BTreeMap<(u32, TrigKind), Q> = BTreeMap::new();
        for t in terms {
            if t.freq == 0 && t.kind == TrigKind::Sin {
                continue;
            }
            let e = acc.entry((t.freq, t.kind)).or_insert_with(Q::zero);
            *e = e.add_ref(&t.amp);
        }
        let terms = acc
            .into_iter()
            .filter(|(_, a)| !a.is_zero())
            .map(|((freq, kind), amp)| TrigTerm { amp, freq, kind })
            .collect();
        TrigPoly { terms }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![TrigTerm::cos(c, 0)])
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, t: f64) -> C64 {
        self.terms
            .iter()
            .map(|term| {
                let x = f64::from(term.freq) * t;
                term.amp.to_c64() * if term.kind == TrigKind::Cos { x.cos() } else { x.sin() }
            })
            .sum()
    }

    /// Σ c_m e^{imt} regrouped as (c_m + c_{-m}) cos mt + i(c_m - c_{-m}) sin mt.
    fn from_laurent(l: &Laurent) -> Self {
        let get = |m: i64| l.get(&m).cloned().unwrap_or_else(Q::zero);
        let top = l.keys().map(|k| k.unsigned_abs()).max().unwrap_or(0);
        let mut terms = vec![TrigTerm::cos(get(0), 0)];
        for m in 1..=top as i64 {
            let (p, n) = (get(m), get(-m));
            terms.push(TrigTerm::cos(p.add_ref(&n), m as u32));
            terms.push(TrigTerm::sin(Q::i().mul_ref(&p.sub_ref(&n)), m as u32));
        }
        Self::new(terms)
    }

    /// p(f(t)) for a polynomial p, where f is given as a Laurent polynomial in e^{it}.
    fn compose(p: &Polynomial<Q>, f: &Laurent) -> Self {
        let mut acc = Laurent::new();
        let mut power: Laurent = [(0, Q::one())].into_iter().collect();
        for c in p.coeffs() {
            for (k, v) in &power {
                let e = acc.entry(*k).or_insert_with(Q::zero);
                *e = e.add_ref(&c.mul_ref(v));
            }
            power = laurent_mul(&power, f);
        }
        Self::from_laurent(&acc)
    }

    /// p(cos t) expanded into multiple angles.
    pub fn of_cos(p: &Polynomial<Q>) -> Self {
        let half = Q::from_ratio(1, 2);
        Self::compose(p, &[(-1, half.clone()), (1, half)].into_iter().collect())
    }

    /// p(i sin t) expanded into multiple angles.
    pub fn of_i_sin(p: &Polynomial<Q>) -> Self {
        let half = Q::from_ratio(1, 2);
        Self::compose(p, &[(-1, -half.clone()), (1, half)].into_iter().collect())
    }

    /// Laplace transform at s = -iλ:
    /// cos kt ↦ iλ/(λ² - k²), sin kt ↦ -k/(λ² - k²), 1 ↦ i/λ.
    fn laplace<T: Scalar>(&self) -> Result<RationalFunction<T>> {
        let mut out = RationalFunction::zero();
        for term in &self.terms {
            let amp = T::from_exact(&term.amp);
            let k = T::from_i64(i64::from(term.freq));
            let den = Polynomial::new(vec![-k.mul_ref(&k), T::zero(), T::one()]);
            let f = match (term.kind, term.freq) {
                (TrigKind::Cos, 0) => RationalFunction::new(Polynomial::constant(T::i()), Polynomial::x())?,
                (TrigKind::Cos, _) => RationalFunction::new(Polynomial::monomial(T::i(), 1), den)?,
                (TrigKind::Sin, _) => RationalFunction::new(Polynomial::constant(-k), den)?,
            };
            out = &out + &f.scale(&amp);
        }
        Ok(out)
    }
}

/// A square matrix of trig polynomials, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrigWalkSpec {
    pub size: usize,
    pub entries: Vec<TrigPoly>,
}

impl TrigWalkSpec {
    pub fn new(size: usize, entries: Vec<TrigPoly>) -> Result<Self> {
        if size == 0 || entries.len() != size * size {
            return Err(Error::DimensionMismatch(format!("{} entries for a {size}×{size} walk", entries.len())));
        }
        Ok(TrigWalkSpec { size, entries })
    }

    pub fn entry(&self, i: usize, j: usize) -> &TrigPoly {
        &self.entries[i * self.size + j]
    }

    pub fn eval(&self, t: f64) -> CMatrix {
        CMatrix::from_fn(self.size, self.size, |i, j| self.entry(i, j).eval(t))
    }

    pub fn max_freq(&self) -> u32 {
        self.entries.iter().flat_map(|p| p.terms.iter().map(|t| t.freq)).max().unwrap_or(0)
    }
}

/// The reduction whose restricted walk is `spec`: R = λI - i·G⁻¹ with G the
/// entrywise Laplace transform of the walk at s = -iλ.
pub fn reduction_from_trig_walk<T: Scalar>(spec: &TrigWalkSpec) -> Result<RatMatrix<T>> {
    let g = spec.entries.iter().map(|p| p.laplace::<T>()).collect::<Result<Vec<_>>>()?;
    let g = RatMatrix::new(spec.size, spec.size, g)?;
    let inv = g.inverse().map_err(|e| match e {
        Error::SingularOverFunctionField => Error::SingularTransform,
        other => other,
    })?;
    let r = inv.scale(&RationalFunction::constant(T::i())).lambda_minus_self()?;
    if let Some(f) = r.entries().iter().find(|f| !f.is_proper()) {
        let deg = |p: &Polynomial<T>| p.degree().unwrap_or(0);
        return Err(Error::NotProper { num: deg(f.num()), den: deg(f.den()) });
    }
    Ok(r)
}

/// The 2×2 target walk [[p(cos t), p(i sin t)], [p(i sin t), p(cos t)]] with
/// p(x) = (x¹⁵ + 3x¹¹ + 3x⁷ + x³)/8.
pub fn weighted_target() -> TrigWalkSpec {
    let mut c = vec![Q::zero(); 16];
    for (k, a) in [(15, 1), (11, 3), (7, 3), (3, 1)] {
        c[k] = Q::from_ratio(a, 8);
    }
    let p = Polynomial::new(c);
    let (d, o) = (TrigPoly::of_cos(&p), TrigPoly::of_i_sin(&p));
    TrigWalkSpec { size: 2, entries: vec![d.clone(), o.clone(), o, d] }
}

/// Σ*e^{-itA}Σ as exact trig polynomials, for a Hermitian matrix with integer spectrum.
///
/// With spectral projections E_θ = Π_{μ≠θ}(A - μI)/(θ - μ), the walk is
/// Σ_θ E_θ (cos θt - i sin θt).
pub fn trig_walk_from_spectrum<S: AsRef<str>>(a: &LabeledMatrix<Q>, subset: &[S]) -> Result<TrigWalkSpec> {
    let idx = a.resolve(subset)?;
    let m = a.matrix();
    let n = m.rows();
    let p = char_poly(m);
    let bound = (0..n).map(|i| m.row(i).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max).ceil() as i64;
    let roots: Vec<i64> = (-bound..=bound).filter(|&k| p.eval(&Q::from_i64(k)).is_zero()).collect();
    let shift = |k: i64| m.sub(&Matrix::identity(n).scale(&Q::from_i64(k)));
    let mut prod = Matrix::identity(n);
    for &k in &roots {
        prod = prod.mul(&shift(k)?)?;
    }
    if prod.data().iter().any(|x| !x.is_zero()) {
        return Err(Error::NonIntegralSpectrum(format!("integer roots {roots:?} do not split the minimal polynomial")));
    }
    let mut terms = vec![Vec::new(); idx.len() * idx.len()];
    for &theta in &roots {
        let mut e = Matrix::identity(n);
        for &mu in roots.iter().filter(|&&mu| mu != theta) {
            e = e.mul(&shift(mu)?)?.scale(&Q::from_ratio(1, theta - mu));
        }
        let freq = theta.unsigned_abs() as u32;
        let sin_sign = Q::from_i64(-theta.signum());
        for (k, (i, j)) in idx.iter().flat_map(|&i| idx.iter().map(move |&j| (i, j))).enumerate() {
            let v = e[(i, j)].clone();
            terms[k].push(TrigTerm::cos(v.clone(), freq));
            terms[k].push(TrigTerm::sin(Q::i().mul_ref(&sin_sign).mul_ref(&v), freq));
        }
    }
    TrigWalkSpec::new(idx.len(), terms.into_iter().map(TrigPoly::new).collect())
}
