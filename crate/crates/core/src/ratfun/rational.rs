use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::poly::Polynomial;
use super::roots::{polynomial_roots, roots_c64, RootCluster};
use super::scalar::{Scalar, C64};
use crate::error::{Error, Result};
use crate::tolerance::float_delta;

/// Quotient of polynomials kept in canonical form: coprime numerator and
/// monic denominator.
///
/// For the float backend "coprime" means no numerator root lies within δ of a
/// denominator root.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction<T: Scalar> {
    num: Polynomial<T>,
    den: Polynomial<T>,
}

impl<T: Scalar> RationalFunction<T> {
    /// Normalizes `num/den`.
    pub fn new(num: Polynomial<T>, den: Polynomial<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Polynomial<T>, den: Polynomial<T>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else if T::EXACT {
            let g = num.gcd(&den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.div_rem(&g).unwrap().0, den.div_rem(&g).unwrap().0)
            }
        } else {
            cancel_common_roots(num, den)
        };
        let lead = den.lead();
        if lead.is_one() {
            RationalFunction { num, den }
        } else {
            RationalFunction { num: num.scale(&(T::one() / lead)), den: den.monic() }
        }
    }

    pub fn zero() -> Self {
        RationalFunction { num: Polynomial::zero(), den: Polynomial::one() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        RationalFunction { num: Polynomial::constant(c), den: Polynomial::one() }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::constant(T::from_i64(v))
    }

    /// The function λ.
    pub fn x() -> Self {
        Self::from_poly(Polynomial::x())
    }

    pub fn from_poly(p: Polynomial<T>) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    /// c / (λ - ν)^k
    pub fn pole_term(c: T, nu: &T, k: u32) -> Self {
        Self::normalize(Polynomial::constant(c), Polynomial::linear(nu).pow(k))
    }

    pub fn num(&self) -> &Polynomial<T> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_constant() && self.num.is_constant()
    }

    /// The constant value, if the function is constant.
    pub fn as_constant(&self) -> Option<T> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    /// deg num ≤ deg den.
    pub fn is_proper(&self) -> bool {
        self.num.degree().is_none_or(|n| n <= self.den.degree().unwrap_or(0))
    }

    /// lim λ→∞, defined for proper functions.
    pub fn limit_at_infinity(&self) -> Result<T> {
        match (self.num.degree(), self.den.degree().unwrap_or(0)) {
            (None, _) => Ok(T::zero()),
            (Some(n), d) if n < d => Ok(T::zero()),
            (Some(n), d) if n == d => Ok(self.num.lead()),
            (Some(n), d) => Err(Error::NotProper { num: n, den: d }),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Value at λ₀; fails at poles (within δ for floats).
    pub fn eval(&self, x: &T) -> Result<T> {
        let d = self.den.eval(x);
        let at_pole = if T::EXACT {
            d.is_zero()
        } else {
            let dd = self.den.derivative().eval(x);
            d.is_zero() || d.abs() <= float_delta() * dd.abs()
        };
        if at_pole {
            return Err(Error::EvaluationAtPole { entry: None });
        }
        Ok(self.num.eval(x).div_ref(&d))
    }

    /// Unchecked complex evaluation.
    pub fn eval_c64(&self, x: C64) -> C64 {
        self.num.eval_c64(x) / self.den.eval_c64(x)
    }

    /// Distinct poles with multiplicities.
    pub fn poles(&self) -> Result<Vec<RootCluster>> {
        polynomial_roots(&self.den)
    }

    /// Coefficients c₀..c_L of the expansion Σ c_k λ^{-k} at infinity.
    pub fn expand_at_infinity(&self, terms: usize) -> Result<Vec<T>> {
        let dd = self.den.degree().unwrap_or(0);
        let Some(dn) = self.num.degree() else {
            return Ok(vec![T::zero(); terms + 1]);
        };
        if dn > dd {
            return Err(Error::NotProper { num: dn, den: dd });
        }
        // In t = 1/λ: t^(dd-dn) · rev(num)(t) / rev(den)(t), rev(den)(0) = 1.
        let shift = dd - dn;
        let n: Vec<T> = self.num.coeffs().iter().rev().cloned().collect();
        let d: Vec<T> = self.den.coeffs().iter().rev().cloned().collect();
        let mut q: Vec<T> = Vec::with_capacity(terms + 1);
        for k in 0..=terms {
            if k < shift {
                q.push(T::zero());
                continue;
            }
            let j = k - shift;
            let mut acc = n.get(j).cloned().unwrap_or_else(T::zero);
            for i in 1..=j.min(d.len() - 1) {
                acc = acc.sub_ref(&d[i].mul_ref(&q[k - i]));
            }
            q.push(acc);
        }
        Ok(q)
    }

    pub fn cast<U: Scalar>(&self) -> RationalFunction<U> {
        RationalFunction::normalize(self.num.cast(), self.den.cast())
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> RationalFunction<U> {
        let num = Polynomial::new(self.num.coeffs().iter().map(&f).collect());
        let den = Polynomial::new(self.den.coeffs().iter().map(&f).collect());
        RationalFunction::normalize(num, den)
    }

    fn add_impl(&self, rhs: &Self, negate: bool) -> Self {
        let rn = if negate { -&rhs.num } else { rhs.num.clone() };
        if self.is_zero() {
            return RationalFunction { num: rn, den: rhs.den.clone() };
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Self::normalize(&self.num + &rn, self.den.clone());
        }
        if T::EXACT {
            let g = self.den.gcd(&rhs.den);
            let a = self.den.div_rem(&g).unwrap().0;
            let b = rhs.den.div_rem(&g).unwrap().0;
            let num = &(&self.num * &b) + &(&rn * &a);
            return Self::normalize(num, &a * &rhs.den);
        }
        let num = &(&self.num * &rhs.den) + &(&rn * &self.den);
        Self::normalize(num, &self.den * &rhs.den)
    }
}

/// Cancels numerator roots that lie within δ of a denominator root.
fn cancel_common_roots<T: Scalar>(
    mut num: Polynomial<T>,
    mut den: Polynomial<T>,
) -> (Polynomial<T>, Polynomial<T>) {
    let delta = float_delta();
    for mu in roots_c64(&den.to_c64()) {
        if num.is_constant() {
            break;
        }
        let n = num.eval_c64(mu);
        let dn = num.derivative().eval_c64(mu);
        let dist = if n.norm() == 0.0 { 0.0 } else { n.norm() / dn.norm() };
        if dist <= delta * 1f64.max(mu.norm()) {
            let mu = T::from_c64(mu);
            num = num.div_linear(&mu).0;
            den = den.div_linear(&mu).0;
        }
    }
    (num, den)
}

impl<T: Scalar> fmt::Display for RationalFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

impl<T: Scalar> Add for &RationalFunction<T> {
    type Output = RationalFunction<T>;
    fn add(self, rhs: Self) -> RationalFunction<T> {
        self.add_impl(rhs, false)
    }
}

impl<T: Scalar> Sub for &RationalFunction<T> {
    type Output = RationalFunction<T>;
    fn sub(self, rhs: Self) -> RationalFunction<T> {
        self.add_impl(rhs, true)
    }
}

impl<T: Scalar> Mul for &RationalFunction<T> {
    type Output = RationalFunction<T>;
    fn mul(self, rhs: Self) -> RationalFunction<T> {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            return RationalFunction { num: &self.num * &rhs.num, den: Polynomial::one() };
        }
        RationalFunction::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

/// Panics on division by the zero function; use [`RationalFunction::inv`] to handle it.
impl<T: Scalar> Div for &RationalFunction<T> {
    type Output = RationalFunction<T>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> RationalFunction<T> {
        self * &rhs.inv().expect("division by the zero rational function")
    }
}

impl<T: Scalar> Neg for &RationalFunction<T> {
    type Output = RationalFunction<T>;
    fn neg(self) -> RationalFunction<T> {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for RationalFunction<T> {
            type Output = RationalFunction<T>;
            fn $m(self, rhs: Self) -> RationalFunction<T> {
                (&self).$m(&rhs)
            }
        }
    };
}

by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);
by_value!(Div, div);

impl<T: Scalar> Neg for RationalFunction<T> {
    type Output = RationalFunction<T>;
    fn neg(self) -> RationalFunction<T> {
        -&self
    }
}
