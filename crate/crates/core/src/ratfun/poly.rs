use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::{Scalar, C64};
use crate::error::{Error, Result};

/// Relative size below which a trailing float coefficient is treated as rounding noise.
const FLOAT_TRIM: f64 = 16.0 * f64::EPSILON;

/// Univariate polynomial in λ with ascending coefficients.
///
/// The representation is trimmed: the last coefficient is nonzero, and the
/// zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T: Scalar> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        if T::EXACT {
            while coeffs.last().is_some_and(|c| c.is_zero()) {
                coeffs.pop();
            }
        } else {
            let max = coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max);
            while coeffs.last().is_some_and(|c| c.abs() <= FLOAT_TRIM * max) {
                coeffs.pop();
            }
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial λ.
    pub fn x() -> Self {
        Polynomial { coeffs: vec![T::zero(), T::one()] }
    }

    /// λ - a
    pub fn linear(a: &T) -> Self {
        Polynomial { coeffs: vec![-a.clone(), T::one()] }
    }

    /// c·λ^k
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[T]) -> Self {
        roots
            .iter()
            .fold(Self::one(), |acc, r| acc.mul_linear(r))
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(x).add_ref(c);
        }
        acc
    }

    pub fn eval_c64(&self, x: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, c| acc * x + c.to_c64())
    }

    /// Sum of |c_k|·r^k, the natural size of the polynomial on the circle |λ| = r.
    pub fn weight(&self, r: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.abs())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul_ref(&T::from_i64(k as i64)))
            .collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mul_ref(s)).collect())
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => Self::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => {
                let mut coeffs: Vec<T> = self.coeffs.iter().map(|c| c.div_ref(l)).collect();
                *coeffs.last_mut().unwrap() = T::one();
                Polynomial { coeffs }
            }
        }
    }

    /// Multiplies by (λ - a).
    pub fn mul_linear(&self, a: &T) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let n = self.coeffs.len();
        let mut out = Vec::with_capacity(n + 1);
        out.push(-self.coeffs[0].mul_ref(a));
        for k in 1..n {
            out.push(self.coeffs[k - 1].sub_ref(&self.coeffs[k].mul_ref(a)));
        }
        out.push(self.coeffs[n - 1].clone());
        Self::new(out)
    }

    /// Synthetic division by (λ - a): quotient and remainder p(a).
    pub fn div_linear(&self, a: &T) -> (Self, T) {
        if self.is_zero() {
            return (Self::zero(), T::zero());
        }
        let n = self.coeffs.len();
        let mut q = vec![T::zero(); n - 1];
        let mut acc = T::zero();
        for k in (0..n).rev() {
            acc = acc.mul_ref(a).add_ref(&self.coeffs[k]);
            if k > 0 {
                q[k - 1] = acc.clone();
            }
        }
        (Self::new(q), acc)
    }

    /// Euclidean division. Fails only when `d` is zero.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::ZeroDenominator)?;
        let lead = d.lead();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![T::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].div_ref(&lead);
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].sub_ref(&c.mul_ref(dc));
                }
            }
            r[k + dd] = T::zero();
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    /// Monic greatest common divisor by Euclid's algorithm.
    ///
    /// Exact for [`ExactRational`](super::ExactRational); for floats the
    /// rational-function layer identifies common roots by clustering instead.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }

    /// p(λ + a)
    pub fn taylor_shift(&self, a: &T) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for k in (i..n.saturating_sub(1)).rev() {
                let t = c[k + 1].mul_ref(a);
                c[k] = c[k].add_ref(&t);
            }
        }
        Self::new(c)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_c64(&self) -> Vec<C64> {
        self.coeffs.iter().map(|c| c.to_c64()).collect()
    }

    /// Converts coefficients into another backend.
    pub fn cast<U: Scalar>(&self) -> Polynomial<U> {
        Polynomial::new(self.coeffs.iter().map(|c| U::from_c64(c.to_c64())).collect())
    }

    /// Drops leading coefficients that are negligible on the circle |λ| = r.
    pub fn trim_on_circle(&self, r: f64, tol: f64) -> Self {
        let scale = self.weight(r);
        let mut coeffs = self.coeffs.clone();
        let mut rk = r.powi(coeffs.len() as i32 - 1);
        while coeffs.last().is_some_and(|c| c.abs() * rk <= tol * scale) {
            coeffs.pop();
            rk /= r;
        }
        Polynomial { coeffs }
    }
}

fn zip_with<T: Scalar>(a: &[T], b: &[T], f: impl Fn(&T, &T) -> T) -> Vec<T> {
    let z = T::zero();
    (0..a.len().max(b.len()))
        .map(|k| f(a.get(k).unwrap_or(&z), b.get(k).unwrap_or(&z)))
        .collect()
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        Polynomial::new(zip_with(&self.coeffs, &rhs.coeffs, |x, y| x.add_ref(y)))
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        Polynomial::new(zip_with(&self.coeffs, &rhs.coeffs, |x, y| x.sub_ref(y)))
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for Polynomial<T> {
            type Output = Polynomial<T>;
            fn $m(self, rhs: Self) -> Polynomial<T> {
                (&self).$m(&rhs)
            }
        }
    };
}

by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl<T: Scalar> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})λ")?,
                _ => write!(f, "({c})λ^{k}")?,
            }
        }
        Ok(())
    }
}
