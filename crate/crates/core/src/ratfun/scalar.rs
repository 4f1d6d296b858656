//! Coefficient fields.
//!
//! Two backends implement [`Scalar`]: [`ExactRational`] (the Gaussian
//! rationals ℚ(i), exact equality) and [`FloatComplex`] (double precision
//! complex numbers compared with a relative tolerance).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::tolerance::float_eps;

pub type C64 = Complex64;

/// A field of coefficients for polynomials, rational functions and matrices.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` when arithmetic and equality are exact.
    const EXACT: bool;
    /// Backend name used in reports.
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn i() -> Self;
    fn from_i64(v: i64) -> Self;
    /// `p / q`; `q` must be nonzero.
    fn from_ratio(p: i64, q: i64) -> Self;
    /// Converts a complex double. The exact backend converts the binary value exactly.
    fn from_c64(z: C64) -> Self;
    fn to_c64(&self) -> C64;
    /// Converts an element of ℚ(i), exactly when the backend is exact.
    fn from_exact(q: &ExactRational) -> Self;
    fn conj(&self) -> Self;
    /// Exact zero test (no tolerance).
    fn is_zero(&self) -> bool;

    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn div_ref(&self, rhs: &Self) -> Self;

    fn from_f64(x: f64) -> Self {
        Self::from_c64(C64::new(x, 0.0))
    }

    fn abs(&self) -> f64 {
        self.to_c64().norm()
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Zero within `eps * scale` for the float backend; exact zero otherwise.
    fn is_negligible(&self, scale: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.abs() <= float_eps() * scale.max(f64::MIN_POSITIVE)
        }
    }
}

/// Element of ℚ(i): a pair of arbitrary-precision rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactRational {
    re: BigRational,
    im: BigRational,
}

impl ExactRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ExactRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        ExactRational { re, im: BigRational::zero() }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

fn ratio_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{} - {}i", self.re, -&self.im)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

/// Parses `"p/q"` or `"p"`.
impl FromStr for ExactRational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt, String> {
            t.trim()
                .parse::<BigInt>()
                .map_err(|e| format!("invalid rational `{s}`: {e}"))
        };
        let r = match s.split_once('/') {
            Some((p, q)) => {
                let q = parse_int(q)?;
                if q.is_zero() {
                    return Err(format!("zero denominator in `{s}`"));
                }
                BigRational::new(parse_int(p)?, q)
            }
            None => BigRational::from_integer(parse_int(s)?),
        };
        Ok(ExactRational::real(r))
    }
}

impl Add for ExactRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ExactRational { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for ExactRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ExactRational { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Mul for ExactRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl Div for ExactRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self.div_ref(&rhs)
    }
}

impl Neg for ExactRational {
    type Output = Self;
    fn neg(self) -> Self {
        ExactRational { re: -self.re, im: -self.im }
    }
}

impl Scalar for ExactRational {
    const EXACT: bool = true;
    const NAME: &'static str = "exact";

    fn zero() -> Self {
        ExactRational { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn one() -> Self {
        ExactRational::real(BigRational::one())
    }

    fn i() -> Self {
        ExactRational { re: BigRational::zero(), im: BigRational::one() }
    }

    fn from_i64(v: i64) -> Self {
        ExactRational::real(BigRational::from_integer(v.into()))
    }

    fn from_ratio(p: i64, q: i64) -> Self {
        ExactRational::real(BigRational::new(p.into(), q.into()))
    }

    fn from_c64(z: C64) -> Self {
        ExactRational { re: ratio_from_f64(z.re), im: ratio_from_f64(z.im) }
    }

    fn to_c64(&self) -> C64 {
        C64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    fn from_exact(q: &ExactRational) -> Self {
        q.clone()
    }

    fn conj(&self) -> Self {
        ExactRational { re: self.re.clone(), im: -&self.im }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        ExactRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        ExactRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return ExactRational::real(&self.re * &rhs.re);
        }
        ExactRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    fn div_ref(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "ExactRational division by zero");
        if rhs.im.is_zero() {
            return ExactRational { re: &self.re / &rhs.re, im: &self.im / &rhs.re };
        }
        let d = rhs.norm_sqr();
        let num = self.mul_ref(&rhs.conj());
        ExactRational { re: num.re / &d, im: num.im / d }
    }

    fn is_one(&self) -> bool {
        self.im.is_zero() && self.re.is_one()
    }
}

/// Double-precision complex scalar.
///
/// Equality is tolerant: `|a - b| <= eps * max(1, |a|, |b|)` with `eps` taken
/// from the installed [`Tolerances`](crate::Tolerances).
#[derive(Clone, Copy, Debug, Default)]
pub struct FloatComplex(pub C64);

impl FloatComplex {
    pub fn new(re: f64, im: f64) -> Self {
        FloatComplex(C64::new(re, im))
    }

    pub fn value(self) -> C64 {
        self.0
    }
}

impl PartialEq for FloatComplex {
    fn eq(&self, other: &Self) -> bool {
        let scale = 1f64.max(self.0.norm()).max(other.0.norm());
        (self.0 - other.0).norm() <= float_eps() * scale
    }
}

impl fmt::Display for FloatComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.im == 0.0 {
            write!(f, "{}", self.0.re)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl From<C64> for FloatComplex {
    fn from(z: C64) -> Self {
        FloatComplex(z)
    }
}

impl From<f64> for FloatComplex {
    fn from(x: f64) -> Self {
        FloatComplex(C64::new(x, 0.0))
    }
}

macro_rules! float_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for FloatComplex {
            type Output = Self;
            fn $m(self, rhs: Self) -> Self {
                FloatComplex(self.0 $op rhs.0)
            }
        }
    };
}

float_binop!(Add, add, +);
float_binop!(Sub, sub, -);
float_binop!(Mul, mul, *);
float_binop!(Div, div, /);

impl Neg for FloatComplex {
    type Output = Self;
    fn neg(self) -> Self {
        FloatComplex(-self.0)
    }
}

impl Scalar for FloatComplex {
    const EXACT: bool = false;
    const NAME: &'static str = "float";

    fn zero() -> Self {
        FloatComplex(C64::new(0.0, 0.0))
    }

    fn one() -> Self {
        FloatComplex(C64::new(1.0, 0.0))
    }

    fn i() -> Self {
        FloatComplex(C64::new(0.0, 1.0))
    }

    fn from_i64(v: i64) -> Self {
        FloatComplex(C64::new(v as f64, 0.0))
    }

    fn from_ratio(p: i64, q: i64) -> Self {
        FloatComplex(C64::new(p as f64 / q as f64, 0.0))
    }

    fn from_c64(z: C64) -> Self {
        FloatComplex(z)
    }

    fn to_c64(&self) -> C64 {
        self.0
    }

    fn from_exact(q: &ExactRational) -> Self {
        FloatComplex(q.to_c64())
    }

    fn conj(&self) -> Self {
        FloatComplex(self.0.conj())
    }

    fn is_zero(&self) -> bool {
        self.0.re == 0.0 && self.0.im == 0.0
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        FloatComplex(self.0 + rhs.0)
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        FloatComplex(self.0 - rhs.0)
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        FloatComplex(self.0 * rhs.0)
    }

    fn div_ref(&self, rhs: &Self) -> Self {
        FloatComplex(self.0 / rhs.0)
    }

    fn abs(&self) -> f64 {
        self.0.norm()
    }
}
