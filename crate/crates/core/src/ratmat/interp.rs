use std::f64::consts::{FRAC_1_PI, TAU};

use super::{row_denominators, RatMatrix};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::ratfun::{roots_c64, Polynomial, RationalFunction, Scalar, C64};

/// Leading coefficients smaller than this, relative to the sample size on the
/// circle, are interpolation noise.
const TRIM_TOL: f64 = 1e-10;
/// Real or imaginary parts below this relative level are set to zero.
const CLEAN_TOL: f64 = 1e-13;

/// Equispaced nodes ρ·exp(i(2πj/n + φ)) on a circle.
#[derive(Clone, Copy, Debug)]
pub struct CircleGrid {
    pub radius: f64,
    pub phase: f64,
    pub n: usize,
}

impl CircleGrid {
    /// The fixed phase keeps nodes off the real axis, where poles of
    /// Hermitian problems live.
    pub fn new(n: usize, radius: f64) -> Self {
        CircleGrid { radius, phase: FRAC_1_PI, n: n.max(1) }
    }

    pub fn node(&self, j: usize) -> C64 {
        C64::from_polar(self.radius, TAU * j as f64 / self.n as f64 + self.phase)
    }

    pub fn nodes(&self) -> Vec<C64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }
}

/// Evaluates `f` at every node of the grid.
pub fn sample_on_circle<V>(grid: &CircleGrid, f: impl Fn(C64) -> V) -> Vec<V> {
    grid.nodes().into_iter().map(f).collect()
}

/// Coefficients c₀..c_{n-1} of the polynomial of degree < n through the samples.
pub fn interpolate_on_circle(grid: &CircleGrid, values: &[C64]) -> Vec<C64> {
    let n = grid.n;
    (0..n)
        .map(|k| {
            let s: C64 = values
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    let theta = TAU * j as f64 / n as f64 + grid.phase;
                    v * C64::from_polar(1.0, -(k as f64) * theta)
                })
                .sum();
            s / (n as f64 * grid.radius.powi(k as i32))
        })
        .collect()
}

/// Interpolates a polynomial of degree ≤ `max_degree` and strips noise.
pub(crate) fn fit_polynomial<T: Scalar>(grid: &CircleGrid, values: &[C64], max_degree: usize) -> Polynomial<T> {
    let mut c = interpolate_on_circle(grid, values);
    c.truncate(max_degree + 1);
    let w = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut rk = 1.0;
    for z in c.iter_mut() {
        let noise = CLEAN_TOL * w / rk;
        if z.re.abs() <= noise {
            z.re = 0.0;
        }
        if z.im.abs() <= noise {
            z.im = 0.0;
        }
        rk *= grid.radius;
    }
    Polynomial::new(c.into_iter().map(T::from_c64).collect()).trim_on_circle(grid.radius, TRIM_TOL)
}

/// Builds a rational matrix N(λ)/den(λ) from samples of `den(z)·F(z)`.
pub(crate) fn rational_matrix_from_samples<T: Scalar>(
    rows: usize,
    cols: usize,
    grid: &CircleGrid,
    samples: &[CMatrix],
    den: &Polynomial<T>,
    num_degree: usize,
) -> Result<RatMatrix<T>> {
    let mut entries = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            let v: Vec<C64> = samples.iter().map(|m| m[(i, j)]).collect();
            let num = fit_polynomial::<T>(grid, &v, num_degree);
            entries.push(RationalFunction::new(num, den.clone())?);
        }
    }
    RatMatrix::new(rows, cols, entries)
}

fn root_radius<T: Scalar>(p: &Polynomial<T>) -> f64 {
    roots_c64(&p.to_c64()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

struct Prepared<T: Scalar> {
    q: Vec<Polynomial<T>>,
    row_deg: Vec<usize>,
    total: usize,
}

fn prepare<T: Scalar>(m: &RatMatrix<T>) -> Prepared<T> {
    let q = row_denominators(m);
    let row_deg: Vec<usize> = (0..m.rows())
        .map(|i| {
            let qd = q[i].degree().unwrap_or(0);
            (0..m.cols())
                .filter_map(|j| {
                    let e = &m[(i, j)];
                    e.num().degree().map(|n| (n + qd).saturating_sub(e.den().degree().unwrap_or(0)))
                })
                .max()
                .unwrap_or(0)
        })
        .collect();
    let total = row_deg.iter().sum();
    Prepared { q, row_deg, total }
}

/// det of diag(q)·A at z, and the Hadamard bound used to detect singularity.
fn scaled_det<T: Scalar>(m: &RatMatrix<T>, p: &Prepared<T>, z: C64) -> (C64, CMatrix, f64) {
    let a = m.eval_c64(z);
    let qz: C64 = p.q.iter().map(|q| q.eval_c64(z)).product();
    let det = a.clone().lu().determinant() * qz;
    let hadamard: f64 = (0..a.nrows())
        .map(|i| a.row(i).iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt() * p.q[i].eval_c64(z).norm())
        .product();
    (det, a, hadamard)
}

fn det_polynomial<T: Scalar>(m: &RatMatrix<T>, p: &Prepared<T>) -> Result<(Polynomial<T>, CircleGrid)> {
    let pole_radius = p.q.iter().map(root_radius).fold(0.0, f64::max);
    let mut radius = 1.5 * 1f64.max(pole_radius);
    let mut det = Polynomial::zero();
    let mut grid = CircleGrid::new(p.total + 1, radius);
    for pass in 0..2 {
        grid = CircleGrid::new(p.total + 1, radius);
        let samples: Vec<(C64, CMatrix, f64)> = sample_on_circle(&grid, |z| scaled_det(m, p, z));
        let singular = samples.iter().all(|(d, _, h)| d.norm() <= 1e-12 * h);
        if singular {
            return Err(Error::SingularOverFunctionField);
        }
        let values: Vec<C64> = samples.iter().map(|s| s.0).collect();
        det = fit_polynomial(&grid, &values, p.total);
        if pass == 0 {
            let r = root_radius(&det);
            if r <= radius / 1.5 {
                break;
            }
            radius = 1.5 * r;
        }
    }
    Ok((det, grid))
}

pub(super) fn det_float<T: Scalar>(m: &RatMatrix<T>) -> Result<RationalFunction<T>> {
    if m.rows() == 0 {
        return Ok(RationalFunction::one());
    }
    let p = prepare(m);
    let qprod = p.q.iter().fold(Polynomial::one(), |acc, q| &acc * q);
    match det_polynomial(m, &p) {
        Ok((det, _)) => RationalFunction::new(det, qprod),
        Err(Error::SingularOverFunctionField) => Ok(RationalFunction::zero()),
        Err(e) => Err(e),
    }
}

pub(super) fn inverse_float<T: Scalar>(m: &RatMatrix<T>) -> Result<RatMatrix<T>> {
    let n = m.rows();
    if n == 0 {
        return Ok(m.clone());
    }
    let p = prepare(m);
    let (det, grid0) = det_polynomial(m, &p)?;
    // (A⁻¹)_{ji} = adj(P)_{ji}·q_i / det P with P = diag(q)·A.
    let num_degree = (0..n)
        .map(|i| p.total - p.row_deg[i] + p.q[i].degree().unwrap_or(0))
        .max()
        .unwrap_or(0);
    let grid = CircleGrid::new(num_degree.max(p.total) + 1, grid0.radius);
    let samples: Vec<CMatrix> = sample_on_circle(&grid, |z| {
        let a = m.eval_c64(z);
        let inv = a.try_inverse().unwrap_or_else(|| CMatrix::from_element(n, n, C64::new(f64::NAN, 0.0)));
        inv * det.eval_c64(z)
    });
    if samples.iter().any(|s| s.iter().any(|v| !v.is_finite())) {
        return Err(Error::SingularOverFunctionField);
    }
    rational_matrix_from_samples(n, n, &grid, &samples, &det, num_degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::FloatComplex;

    #[test]
    fn interpolation_recovers_coefficients() {
        let p = Polynomial::new(
            [3.0, -2.0, 0.5, 1.0].iter().map(|&v| FloatComplex::from(v)).collect(),
        );
        let grid = CircleGrid::new(6, 2.0);
        let v = sample_on_circle(&grid, |z| p.eval_c64(z));
        let fit: Polynomial<FloatComplex> = fit_polynomial(&grid, &v, 5);
        assert_eq!(fit, p);
    }
}
