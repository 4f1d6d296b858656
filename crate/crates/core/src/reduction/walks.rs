use super::core::reduce;
use super::LabeledMatrix;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ratfun::Scalar;

/// Largest number of walks the brute-force enumerator agrees to visit.
pub const BRUTE_FORCE_LIMIT: f64 = 5e7;

/// Truncated matrix power series Σ wₗ tˡ, ℓ = 0..=L, indexed by a subset.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkSeries<T: Scalar> {
    pub subset: Vec<String>,
    pub coefficients: Vec<Matrix<T>>,
}

impl<T: Scalar> WalkSeries<T> {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Coefficients of (I - W(t))⁻¹ through the same order; requires w₀ = 0.
    pub fn geometric_inverse(&self) -> Vec<Matrix<T>> {
        let s = self.subset.len();
        let mut out: Vec<Matrix<T>> = vec![Matrix::identity(s)];
        for l in 1..self.coefficients.len() {
            let mut acc = Matrix::zeros(s, s);
            for j in 1..=l {
                acc = acc.add(&self.coefficients[j].mul(&out[l - j]).expect("square")).expect("square");
            }
            out.push(acc);
        }
        out
    }
}

fn labels<S: AsRef<str>>(subset: &[S]) -> Vec<String> {
    subset.iter().map(|s| s.as_ref().to_string()).collect()
}

/// wₗ = (Aˡ)_{S,S}.
pub fn walk_series_returning<T: Scalar, S: AsRef<str>>(a: &LabeledMatrix<T>, subset: &[S], max_len: usize) -> Result<WalkSeries<T>> {
    let idx = a.resolve(subset)?;
    let mut power = Matrix::identity(a.size());
    let mut coefficients = Vec::with_capacity(max_len + 1);
    for l in 0..=max_len {
        coefficients.push(power.submatrix(&idx, &idx));
        if l < max_len {
            power = power.mul(a.matrix())?;
        }
    }
    Ok(WalkSeries { subset: labels(subset), coefficients })
}

/// S-non-returning walk counts read off the expansion of R(λ, S, A) at infinity.
///
/// R(λ) = λ·W*(1/λ), so w*ₗ is the coefficient of λ^{-(ℓ-1)}; in particular
/// w*₁ = A_{S,S} and w*₀ = 0.
pub fn walk_series_nonreturning<T: Scalar, S: AsRef<str>>(a: &LabeledMatrix<T>, subset: &[S], max_len: usize) -> Result<WalkSeries<T>> {
    let r = reduce(a, subset)?;
    let s = r.rows();
    let mut coefficients = vec![Matrix::zeros(s, s); max_len + 1];
    if max_len > 0 {
        for i in 0..s {
            for j in 0..s {
                let e = r[(i, j)].expand_at_infinity(max_len - 1)?;
                for (k, c) in e.into_iter().enumerate() {
                    coefficients[k + 1][(i, j)] = c;
                }
            }
        }
    }
    Ok(WalkSeries { subset: labels(subset), coefficients })
}

fn integer_weights<T: Scalar>(m: &Matrix<T>) -> Result<Vec<Vec<(usize, i64)>>> {
    let n = m.rows();
    let mut adj = vec![Vec::new(); n];
    for (i, row) in adj.iter_mut().enumerate() {
        for j in 0..n {
            let x = &m[(i, j)];
            if x.is_zero() {
                continue;
            }
            let z = x.to_c64();
            let k = z.re.round() as i64;
            if z.im != 0.0 || *x != T::from_i64(k) {
                return Err(Error::DimensionMismatch(format!(
                    "brute-force walk counting needs integer weights, found {x}"
                )));
            }
            row.push((j, k));
        }
    }
    Ok(adj)
}

/// Explicit walk enumeration, used as an independent oracle.
///
/// With `non_returning`, only walks whose interior vertices avoid S are
/// counted. Weighted entries contribute the product of their weights.
pub fn walk_series_brute<T: Scalar, S: AsRef<str>>(
    a: &LabeledMatrix<T>,
    subset: &[S],
    max_len: usize,
    non_returning: bool,
) -> Result<WalkSeries<T>> {
    let idx = a.resolve(subset)?;
    let adj = integer_weights(a.matrix())?;
    let max_deg = adj.iter().map(Vec::len).max().unwrap_or(0) as f64;
    let estimate = idx.len() as f64 * (0..=max_len as i32).map(|l| max_deg.powi(l)).sum::<f64>();
    if estimate > BRUTE_FORCE_LIMIT {
        return Err(Error::BruteForceTooLarge { estimate, limit: BRUTE_FORCE_LIMIT });
    }
    let s = idx.len();
    let mut counts = vec![vec![0i64; s * s]; max_len + 1];
    let pos: Vec<Option<usize>> = (0..a.size()).map(|v| idx.iter().position(|&x| x == v)).collect();

    struct Walker<'a> {
        adj: &'a [Vec<(usize, i64)>],
        pos: &'a [Option<usize>],
        counts: &'a mut [Vec<i64>],
        max_len: usize,
        non_returning: bool,
        s: usize,
    }
    impl Walker<'_> {
        fn go(&mut self, start: usize, v: usize, len: usize, weight: i64) {
            if let Some(p) = self.pos[v] {
                if len > 0 || !self.non_returning {
                    self.counts[len][start * self.s + p] += weight;
                }
                if self.non_returning && len > 0 {
                    return;
                }
            }
            if len == self.max_len {
                return;
            }
            for &(w, x) in &self.adj[v] {
                self.go(start, w, len + 1, weight * x);
            }
        }
    }

    let mut walker = Walker { adj: &adj, pos: &pos, counts: &mut counts, max_len, non_returning, s };
    for (p, &v) in idx.iter().enumerate() {
        walker.go(p, v, 0, 1);
    }
    let coefficients = counts
        .into_iter()
        .map(|c| Matrix::new(s, s, c.into_iter().map(T::from_i64).collect()).expect("s x s"))
        .collect();
    Ok(WalkSeries { subset: labels(subset), coefficients })
}

/// W_S(t) = (I - W*_S(t))⁻¹ through order L, compared coefficientwise.
pub fn walk_identity_check<T: Scalar, S: AsRef<str>>(a: &LabeledMatrix<T>, subset: &[S], max_len: usize) -> Result<bool> {
    let w = walk_series_returning(a, subset, max_len)?;
    let star = walk_series_nonreturning(a, subset, max_len)?;
    Ok(star.geometric_inverse() == w.coefficients)
}
