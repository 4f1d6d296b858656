//! Seeded random instances shared by the integration tests.
#![allow(dead_code)]

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specred::{ExactRational as Q, FloatComplex, LabeledMatrix, Matrix, Scalar, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rational(rng: &mut ChaCha8Rng) -> Q {
    Q::from_ratio(rng.random_range(-4..=4), rng.random_range(1..=3))
}

/// Dense n×n matrix of small rationals p/q, |p| ≤ 4, q ≤ 3.
pub fn random_exact(rng: &mut ChaCha8Rng, n: usize) -> LabeledMatrix<Q> {
    let data: Vec<Q> = (0..n * n).map(|_| small_rational(rng)).collect();
    LabeledMatrix::unlabeled(Matrix::new(n, n, data).expect("n×n")).expect("square")
}

/// Real symmetric matrix of small rationals.
pub fn random_exact_symmetric(rng: &mut ChaCha8Rng, n: usize) -> LabeledMatrix<Q> {
    let mut data = vec![Q::zero(); n * n];
    for i in 0..n {
        for j in i..n {
            let x = small_rational(rng);
            data[i * n + j] = x.clone();
            data[j * n + i] = x;
        }
    }
    LabeledMatrix::unlabeled(Matrix::new(n, n, data).expect("n×n")).expect("square")
}

/// Complex Hermitian matrix with entries in the unit square; the diagonal of
/// the leading `hollow` vertices is zero.
pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize, hollow: usize) -> LabeledMatrix<FloatComplex> {
    let mut data = vec![FloatComplex::zero(); n * n];
    for i in 0..n {
        for j in i..n {
            let z = if i == j {
                C64::new(if i < hollow { 0.0 } else { rng.random_range(-1.0..1.0) }, 0.0)
            } else {
                C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            };
            data[i * n + j] = FloatComplex(z);
            data[j * n + i] = FloatComplex(z.conj());
        }
    }
    LabeledMatrix::unlabeled(Matrix::new(n, n, data).expect("n×n")).expect("square")
}

/// Simple undirected graph G(n, p) with 0/1 weights.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> LabeledMatrix<Q> {
    let mut data = vec![Q::zero(); n * n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                data[i * n + j] = Q::one();
                data[j * n + i] = Q::one();
            }
        }
    }
    LabeledMatrix::unlabeled(Matrix::new(n, n, data).expect("n×n")).expect("square")
}

/// `k` distinct labels of `a`, in increasing vertex order.
pub fn random_subset<T: Scalar>(rng: &mut ChaCha8Rng, a: &LabeledMatrix<T>, k: usize) -> Vec<String> {
    let mut idx = sample(rng, a.size(), k).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| a.labels()[i].clone()).collect()
}

/// Labels "1".."k".
pub fn leading(k: usize) -> Vec<String> {
    (1..=k).map(|i| i.to_string()).collect()
}
