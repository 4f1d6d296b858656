//! Seeded instances shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specred::{ExactRational as Q, FloatComplex, LabeledMatrix, Matrix, Scalar, C64};

/// Dense n×n matrix of rationals p/q with |p| ≤ 4, q ≤ 3.
pub fn exact_matrix(seed: u64, n: usize) -> LabeledMatrix<Q> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..n * n).map(|_| Q::from_ratio(rng.random_range(-4..=4), rng.random_range(1..=3))).collect();
    LabeledMatrix::unlabeled(Matrix::new(n, n, data).expect("n×n")).expect("square")
}

/// Complex Hermitian n×n matrix with entries in the unit square and a zero
/// diagonal on the first `hollow` vertices.
pub fn hermitian_matrix(seed: u64, n: usize, hollow: usize) -> LabeledMatrix<FloatComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = vec![FloatComplex::zero(); n * n];
    for i in 0..n {
        for j in i..n {
            let im = if i == j { 0.0 } else { rng.random_range(-1.0..1.0) };
            let re = if i == j && i < hollow { 0.0 } else { rng.random_range(-1.0..1.0) };
            let z = C64::new(re, im);
            data[i * n + j] = FloatComplex(z);
            data[j * n + i] = FloatComplex(z.conj());
        }
    }
    LabeledMatrix::unlabeled(Matrix::new(n, n, data).expect("n×n")).expect("square")
}

/// Labels "1".."k".
pub fn leading(k: usize) -> Vec<String> {
    (1..=k).map(|i| i.to_string()).collect()
}
