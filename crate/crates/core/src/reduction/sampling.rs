//! The sampled-equality protocol used by every float identity check: real
//! points drawn from [-20, 20] away from the poles, compared entrywise with a
//! relative tolerance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::linalg::{relative_gap, CMatrix};
use crate::ratfun::C64;
use crate::tolerance::float_delta;

pub const SAMPLE_COUNT: usize = 20;
pub const SAMPLE_RANGE: f64 = 20.0;
pub const SAMPLE_TOL: f64 = 1e-9;
const SAMPLE_SEED: u64 = 0x5eed_1a3b_0c7e_2d91;

/// `count` reproducible real points in [-20, 20] outside δ-neighborhoods of `poles`.
pub fn sample_points(poles: &[C64], count: usize) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let delta = float_delta();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = C64::new(rng.random_range(-SAMPLE_RANGE..=SAMPLE_RANGE), 0.0);
        if poles.iter().all(|p| (x - p).norm() > delta * 1f64.max(p.norm())) {
            out.push(x);
        }
    }
    out
}

/// Largest relative entrywise gap between `f` and `g` over the sample points.
pub fn sampled_gap(
    poles: &[C64],
    count: usize,
    f: impl Fn(C64) -> Result<CMatrix>,
    g: impl Fn(C64) -> Result<CMatrix>,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for z in sample_points(poles, count) {
        worst = worst.max(relative_gap(&f(z)?, &g(z)?));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_are_reproducible_and_avoid_poles() {
        let poles = [C64::new(0.5, 0.0)];
        let a = sample_points(&poles, SAMPLE_COUNT);
        assert_eq!(a, sample_points(&poles, SAMPLE_COUNT));
        assert!(a.iter().all(|z| z.re.abs() <= SAMPLE_RANGE && (z - poles[0]).norm() > 1e-6));
    }
}
