//! Seeded sample points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One coordinate uniform on `[−2, −0.5] ∪ [0.5, 2]`.
pub fn generic_coordinate(rng: &mut impl Rng) -> f64 {
    let magnitude = rng.random_range(0.5..=2.0);
    if rng.random_bool(0.5) {
        magnitude
    } else {
        -magnitude
    }
}

/// A point with every coordinate bounded away from zero.
pub fn generic_point(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| generic_coordinate(rng)).collect()
}

/// `count` generic points in `R^n`, reproducible from `seed`.
pub fn generic_points(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    (0..count).map(|_| generic_point(&mut r, n)).collect()
}

/// Vector with entries uniform on `[−1, 1]`.
pub fn uniform_vector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect()
}
