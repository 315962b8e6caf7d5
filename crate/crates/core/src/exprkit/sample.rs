use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ast::Point;

/// `count` points drawn uniformly from the box `[lo, hi]` per coordinate, reproducible from `seed`.
pub fn sample_points(seed: u64, count: usize, lo: [f64; 4], hi: [f64; 4]) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| Point(std::array::from_fn(|i| rng.random_range(lo[i]..=hi[i])))).collect()
}

/// Points in the default box `[0.5, 1.5]⁴`.
pub fn sample_unit_box(seed: u64, count: usize) -> Vec<Point> {
    sample_points(seed, count, [0.5; 4], [1.5; 4])
}
