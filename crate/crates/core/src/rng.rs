//! Seeded randomness shared by every sampling check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed used whenever the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5EED;

pub type CheckRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> CheckRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` points drawn uniformly from the unit cube `[0,1)^dim`.
pub fn unit_cube_points(rng: &mut CheckRng, dim: usize, count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
        .collect()
}
