//! Fixtures shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringmaj::Configuration;

/// Uniformly random rings of size `n`, reproducible from `seed`.
pub fn random_rings(n: usize, count: usize, seed: u64) -> Vec<Configuration> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Configuration::from_fn(n, |_| rng.gen_range(0..=1)))
        .collect()
}
