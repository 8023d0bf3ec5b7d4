//! Seeded generators. Instances and algorithms draw from separate streams of
//! the same seed so that changing an algorithm never perturbs its instance.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn instance_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn algorithm_rng(seed: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(1);
    r
}
