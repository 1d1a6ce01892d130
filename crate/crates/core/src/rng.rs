//! The single project PRNG. Every randomized operation takes an explicit
//! seed and derives its stream from here, so results are bit-reproducible.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Name recorded in output metadata.
pub const PRNG_NAME: &str = "chacha8";

pub type ProjectRng = ChaCha8Rng;

pub fn from_seed(seed: u64) -> ProjectRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn split(seed: u64, stream: u64) -> ProjectRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
