//! Deterministic seed derivation.
//!
//! Every random stream in the crate is addressed by a path of integers
//! below a base seed, e.g. `(master, cell, replication, stage)`. The path is
//! folded through SplitMix64 so that sibling streams are decorrelated and a
//! stream can be re-created in isolation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `base` and an index path.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(base), |acc, &k| splitmix64(acc ^ splitmix64(k)))
}

/// The generator used for every random stream.
pub type StreamRng = ChaCha8Rng;

pub fn stream(base: u64, path: &[u64]) -> StreamRng {
    ChaCha8Rng::seed_from_u64(derive_seed(base, path))
}
