//! Reproducible random streams.
//!
//! Every parallel unit owns a ChaCha8 stream whose seed is derived from the
//! master seed and a path of indices (grid point, batch, ...) by chained
//! SplitMix64 finalisation:
//!
//! ```text
//! seed₀ = master
//! seedᵢ₊₁ = splitmix64(seedᵢ ⊕ splitmix64(indexᵢ + 0x9E3779B97F4A7C15))
//! ```
//!
//! so any unit can be re-run in isolation from `(master, path)` alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(master, |seed, &index| {
        splitmix64(seed ^ splitmix64(index.wrapping_add(0x9E37_79B9_7F4A_7C15)))
    })
}

pub fn stream(master: u64, path: &[u64]) -> Stream {
    Stream::seed_from_u64(derive_seed(master, path))
}
