//! Seed plumbing. Every random choice in the toolkit flows from a single
//! master seed through the helpers below, so a run is a pure function of its
//! configuration.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Returns the RNG for an independent substream of `seed`.
///
/// Retry loops (connectivity regeneration, clustering restarts) index their
/// attempts by `stream` so that attempt k is reproducible in isolation.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives a child seed from a master seed and a purpose tag (splitmix64).
pub fn derive_seed(master: u64, tag: u64) -> u64 {
    let mut z = master ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
