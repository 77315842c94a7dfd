//! Seeding helpers. Every source of randomness in the library is a
//! [`ChaCha8Rng`] derived from a user-supplied 64-bit seed, so runs are
//! reproducible bit-for-bit regardless of thread scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Mix a base seed with a stream counter (splitmix64 finalizer).
///
/// Used to hand independent streams to replicates and helper passes without
/// correlated low bits.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut x = base ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// RNG for a derived stream.
pub fn rng_for(base: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(base, stream))
}

/// RNG seeded directly (chain seeds are `seed + chain_index`).
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
