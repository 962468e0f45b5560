//! Seeded, reproducible random-number generation.
//!
//! Every simulation in this crate uses a ChaCha8 stream seeded from a
//! caller-supplied `u64`. Long runs are split into fixed-size chunks; chunk
//! `i` uses the derived seed `derive_seed(master, i)`. Because the chunk
//! size is a constant, results depend only on the master seed, never on the
//! number of worker threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Generator identity recorded in report headers.
pub const RNG_NAME: &str = "chacha8";

/// Trials per chunk for parallel accumulation.
pub const CHUNK_SIZE: u64 = 1 << 16;

/// SplitMix64 finalizer, used as a stable mixing function for seed streams.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sub-seed for chunk or sub-run `index` of a run seeded with `master`.
///
/// Defined as `splitmix64(master XOR splitmix64(index))` so that distinct
/// indices give decorrelated streams while staying reproducible.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

/// Fresh generator for a seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Run `n` trials in fixed-size chunks and merge the per-chunk accumulators.
///
/// `body` receives the chunk's generator and the number of trials in the
/// chunk. Chunks execute in parallel under the ambient rayon pool, but are
/// merged in chunk order, so the result is a pure function of `(seed, n)`.
pub fn run_chunked<A, F>(n: u64, seed: u64, body: F, merge: impl Fn(A, A) -> A) -> A
where
    A: Send + Default,
    F: Fn(&mut ChaCha8Rng, u64) -> A + Sync,
{
    let n_chunks = n.div_ceil(CHUNK_SIZE).max(1);
    let chunks: Vec<A> = (0..n_chunks)
        .into_par_iter()
        .map(|i| {
            let lo = i * CHUNK_SIZE;
            let len = CHUNK_SIZE.min(n - lo);
            let mut rng = rng_from_seed(derive_seed(seed, i));
            body(&mut rng, len)
        })
        .collect();
    chunks.into_iter().fold(A::default(), merge)
}
