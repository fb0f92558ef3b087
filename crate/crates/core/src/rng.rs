//! Seeded random-number streams.
//!
//! All Monte Carlo entry points in the crate are deterministic functions
//! of `(seed, stream)`. The splitting rule is: stream `k` of seed `s` is
//! `ChaCha12Rng::seed_from_u64(s)` with its stream counter set to `k`.
//! Parallel partitioning of a sample budget must assign disjoint stream
//! indices, never offsets into a shared stream.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// RNG for stream `stream` of `seed` per the crate's splitting rule.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
