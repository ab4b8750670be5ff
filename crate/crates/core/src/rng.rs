//! Seeded randomness.
//!
//! Every random consumer derives its generator from one user seed and a
//! stream number: `ChaCha8Rng::seed_from_u64(seed)` with `set_stream(stream)`.
//! Stream `k` belongs to the `k`-th independent unit of work (sample `k`,
//! optimizer restart `k`, Monte Carlo batch `k`), so results do not depend
//! on how the work is scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
