//! Counter-based random streams.
//!
//! A draw is fully determined by `(seed, stream, position)`: every Monte Carlo
//! trial gets its own ChaCha stream keyed by the trial index, so results do
//! not depend on how trials are split between worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for one trial. Streams with different ids never overlap.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
