//! Seeded random streams.
//!
//! Every stream is a ChaCha8 generator keyed by a 64-bit seed and a stream
//! number. ChaCha output is specified independently of platform and word size,
//! so a `(seed, stream)` pair yields the same sequence everywhere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream used to place targets and robots.
pub const STREAM_SCENARIO: u64 = 0;
/// Stream used by the engine (leader tie-breaks, solver seeds).
pub const STREAM_ENGINE: u64 = 1;
/// Stream used by the harness to derive per-scenario seeds.
pub const STREAM_PLAN: u64 = 2;

pub fn stream(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
