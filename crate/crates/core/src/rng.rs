//! Seeded randomness.
//!
//! Every random choice in the crate is drawn from a ChaCha8 stream keyed by a
//! single `u64` seed. Independent components use distinct stream numbers of the
//! same key, so adding draws in one component never shifts another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream numbers used by the library. Values are part of the output contract.
pub mod streams {
    pub const PATHFINDER: u64 = 1;
    pub const EXTENDER: u64 = 2;
    pub const GREEDY: u64 = 3;
    pub const RESERVE: u64 = 4;
    pub const VORTEX: u64 = 5;
    pub const COVER_DOWN: u64 = 6;
    pub const GADGETS: u64 = 7;
    pub const EULER: u64 = 8;
    pub const GENERATE: u64 = 9;
    pub const PIPELINE: u64 = 10;
}

/// The generator for `stream` under `seed`.
pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives a child seed, used when one component seeds many sub-runs.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
