//! Reproducible random substreams.
//!
//! Every stochastic routine draws from a ChaCha8 stream selected by
//! `(seed, purpose, index)`. ChaCha is counter-based, so a stream can be
//! opened for any game or split without generating its predecessors, and a
//! simulated corpus is identical regardless of how games are distributed
//! over worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream namespaces, so that e.g. game 3 of a simulation and split 3 of an
/// evaluation never share a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Simulate = 1,
    League = 2,
    NullBalance = 3,
    Split = 4,
    Skills = 5,
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn substream(seed: u64, purpose: Purpose, index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed ^ mix(purpose as u64)));
    rng.set_stream(index);
    rng
}
