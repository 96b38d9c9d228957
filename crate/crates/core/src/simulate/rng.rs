//! Seeded random streams.
//!
//! Every (dataset, qubit) pair draws from its own ChaCha8 stream, so output
//! does not depend on how work is split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream id reserved for impact-event sampling within a dataset.
pub const EVENT_STREAM: u64 = u64::MAX;

/// SplitMix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of dataset `index` within a campaign.
pub fn dataset_seed(master_seed: u64, index: u64) -> u64 {
    mix(mix(master_seed) ^ mix(index.wrapping_add(0x5151_5151)))
}

pub fn stream(seed: u64, stream_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}
