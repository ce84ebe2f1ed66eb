//! Seeded random streams.
//!
//! Every random quantity in the crate is drawn from a [`ChaCha8Rng`] keyed by
//! a 64-bit seed and a text label. ChaCha is counter based: a (key, stream)
//! pair fixes an infinite keystream, and words are addressed by position, so
//! a stream never depends on how many other streams were consumed before it.
//!
//! Parallel trials never share a generator. Trial `i` of an experiment with
//! seed `s` uses `child_seed(s, label, i)`, which makes results independent of
//! worker count and completion order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Name and version of the generator construction. Changing the key
/// expansion, the label hash or the child derivation must bump this.
pub const GENERATOR: &str = "chacha8-splitmix64-fnv1a/v1";

pub type StreamRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Opens the stream named `label` under `seed`.
pub fn stream(seed: u64, label: &str) -> StreamRng {
    let mut key = [0u8; 32];
    let mut state = seed;
    for chunk in key.chunks_exact_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(fnv1a(label));
    rng
}

/// Seed for the `index`-th child of `parent` under `label`.
pub fn child_seed(parent: u64, label: &str, index: u64) -> u64 {
    splitmix64(splitmix64(parent ^ fnv1a(label)).wrapping_add(index))
}
