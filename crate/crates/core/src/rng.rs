//! Counter-based substream derivation.
//!
//! A [`StreamKey`] is a 64-bit key derived from the user seed by a path of
//! indices (`seed -> config -> replicate -> purpose`). Each key expands into
//! an independent ChaCha8 generator, so a unit of work always sees the same
//! random numbers no matter which thread runs it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StreamKey(u64);

impl StreamKey {
    pub fn root(seed: u64) -> Self {
        StreamKey(splitmix64(seed ^ 0x005e_ed0f_0dd5))
    }

    /// Derives the key of the `index`-th child substream.
    pub fn child(self, index: u64) -> Self {
        StreamKey(splitmix64(self.0.rotate_left(17) ^ splitmix64(index.wrapping_add(1))))
    }

    pub fn rng(self) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        let mut state = self.0;
        for chunk in seed.chunks_exact_mut(8) {
            state = splitmix64(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        ChaCha8Rng::from_seed(seed)
    }
}
