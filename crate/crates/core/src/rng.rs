//! Deterministic random streams.
//!
//! Every stream is a ChaCha20 generator (`rand_chacha`). The 256-bit key is
//! expanded from the 64-bit experiment seed with `SeedableRng::seed_from_u64`
//! (PCG32 expansion, part of `rand_core`'s portability guarantee), and the
//! ChaCha stream id selects the substream. Uniform reals take the top 53 bits
//! of one `u64` output: `(x >> 11) * 2^-53`, which lies in `[0, 1)`.
//!
//! Substream ids: 0 = observations, 1 = tie-breaking draws, 2 and up reserved.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

/// Substream carrying the binary observations.
pub const OBSERVATIONS: u64 = 0;
/// Substream carrying the tie-breaking uniforms of the smoothed p-values.
pub const TIE_BREAKING: u64 = 1;

/// A seeded uniform generator bound to one substream.
#[derive(Debug, Clone)]
pub struct Stream {
    inner: ChaCha20Rng,
}

impl Stream {
    pub fn new(seed: u64, substream: u64) -> Self {
        let mut inner = ChaCha20Rng::seed_from_u64(seed);
        inner.set_stream(substream);
        Self { inner }
    }

    /// Uniform draw from `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Bernoulli draw with success probability `p` (`p = 1` always succeeds).
    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> u8 {
        u8::from(self.uniform() < p)
    }
}

/// Derives the seed of replication `index` from a master seed (SplitMix64 finalizer).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
