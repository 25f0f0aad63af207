//! Reproducible random streams.
//!
//! Every random quantity in the crate is drawn from a [`StreamRng`]: ChaCha8,
//! a counter-based generator, keyed by a 64-bit stream seed. Independent
//! streams (one per Monte Carlo replication, bootstrap replicate, or cell)
//! are derived with [`mix`]:
//!
//! ```text
//! mix(seed, r) = splitmix64_finalize(seed + (r + 1) * 0x9E3779B97F4A7C15)   (wrapping)
//! key(seed)    = le_bytes(w0) || le_bytes(w1) || le_bytes(w2) || le_bytes(w3)
//!                where w_m is the m-th output of SplitMix64 started at `seed`
//! ```
//!
//! Uniform doubles are `(next_u64() >> 11) * 2^-53`, so every draw is pinned
//! independently of the `rand` version.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
#[inline]
pub fn splitmix64_finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of stream `r` from a parent seed.
#[inline]
pub fn mix(seed: u64, r: u64) -> u64 {
    splitmix64_finalize(seed.wrapping_add(r.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// ChaCha8 stream keyed from a 64-bit seed.
#[derive(Clone, Debug)]
pub struct StreamRng {
    inner: ChaCha8Rng,
}

impl StreamRng {
    pub fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        let mut state = seed;
        for chunk in key.chunks_exact_mut(8) {
            state = state.wrapping_add(GOLDEN_GAMMA);
            chunk.copy_from_slice(&splitmix64_finalize(state).to_le_bytes());
        }
        StreamRng {
            inner: ChaCha8Rng::from_seed(key),
        }
    }

    /// Stream `r` of the family rooted at `seed`.
    pub fn stream(seed: u64, r: u64) -> Self {
        Self::new(mix(seed, r))
    }

    /// Uniform on [0, 1).
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform index in `0..n` (multiply-shift; `n` must be positive).
    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.inner.next_u64() as u128 * n as u128) >> 64) as usize
    }
}

impl RngCore for StreamRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
