//! Counter-based random streams.
//!
//! Every replication owns a ChaCha8 substream selected by the replication
//! index, keyed by the global seed. The draw index is the 64-bit word
//! position within that substream, so a stream can be reconstructed at any
//! point without replaying earlier draws and results never depend on which
//! worker ran which replication.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// 2^-53
const UNIT: f64 = 1.0 / (1u64 << 53) as f64;

/// A deterministic substream identified by `(seed, replication)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    inner: ChaCha8Rng,
    seed: u64,
    replication: u64,
}

impl RngStream {
    pub fn new(seed: u64, replication: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(replication);
        Self {
            inner,
            seed,
            replication,
        }
    }

    /// Stream positioned so that the next draw is `draw_index`.
    pub fn at(seed: u64, replication: u64, draw_index: u64) -> Self {
        let mut s = Self::new(seed, replication);
        s.inner.set_word_pos(2 * u128::from(draw_index));
        s
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn replication(&self) -> u64 {
        self.replication
    }

    /// Number of 64-bit draws consumed so far.
    pub fn draw_index(&self) -> u64 {
        (self.inner.get_word_pos() / 2) as u64
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on the open interval (0, 1).
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        ((self.inner.next_u64() >> 11) as f64 + 0.5) * UNIT
    }
}
