//! Counter-based random streams.
//!
//! Every consumer of randomness (pixel noise, embedding decisions, per-trial
//! seeds) draws from a ChaCha8 stream selected by `(seed, domain, index)`, so
//! the values seen at index `n` never depend on how many other indices were
//! processed before it or on which thread processed them.

use rand::SeedableRng;
use rand::RngCore;
use rand_chacha::ChaCha8Rng;

/// Separates the uses of a single master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Domain {
    Embedding = 1,
    Noise = 2,
    Scene = 3,
    Trial = 4,
}

const INDEX_BITS: u32 = 56;

#[derive(Clone)]
pub struct StreamFamily {
    base: ChaCha8Rng,
    domain: Domain,
}

impl StreamFamily {
    pub fn new(seed: u64, domain: Domain) -> Self {
        Self {
            base: ChaCha8Rng::seed_from_u64(seed),
            domain,
        }
    }

    /// Independent generator for item `index` (< 2^56).
    #[inline]
    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        debug_assert!(index < 1 << INDEX_BITS);
        let mut rng = self.base.clone();
        rng.set_stream((u64::from(self.domain as u8) << INDEX_BITS) | index);
        rng
    }
}

/// Seed for item `index` (< 2^40) of sub-experiment `label` under a master seed.
pub fn derive_seed(master: u64, label: u16, index: u64) -> u64 {
    debug_assert!(index < 1 << 40);
    StreamFamily::new(master, Domain::Trial)
        .stream((u64::from(label) << 40) | index)
        .next_u64()
}
