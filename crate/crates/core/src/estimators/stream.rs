//! Seeded uniform random streams.
//!
//! Streams are ChaCha8 keystreams: the 64-bit seed is expanded to the
//! 256-bit key by `SeedableRng::seed_from_u64`, and the sub-stream index
//! selects the ChaCha stream id. The same `(seed, index)` pair yields the
//! same draws on every platform, and distinct indices never overlap.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Source of uniform draws in [0, 1).
pub trait UniformSource {
    fn next_uniform(&mut self) -> f64;
}

/// Hands out one independent [`UniformSource`] per stratum index.
pub trait StreamSource: Sync {
    type Stream: UniformSource + Send;

    fn stream(&self, index: u64) -> Self::Stream;

    /// Seed to record in estimates, when there is one.
    fn seed(&self) -> Option<u64> {
        None
    }
}

/// Seeded ChaCha8 stream.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    index: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self::with_index(seed, 0)
    }

    pub fn with_index(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        RandomStream { seed, index, rng }
    }

    /// Independent stream sharing this seed.
    pub fn substream(&self, index: u64) -> Self {
        Self::with_index(self.seed, index)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

impl UniformSource for RandomStream {
    /// Top 53 bits of the next word scaled by 2^-53.
    fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl StreamSource for RandomStream {
    type Stream = RandomStream;

    fn stream(&self, index: u64) -> RandomStream {
        self.substream(index)
    }

    fn seed(&self) -> Option<u64> {
        Some(self.seed)
    }
}

/// Replays a fixed list of draws. Panics when the list runs out.
#[derive(Debug, Clone)]
pub struct ReplayDraws {
    draws: Vec<f64>,
    position: usize,
}

impl ReplayDraws {
    pub fn new(draws: Vec<f64>) -> Self {
        ReplayDraws { draws, position: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.draws.len() - self.position
    }
}

impl UniformSource for ReplayDraws {
    fn next_uniform(&mut self) -> f64 {
        let value = *self
            .draws
            .get(self.position)
            .unwrap_or_else(|| panic!("replay exhausted after {} draws", self.position));
        self.position += 1;
        value
    }
}

/// Per-stratum replay lists; stream `i` replays `streams[i]`.
#[derive(Debug, Clone)]
pub struct ReplaySource {
    pub streams: Vec<Vec<f64>>,
}

impl StreamSource for ReplaySource {
    type Stream = ReplayDraws;

    fn stream(&self, index: u64) -> ReplayDraws {
        ReplayDraws::new(
            self.streams
                .get(index as usize)
                .cloned()
                .unwrap_or_default(),
        )
    }
}

/// Mixes a base seed with a path of indices (splitmix64 finalizer per step).
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    path.iter().fold(mix(base), |acc, &i| mix(acc ^ mix(i)))
}
