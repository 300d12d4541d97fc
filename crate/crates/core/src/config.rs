use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Knobs shared by every sampled or size-bounded computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Config {
    /// Number of pseudo-random samples drawn by sampled verifications.
    pub samples: usize,
    pub seed: u64,
    /// Largest carrier that is enumerated explicitly.
    pub cap: usize,
    /// Number of rational levels in the nonstandard-reals surrogate.
    pub surrogate_depth: usize,
}

impl Default for Config {
    fn default() -> Config {
        Config { samples: 1000, seed: 1, cap: 64, surrogate_depth: 2 }
    }
}

impl Config {
    /// ChaCha8 keyed by `seed`, on a separate stream per call site so that
    /// independent sweeps never share draws.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

pub type Rng = ChaCha8Rng;
