//! Bit-flip measurement noise: each measured bit flips independently with
//! probability `p_flip`.

use super::QsimError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent per-bit flip probability applied at measurement, plus the
/// seed of the generator that drives both Born sampling and the flips.
///
/// The generator is ChaCha8: seedable and bit-stable across platforms, so
/// golden experiment outputs are reproducible everywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    p_flip: f64,
    rng_seed: u64,
}

impl NoiseModel {
    pub fn new(p_flip: f64, rng_seed: u64) -> Result<Self, QsimError> {
        if !(0.0..=1.0).contains(&p_flip) {
            return Err(QsimError::BadProbability(p_flip));
        }
        Ok(NoiseModel { p_flip, rng_seed })
    }

    /// Noise-free model; measurement still samples Born probabilities.
    pub fn noiseless(rng_seed: u64) -> Self {
        NoiseModel {
            p_flip: 0.0,
            rng_seed,
        }
    }

    pub fn p_flip(&self) -> f64 {
        self.p_flip
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    /// Fresh generator at the model's seed.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.rng_seed)
    }
}
