use rand::distributions::{Distribution, WeightedError, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Deterministic random source. Identical seed, stream and call sequence give
/// identical draws.
#[derive(Debug, Clone)]
pub struct SeededSampler {
    seed: u64,
    stream: u64,
    draws: u64,
    rng: ChaCha8Rng,
}

impl SeededSampler {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Independent sub-stream of the same seed, for per-worker sampling.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self {
            seed,
            stream,
            draws: 0,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Number of draws taken so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.draws += 1;
        self.rng.gen()
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        use rand::seq::SliceRandom;
        self.draws += 1;
        items.shuffle(&mut self.rng);
    }

    fn rng(&mut self) -> &mut ChaCha8Rng {
        self.draws += 1;
        &mut self.rng
    }
}

fn map_weighted_error(e: WeightedError) -> Error {
    match e {
        WeightedError::AllWeightsZero | WeightedError::NoItem => Error::DegenerateDistribution,
        _ => Error::InvalidWeight,
    }
}

/// Index `i` drawn with probability `weights[i] / Σ weights`.
pub fn born_sample(weights: &[f64], sampler: &mut SeededSampler) -> Result<usize> {
    Ok(BornDistribution::new(weights)?.sample(sampler))
}

/// Prepared categorical distribution for repeated draws.
#[derive(Debug, Clone)]
pub struct BornDistribution {
    index: WeightedIndex<f64>,
}

impl BornDistribution {
    pub fn new(weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidWeight);
        }
        let index = WeightedIndex::new(weights).map_err(map_weighted_error)?;
        Ok(Self { index })
    }

    pub fn sample(&self, sampler: &mut SeededSampler) -> usize {
        self.index.sample(sampler.rng())
    }
}
