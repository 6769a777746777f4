//! Seeded Monte Carlo averages over uniformly distributed directions.
//!
//! Sample `i` always consumes the same slice of a ChaCha8 keystream
//! (word position `4 i`), so any contiguous block of samples can be drawn
//! independently. Samples are accumulated in fixed-size blocks that are
//! merged in block order; a run split across shards therefore reproduces the
//! single-shard mean bit for bit.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{CbsError, Result};
use crate::polarization::Direction;

/// Samples per accumulation block.
pub const BLOCK_LEN: usize = 4096;

/// Lower bound on the sample count of a sphere average.
pub const MIN_SAMPLES: usize = 100;

const WORDS_PER_SAMPLE: u128 = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// Whether `value` lies within `k` standard errors of the mean.
    pub fn within_sigma(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.std_error
    }
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlockStats {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl BlockStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(self, other: Self) -> Self {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let n = self.count + other.count;
        let d = other.mean - self.mean;
        let (na, nb) = (self.count as f64, other.count as f64);
        Self {
            count: n,
            mean: self.mean + d * nb / n as f64,
            m2: self.m2 + other.m2 + d * d * na * nb / n as f64,
        }
    }
}

/// Maps two uniforms in `[0, 1)` to a direction: inverse CDF on `cos(theta)`,
/// uniform azimuth.
pub fn direction_from_uniforms(u1: f64, u2: f64) -> Direction {
    let cos_t = 1.0 - 2.0 * u1;
    let sin_t = libm::sqrt((1.0 - cos_t * cos_t).max(0.0));
    let phi = 2.0 * PI * u2;
    Direction::from_components_unchecked([sin_t * libm::cos(phi), sin_t * libm::sin(phi), cos_t])
}

fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn block_count(samples: usize) -> usize {
    samples.div_ceil(BLOCK_LEN)
}

/// Accumulates block `block` of a `samples`-long run.
pub fn sphere_block<F: Fn(&Direction) -> f64>(f: &F, seed: u64, block: usize, samples: usize) -> BlockStats {
    let start = block * BLOCK_LEN;
    let end = (start + BLOCK_LEN).min(samples);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(start as u128 * WORDS_PER_SAMPLE);
    let mut stats = BlockStats::default();
    for _ in start..end {
        let u1 = unit_f64(&mut rng);
        let u2 = unit_f64(&mut rng);
        stats.push(f(&direction_from_uniforms(u1, u2)));
    }
    stats
}

/// Folds per-block statistics, in block order, into an estimate.
pub fn combine_blocks<I: IntoIterator<Item = BlockStats>>(blocks: I, seed: u64) -> McEstimate {
    let stats = blocks.into_iter().fold(BlockStats::default(), BlockStats::merge);
    let n = stats.count as f64;
    let std_error = if stats.count > 1 {
        libm::sqrt(stats.m2 / (n - 1.0)) / libm::sqrt(n)
    } else {
        0.0
    };
    McEstimate {
        mean: stats.mean,
        std_error,
        samples: stats.count as usize,
        seed,
    }
}

/// Monte Carlo mean of `f` over uniformly distributed unit directions.
pub fn sphere_average<F: Fn(&Direction) -> f64>(f: F, samples: usize, seed: u64) -> Result<McEstimate> {
    if samples < MIN_SAMPLES {
        return Err(CbsError::TooFewSamples {
            samples,
            min: MIN_SAMPLES,
        });
    }
    let blocks: Vec<BlockStats> = (0..block_count(samples))
        .map(|b| sphere_block(&f, seed, b, samples))
        .collect();
    Ok(combine_blocks(blocks, seed))
}
