//! Sphere averages split across threads.
//!
//! Samples are grouped in fixed blocks and the block statistics are merged in
//! block order, so the estimate does not depend on the number of shards.

use std::thread;

use cbs_core::numerics::montecarlo::{block_count, combine_blocks, sphere_block, BlockStats, MIN_SAMPLES};
use cbs_core::numerics::McEstimate;
use cbs_core::{CbsError, Direction};

/// Worker count used when the caller does not pin one.
pub fn default_shards() -> usize {
    thread::available_parallelism().map_or(1, |n| n.get()).min(8)
}

pub fn sphere_average_sharded<F>(f: F, samples: usize, seed: u64, shards: usize) -> Result<McEstimate, CbsError>
where
    F: Fn(&Direction) -> f64 + Sync,
{
    if samples < MIN_SAMPLES {
        return Err(CbsError::TooFewSamples {
            samples,
            min: MIN_SAMPLES,
        });
    }
    let blocks = block_count(samples);
    let shards = shards.clamp(1, blocks);
    let per_shard = blocks.div_ceil(shards);
    let f = &f;
    let parts: Vec<Vec<BlockStats>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..shards)
            .map(|k| {
                let range = (k * per_shard)..((k + 1) * per_shard).min(blocks);
                scope.spawn(move || range.map(|b| sphere_block(f, seed, b, samples)).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("shard panicked")).collect()
    });
    Ok(combine_blocks(parts.into_iter().flatten(), seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use cbs_core::numerics::sphere_average;

    #[test]
    fn shard_count_does_not_change_bits() {
        let f = |n: &Direction| (3.0 * n.components()[1]).cos();
        let serial = sphere_average(f, 50_001, 5).unwrap();
        for shards in [1, 2, 8, 64] {
            let est = sphere_average_sharded(f, 50_001, 5, shards).unwrap();
            assert_eq!(est.mean.to_bits(), serial.mean.to_bits());
            assert_eq!(est.std_error.to_bits(), serial.std_error.to_bits());
            assert_eq!(est.samples, 50_001);
        }
    }

    #[test]
    fn rejects_tiny_runs() {
        assert!(sphere_average_sharded(|_| 1.0, 10, 0, 4).is_err());
    }
}
