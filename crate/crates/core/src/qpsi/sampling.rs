use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{ExperimentConfig, ShotCounts};
use crate::error::Result;
use crate::interferometer::PreparedInput;

/// Shots drawn sequentially from one seek of the stream.
const CHUNK: u64 = 1 << 13;

fn to_unit_open(bits: u64) -> f64 {
    // 52 random bits, centred in their cell: never exactly 0 or 1
    ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

/// The uniform variate used for shot `index` under `seed`.
///
/// Shot `i` reads 64-bit word `i` of the ChaCha8 stream keyed by `seed`, so
/// every shot is addressable independently of how the record is split.
pub fn shot_uniform(seed: u64, index: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(2 * u128::from(index));
    to_unit_open(rng.next_u64())
}

fn sample_index(cumulative: &[f64], u: f64) -> usize {
    cumulative
        .iter()
        .position(|&c| u < c)
        .unwrap_or(cumulative.len() - 1)
}

/// Draws `n_shots` independent interferometer outcomes at `phi_true`.
///
/// Deterministic in `config`; chunks of the record are sampled in parallel
/// and the counts are identical to a sequential run.
pub fn simulate_shots(config: &ExperimentConfig) -> Result<ShotCounts> {
    config.validate()?;
    let prepared = PreparedInput::new(&config.state)?;
    let probs = prepared.probabilities(config.phi_true);
    let total: f64 = probs.iter().map(|p| p.max(0.0)).sum();
    let mut acc = 0.0;
    let cumulative: Vec<f64> = probs
        .iter()
        .map(|p| {
            acc += p.max(0.0) / total;
            acc
        })
        .collect();

    let outcomes = prepared.outcomes();
    let n_chunks = config.n_shots.div_ceil(CHUNK);
    let tallies = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * CHUNK;
            let end = (start + CHUNK).min(config.n_shots);
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_word_pos(2 * u128::from(start));
            let mut tally = vec![0u64; outcomes.len()];
            for _ in start..end {
                tally[sample_index(&cumulative, to_unit_open(rng.next_u64()))] += 1;
            }
            tally
        })
        .reduce(
            || vec![0u64; outcomes.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    Ok(ShotCounts::from_counts(outcomes.iter().copied().zip(tallies).collect()))
}
