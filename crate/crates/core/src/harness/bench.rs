//! Stepping-throughput benchmark.
//!
//! The work is a fixed set of lanes, each an independent environment driven
//! by its own seeded random actions. Lanes are dealt to threads, so the
//! combined checksum does not depend on the thread count.

use std::hash::Hasher;
use std::time::Instant;

use fnv::FnvHasher;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::board::Action;
use crate::config::EpisodeConfig;
use crate::engine::WorldState;
use crate::error::{Error, Result};

/// Independent environments per benchmark run.
pub const BENCH_LANES: usize = 64;
/// RNG stream for benchmark actions.
const ACTION_STREAM: u64 = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub steps: u64,
    pub threads: usize,
    pub render: bool,
    pub episodes: u64,
    pub elapsed_secs: f64,
    pub steps_per_sec: f64,
    /// Digest of every step outcome, combined in lane order.
    pub checksum: u64,
}

struct LaneResult {
    steps: u64,
    episodes: u64,
    checksum: u64,
}

fn lane_seed(base: u64, lane: usize, episode: u64) -> u64 {
    base.wrapping_add((lane as u64) << 32).wrapping_add(episode)
}

fn run_lane(config: &EpisodeConfig, lane: usize, steps: u64, render: bool) -> Result<LaneResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(lane_seed(config.seed, lane, 0));
    rng.set_stream(ACTION_STREAM);
    let n_actions = config.num_actions();
    let mut hasher = FnvHasher::default();
    let mut episodes = 0u64;
    let mut state =
        WorldState::reset_with(&config.with_seed(lane_seed(config.seed, lane, 0)), render)?.0;
    for _ in 0..steps {
        if state.is_done() {
            episodes += 1;
            state = WorldState::reset_with(
                &config.with_seed(lane_seed(config.seed, lane, episodes)),
                render,
            )?
            .0;
        }
        let action =
            Action::from_index(rng.gen_range(0..n_actions) as u8).expect("action index in range");
        let outcome = state.step(action)?;
        hasher.write_u32(outcome.reward.to_bits());
        hasher.write_usize(outcome.events.len());
        if let Some(e) = &outcome.explanation {
            for &t in &e.tokens {
                hasher.write_u32(t);
            }
        }
        let agent = state.agent();
        hasher.write_u8(agent.row);
        hasher.write_u8(agent.col);
        if let Some(pixels) = &outcome.observation.pixels {
            hasher.write(pixels.as_bytes());
        }
    }
    Ok(LaneResult {
        steps,
        episodes: episodes + 1,
        checksum: hasher.finish(),
    })
}

/// Drive `n_steps` random actions split over [`BENCH_LANES`] environments
/// and `threads` workers.
pub fn bench(
    config: &EpisodeConfig,
    n_steps: u64,
    threads: usize,
    render: bool,
) -> Result<BenchReport> {
    if threads == 0 {
        return Err(Error::InvalidArgument(
            "thread count must be at least 1".into(),
        ));
    }
    config.validate()?;
    let lane_steps = |lane: usize| {
        n_steps / BENCH_LANES as u64 + u64::from((lane as u64) < n_steps % BENCH_LANES as u64)
    };
    let start = Instant::now();
    let results: Vec<Result<LaneResult>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                scope.spawn(move || {
                    (w..BENCH_LANES)
                        .step_by(threads)
                        .map(|lane| (lane, run_lane(config, lane, lane_steps(lane), render)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut by_lane: Vec<(usize, Result<LaneResult>)> = handles
            .into_iter()
            .flat_map(|h| h.join().expect("bench thread panicked"))
            .collect();
        by_lane.sort_by_key(|(lane, _)| *lane);
        by_lane.into_iter().map(|(_, r)| r).collect()
    });
    let elapsed = start.elapsed().as_secs_f64();
    let mut hasher = FnvHasher::default();
    let (mut steps, mut episodes) = (0, 0);
    for r in results {
        let r = r?;
        steps += r.steps;
        episodes += r.episodes;
        hasher.write_u64(r.checksum);
    }
    Ok(BenchReport {
        steps,
        threads,
        render,
        episodes,
        elapsed_secs: elapsed,
        steps_per_sec: if elapsed > 0.0 {
            steps as f64 / elapsed
        } else {
            f64::INFINITY
        },
        checksum: hasher.finish(),
    })
}
