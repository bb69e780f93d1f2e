//! Rollouts, statistics, trajectory files and benchmarks.

mod bench;
mod runner;
mod stats;
mod trajectory;

pub use bench::{bench, BenchReport, BENCH_LANES};
pub use runner::{
    classify_choice, eval_deconfound, run, run_episode, run_parallel, run_with, ChoiceCategory,
    DeconfoundReport, EpisodeRecord,
};
pub use stats::{EpisodeSummary, Rate, RunStats, ALL_RELEVANT_KEY};
pub use trajectory::{
    read_trajectories, read_trajectory, write_trajectory, StepRecord, Trajectory, TrajectoryHeader,
    TRAJECTORY_FORMAT, TRAJECTORY_VERSION,
};
