//! Deterministic 2D odd-one-out environments with language explanation
//! targets.
//!
//! An episode places four objects in a 9×9 room. Objects vary in color,
//! shape, texture and position type, and the agent is rewarded for walking
//! onto the object that is the odd one out along the relevant dimension.
//! Alongside rewards the environment produces explanation targets: property
//! descriptions of nearby objects before a choice, and reward explanations
//! after it.
//!
//! ```
//! use oddity::{Action, EpisodeConfig, TaskKind, WorldState};
//!
//! let config = EpisodeConfig::new(TaskKind::Basic, 7);
//! let (mut state, _first) = WorldState::reset(&config).unwrap();
//! let outcome = state.step(Action::N).unwrap();
//! assert!(outcome.reward == 0.0 || outcome.reward == 1.0);
//! ```

pub mod board;
pub mod catalog;
pub mod config;
pub mod engine;
mod error;
pub mod explain;
pub mod harness;
pub mod object;
pub mod policy;
pub mod render;
pub mod structure;
pub mod taskgen;

pub use board::{Action, TilePos, SPAWN};
pub use catalog::{canonical_catalog, feature_name, FeatureCatalog, FeatureDim};
pub use config::{Ablation, DimSet, EpisodeConfig, ExplanationMode, MetaDifficulty, TaskKind};
pub use engine::{
    choice_reward, transform_semantics, Event, Observation, Phase, RewardContext, StepOutcome,
    WorldState,
};
pub use error::{Error, Result};
pub use explain::{ExplanationEvent, ExplanationKind};
pub use harness::{
    eval_deconfound, read_trajectories, run, write_trajectory, DeconfoundReport, RunStats,
    Trajectory,
};
pub use object::ObjectSpec;
pub use policy::{Policy, PolicyContext};
pub use render::{Percept, PixelBuffer};
pub use structure::{oddity, verify_structure, DimPattern, StructureReport};
pub use taskgen::{generate, Episode, EpisodeSpec, MetaEpisode, Relevance, TrialSpec};
