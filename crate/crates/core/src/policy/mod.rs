//! Scripted policies used as test oracles and baselines.
//!
//! Privileged policies read the full [`WorldState`]; the meta experimenter
//! only uses an [`ObservableView`], which carries what a frame shows plus
//! the step outcome.

mod experimenter;
mod path;
mod scripted;

pub use experimenter::{MetaExperimenter, PROBE_ORDER};
pub use path::{path_to_any, shortest_path, step_toward};
pub use scripted::{DimensionBiased, Omniscient, UniformChoice};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::board::{region_of, Action, TilePos};
use crate::catalog::FeatureDim;
use crate::engine::{Event, StepOutcome, WorldState};
use crate::error::{Error, Result};
use crate::explain::vocabulary;
use crate::render::{Percept, VisibleObject};
use crate::structure::unique_index;

/// RNG stream reserved for policies.
const POLICY_STREAM: u64 = 3;

pub(crate) fn policy_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(POLICY_STREAM);
    rng
}

/// What a policy sees each step.
pub struct PolicyContext<'a> {
    state: &'a WorldState,
    last: &'a StepOutcome,
}

impl<'a> PolicyContext<'a> {
    pub fn new(state: &'a WorldState, last: &'a StepOutcome) -> Self {
        Self { state, last }
    }

    /// Full access to hidden state.
    pub fn privileged(&self) -> &'a WorldState {
        self.state
    }

    pub fn observable(&self) -> ObservableView<'a> {
        ObservableView {
            percept: Percept::of_state(self.state),
            last: self.last,
        }
    }
}

/// Observation-level access: the visible room and the latest step outcome.
pub struct ObservableView<'a> {
    percept: Percept,
    last: &'a StepOutcome,
}

impl ObservableView<'_> {
    pub fn percept(&self) -> &Percept {
        &self.percept
    }

    pub fn reward(&self) -> f32 {
        self.last.reward
    }

    pub fn events(&self) -> &[Event] {
        &self.last.events
    }

    pub fn instruction(&self) -> String {
        vocabulary().detokenize(&self.last.observation.instruction_tokens)
    }

    pub fn explanation_tokens(&self) -> &[u32] {
        self.last
            .explanation
            .as_ref()
            .map(|e| e.tokens.as_slice())
            .unwrap_or(&[])
    }

    /// Dimension word (`color`, `shape`, `texture`) named by the current
    /// explanation target, if any.
    pub fn explanation_dimension(&self) -> Option<FeatureDim> {
        let vocab = vocabulary();
        self.explanation_tokens()
            .iter()
            .filter_map(|&id| vocab.token(id))
            .find_map(|word| FeatureDim::from_name(word).filter(|d| *d != FeatureDim::Position))
    }
}

impl VisibleObject {
    pub fn value(&self, dim: FeatureDim) -> u8 {
        match dim {
            FeatureDim::Color => self.color,
            FeatureDim::Shape => self.shape,
            FeatureDim::Texture => self.texture,
            FeatureDim::Position => region_of(self.tile).unwrap_or(u8::MAX),
        }
    }
}

/// The visible object unique along `dim`, if exactly one is.
pub fn visible_oddity(objects: &[VisibleObject], dim: FeatureDim) -> Option<usize> {
    let values: Vec<u8> = objects.iter().map(|o| o.value(dim)).collect();
    unique_index(&values)
}

pub trait Policy: Send {
    fn name(&self) -> String;

    /// Reset scratch state; `seed` is the episode seed.
    fn begin_episode(&mut self, seed: u64);

    fn act(&mut self, ctx: &PolicyContext<'_>) -> Action;
}

/// Names accepted by the CLI:
/// `omniscient`, `uniform`, `biased:<dim>`, `experimenter`, `experimenter-reward-only`.
pub fn by_name(name: &str) -> Result<Box<dyn Policy>> {
    Ok(match name {
        "omniscient" => Box::new(Omniscient),
        "uniform" => Box::new(UniformChoice::default()),
        "experimenter" => Box::new(MetaExperimenter::reading_explanations()),
        "experimenter-reward-only" => Box::new(MetaExperimenter::reward_only()),
        other => {
            let dim = other
                .strip_prefix("biased:")
                .and_then(FeatureDim::from_name)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown policy `{other}`")))?;
            Box::new(DimensionBiased::new(dim))
        }
    })
}

/// First move toward `target`, walking around every other object in `others`.
pub(crate) fn approach(
    agent: TilePos,
    target: TilePos,
    others: impl Iterator<Item = TilePos>,
) -> Action {
    let obstacles: Vec<TilePos> = others.filter(|&t| t != target).collect();
    step_toward(agent, target, &obstacles)
}

/// First move toward any free tile next to one of `objects`.
pub(crate) fn approach_any_neighbour(agent: TilePos, objects: &[TilePos]) -> Action {
    let goals: Vec<TilePos> = TilePos::playable_tiles()
        .filter(|t| !objects.contains(t) && objects.iter().any(|o| o.is_adjacent(*t)))
        .collect();
    path_to_any(agent, &goals, objects)
        .and_then(|p| p.first().copied())
        .unwrap_or(Action::NoOp)
}
