//! The episode state machine.
//!
//! A step applies, in order: movement, wand transformation, choice, tail
//! bookkeeping, trial or episode transitions, and explanation emission.
//! Every call to [`WorldState::step`] consumes one unit of the step budget,
//! tail steps included.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::board::{Action, TilePos, SPAWN};
use crate::catalog::FeatureDim;
use crate::config::{Ablation, EpisodeConfig};
use crate::error::{Error, Result};
use crate::explain::{
    sample_behavior_irrelevant, sample_context_irrelevant, tokenize, Explainer, ExplanationEvent,
    BEHAVIOR_IRRELEVANT_RATE,
};
use crate::object::ObjectSpec;
use crate::render::{render_frame, PixelBuffer};
use crate::structure::{classify, oddity, DimPattern};
use crate::taskgen::{generate, Episode, Relevance};

/// RNG stream for wand transformations.
const DYNAMICS_STREAM: u64 = 1;
/// RNG stream for explanation sampling, kept apart so explanation settings
/// never change the room dynamics.
const EXPLAIN_STREAM: u64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Acting,
    /// Post-choice reward-explanation window.
    Tail {
        remaining: u16,
    },
    Done,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Event {
    Chose { object: usize, correct: bool },
    Transformed { dim: FeatureDim, object: usize },
    TrialEnded { trial: u8 },
    EpisodeEnded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Observation {
    /// `None` when the environment runs headless.
    pub pixels: Option<PixelBuffer>,
    pub instruction_tokens: Vec<u32>,
    pub last_reward: f32,
    /// Previous step's explanation target, only in explanation-as-input mode.
    pub input_explanation_tokens: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepOutcome {
    pub observation: Observation,
    pub reward: f32,
    pub explanation: Option<ExplanationEvent>,
    pub events: Vec<Event>,
    pub done: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Choice {
    pub trial: u8,
    pub object: usize,
    pub correct: bool,
}

/// What decides the reward for a choice in the current room.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewardContext {
    Basic { relevant: FeatureDim },
    Confounded { target: usize },
    Deconfounded { eval_dim: FeatureDim },
    Curriculum { target: usize },
    MetaEarly { relevant: FeatureDim },
    MetaFinal { relevant: FeatureDim },
}

pub const META_FINAL_REWARD: f32 = 10.0;

/// Reward for choosing `chosen` from `objects` (the room at choice time).
pub fn choice_reward(ctx: RewardContext, objects: &[ObjectSpec], chosen: usize) -> f32 {
    let hit = match ctx {
        RewardContext::Basic { relevant: dim }
        | RewardContext::Deconfounded { eval_dim: dim }
        | RewardContext::MetaEarly { relevant: dim }
        | RewardContext::MetaFinal { relevant: dim } => oddity(objects, dim) == Some(chosen),
        RewardContext::Confounded { target } | RewardContext::Curriculum { target } => {
            chosen == target
        }
    };
    match (hit, ctx) {
        (false, _) => 0.0,
        (true, RewardContext::MetaFinal { .. }) => META_FINAL_REWARD,
        (true, _) => 1.0,
    }
}

/// Apply a magic-wand transformation to `objects[target]` along `dim`.
///
/// When all four values match, the target gets a fresh value no object
/// holds, making it unique. When the values form two pairs, the target
/// takes the other pair's value, which leaves its former partner unique.
/// Returns whether anything changed.
pub fn transform_semantics<R: Rng>(
    objects: &mut [ObjectSpec; 4],
    target: usize,
    dim: FeatureDim,
    rng: &mut R,
) -> bool {
    if dim == FeatureDim::Position || !objects[target].alive {
        return false;
    }
    let values: Vec<u8> = objects.iter().map(|o| o.value(dim)).collect();
    let current = values[target];
    let new_value = match classify(&values) {
        DimPattern::Paired2v2 => *values
            .iter()
            .find(|&&v| v != current)
            .expect("two values present"),
        _ => {
            let fresh: Vec<u8> = (0..dim.cardinality() as u8)
                .filter(|v| !values.contains(v))
                .collect();
            match fresh.choose(rng) {
                Some(&v) => v,
                None => return false,
            }
        }
    };
    objects[target].set_value(dim, new_value);
    true
}

/// Live simulation state for one episode.
#[derive(Clone, Debug, PartialEq)]
pub struct WorldState {
    config: EpisodeConfig,
    episode: Episode,
    explainer: Explainer,
    objects: [ObjectSpec; 4],
    agent: TilePos,
    trial: u8,
    phase: Phase,
    wand_used: bool,
    steps: u16,
    choices: Vec<Choice>,
    pending_reward_explanation: Option<ExplanationEvent>,
    possible: Vec<ExplanationEvent>,
    instruction_tokens: Vec<u32>,
    prev_explanation_tokens: Vec<u32>,
    dynamics_rng: ChaCha8Rng,
    explain_rng: ChaCha8Rng,
    render: bool,
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

impl WorldState {
    /// Start an episode with pixel rendering enabled.
    pub fn reset(config: &EpisodeConfig) -> Result<(WorldState, StepOutcome)> {
        Self::reset_with(config, true)
    }

    /// Start an episode without rendering; every non-pixel field matches
    /// [`reset`](Self::reset).
    pub fn reset_headless(config: &EpisodeConfig) -> Result<(WorldState, StepOutcome)> {
        Self::reset_with(config, false)
    }

    pub fn reset_with(config: &EpisodeConfig, render: bool) -> Result<(WorldState, StepOutcome)> {
        let episode = generate(config)?;
        let explainer = Explainer::new(&config.explanation_mode, &episode);
        let mut state = WorldState {
            config: *config,
            objects: *episode.trial_objects(0),
            episode,
            explainer,
            agent: SPAWN,
            trial: 0,
            phase: Phase::Acting,
            wand_used: false,
            steps: 0,
            choices: Vec::new(),
            pending_reward_explanation: None,
            possible: Vec::new(),
            instruction_tokens: Vec::new(),
            prev_explanation_tokens: Vec::new(),
            dynamics_rng: stream_rng(config.seed, DYNAMICS_STREAM),
            explain_rng: stream_rng(config.seed, EXPLAIN_STREAM),
            render,
        };
        state.begin_trial(0);
        let outcome = StepOutcome {
            observation: state.observe(0.0, Vec::new()),
            reward: 0.0,
            explanation: None,
            events: Vec::new(),
            done: false,
        };
        Ok((state, outcome))
    }

    fn begin_trial(&mut self, trial: u8) {
        self.trial = trial;
        self.objects = *self.episode.trial_objects(trial as usize);
        self.agent = SPAWN;
        self.phase = Phase::Acting;
        self.wand_used = false;
        self.pending_reward_explanation = None;
        let text = self.episode.trial_instruction(trial as usize);
        self.instruction_tokens = if text.is_empty() {
            Vec::new()
        } else {
            tokenize(text)
        };
        self.possible = if self.config.explanation_mode.ablation == Ablation::BehaviorIrrelevant {
            let ctx = self.reward_context();
            let objects = self.objects;
            self.explainer
                .possible_set(&objects, |i| choice_reward(ctx, &objects, i) > 0.0)
        } else {
            Vec::new()
        };
    }

    fn observe(&self, reward: f32, input_explanation_tokens: Vec<u32>) -> Observation {
        Observation {
            pixels: self.render.then(|| render_frame(self)),
            instruction_tokens: self.instruction_tokens.clone(),
            last_reward: reward,
            input_explanation_tokens,
        }
    }

    pub fn config(&self) -> &EpisodeConfig {
        &self.config
    }

    pub fn episode(&self) -> &Episode {
        &self.episode
    }

    /// The current room, including removed objects (`alive == false`).
    pub fn objects(&self) -> &[ObjectSpec; 4] {
        &self.objects
    }

    pub fn agent(&self) -> TilePos {
        self.agent
    }

    pub fn trial_index(&self) -> u8 {
        self.trial
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn is_done(&self) -> bool {
        self.phase == Phase::Done
    }

    pub fn wand_used(&self) -> bool {
        self.wand_used
    }

    pub fn steps_elapsed(&self) -> u16 {
        self.steps
    }

    pub fn choices(&self) -> &[Choice] {
        &self.choices
    }

    pub fn renders(&self) -> bool {
        self.render
    }

    pub fn instruction_tokens(&self) -> &[u32] {
        &self.instruction_tokens
    }

    pub fn is_meta(&self) -> bool {
        matches!(self.episode, Episode::Meta(_))
    }

    /// The wand works only on experiment trials of meta episodes.
    pub fn wand_available(&self) -> bool {
        match &self.episode {
            Episode::Meta(meta) => !meta.trials[self.trial as usize].is_final && !self.wand_used,
            Episode::Single(_) => false,
        }
    }

    pub fn reward_context(&self) -> RewardContext {
        match &self.episode {
            Episode::Single(spec) => match spec.relevance {
                Relevance::Single(relevant) => RewardContext::Basic { relevant },
                Relevance::AllAttributes => RewardContext::Confounded {
                    target: spec.target_index.expect("target"),
                },
                Relevance::PerDimension { eval_dim, .. } => {
                    RewardContext::Deconfounded { eval_dim }
                }
                Relevance::Property(_) => RewardContext::Curriculum {
                    target: spec.target_index.expect("target"),
                },
            },
            Episode::Meta(meta) => {
                if meta.trials[self.trial as usize].is_final {
                    RewardContext::MetaFinal {
                        relevant: meta.relevant_dim,
                    }
                } else {
                    RewardContext::MetaEarly {
                        relevant: meta.relevant_dim,
                    }
                }
            }
        }
    }

    pub fn alive_object_at(&self, tile: TilePos) -> Option<usize> {
        self.objects.iter().position(|o| o.alive && o.tile == tile)
    }

    /// Alive objects in the agent's 8-neighbourhood, lowest index first.
    pub fn adjacent_objects(&self) -> impl Iterator<Item = usize> + '_ {
        let agent = self.agent;
        (0..self.objects.len())
            .filter(move |&i| self.objects[i].alive && self.objects[i].tile.is_adjacent(agent))
    }

    fn try_transform(&mut self, dim: FeatureDim, events: &mut Vec<Event>) {
        if !self.wand_available() {
            return;
        }
        let Some(target) = self.adjacent_objects().next() else {
            return;
        };
        if transform_semantics(&mut self.objects, target, dim, &mut self.dynamics_rng) {
            self.wand_used = true;
            events.push(Event::Transformed {
                dim,
                object: target,
            });
        }
    }

    fn property_for_adjacent(&mut self) -> Option<ExplanationEvent> {
        let adjacent: Vec<usize> = self.adjacent_objects().collect();
        let &index = adjacent.choose(&mut self.explain_rng)?;
        Some(self.explainer.property(&self.objects, index))
    }

    /// Advance one step.
    pub fn step(&mut self, action: Action) -> Result<StepOutcome> {
        if self.phase == Phase::Done {
            return Err(Error::InvalidState(
                "step called on a finished episode".into(),
            ));
        }
        if action.is_transform() && !self.is_meta() {
            return Err(Error::IllegalAction(action.to_string()));
        }
        self.steps += 1;
        let mode = self.config.explanation_mode;
        let behavior_driven = mode.ablation == Ablation::None;
        let mut events = Vec::new();
        let mut reward = 0.0;
        let mut explanation = None;
        let mut trial_over = false;

        if let Some(delta) = action.delta() {
            if let Some(dest) = self.agent.offset(delta).filter(|t| t.is_playable()) {
                self.agent = dest;
            }
        }

        match self.phase {
            Phase::Acting => {
                if let Some(dim) = action.transform_dim() {
                    self.try_transform(dim, &mut events);
                }
                if let Some(index) = self.alive_object_at(self.agent) {
                    let at_choice = self.objects;
                    reward = choice_reward(self.reward_context(), &at_choice, index);
                    let correct = reward > 0.0;
                    events.push(Event::Chose {
                        object: index,
                        correct,
                    });
                    self.choices.push(Choice {
                        trial: self.trial,
                        object: index,
                        correct,
                    });
                    self.objects[index].alive = false;
                    self.pending_reward_explanation =
                        self.explainer.reward(&at_choice, index, correct);
                    let remaining = self
                        .config
                        .tail_length
                        .min(self.config.step_limit - self.steps);
                    if remaining == 0 {
                        trial_over = true;
                    } else {
                        self.phase = Phase::Tail { remaining };
                    }
                } else if behavior_driven && mode.property_on {
                    explanation = self.property_for_adjacent();
                }
            }
            Phase::Tail { remaining } => {
                let touched = self.alive_object_at(self.agent).is_some();
                if behavior_driven && mode.reward_on {
                    explanation = self.pending_reward_explanation.clone();
                }
                let remaining = remaining - 1;
                if touched || remaining == 0 {
                    trial_over = true;
                } else {
                    self.phase = Phase::Tail { remaining };
                }
            }
            Phase::Done => unreachable!(),
        }

        match mode.ablation {
            Ablation::None => {}
            Ablation::BehaviorIrrelevant => {
                explanation = sample_behavior_irrelevant(&mut self.explain_rng, &self.possible);
            }
            Ablation::ContextIrrelevant => {
                explanation = self
                    .explain_rng
                    .gen_bool(BEHAVIOR_IRRELEVANT_RATE)
                    .then(|| sample_context_irrelevant(&mut self.explain_rng, &self.explainer));
            }
        }

        let budget_spent = self.steps >= self.config.step_limit;
        if trial_over {
            events.push(Event::TrialEnded { trial: self.trial });
            let next = self.trial as usize + 1;
            if next < self.episode.trial_count() && !budget_spent {
                self.begin_trial(next as u8);
            } else {
                self.phase = Phase::Done;
                events.push(Event::EpisodeEnded);
            }
        }
        if budget_spent && self.phase != Phase::Done {
            events.push(Event::TrialEnded { trial: self.trial });
            events.push(Event::EpisodeEnded);
            self.phase = Phase::Done;
        }

        let tokens = explanation
            .as_ref()
            .map(|e| e.tokens.clone())
            .unwrap_or_default();
        let input = if mode.as_input {
            std::mem::replace(&mut self.prev_explanation_tokens, tokens)
        } else {
            Vec::new()
        };
        Ok(StepOutcome {
            observation: self.observe(reward, input),
            reward,
            explanation,
            events,
            done: self.phase == Phase::Done,
        })
    }
}
