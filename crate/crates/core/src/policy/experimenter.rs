//! A feedback-driven strategy for the meta-learning episodes.
//!
//! Each experiment trial probes one attribute: wave the wand along it, then
//! pick whichever object that made unique. A probe that pays out reveals the
//! relevant dimension, which the final trial then exploits. The
//! explanation-reading variant also takes the dimension word straight from
//! the reward explanation.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{approach, approach_any_neighbour, policy_rng, visible_oddity, Policy, PolicyContext};
use crate::board::{Action, TilePos};
use crate::catalog::FeatureDim;
use crate::engine::Event;
use crate::render::VisibleObject;
use crate::taskgen::FIND_INSTRUCTION;

/// Probe order over the three experiment trials.
pub const PROBE_ORDER: [FeatureDim; 3] =
    [FeatureDim::Color, FeatureDim::Texture, FeatureDim::Shape];

#[derive(Debug)]
pub struct MetaExperimenter {
    read_explanations: bool,
    rng: ChaCha8Rng,
    trial: usize,
    in_tail: bool,
    probe: Option<FeatureDim>,
    target: Option<TilePos>,
    found: Option<FeatureDim>,
    found_at_trial: Option<usize>,
}

impl MetaExperimenter {
    pub fn reward_only() -> Self {
        Self::new(false)
    }

    pub fn reading_explanations() -> Self {
        Self::new(true)
    }

    fn new(read_explanations: bool) -> Self {
        Self {
            read_explanations,
            rng: policy_rng(0),
            trial: 0,
            in_tail: false,
            probe: None,
            target: None,
            found: None,
            found_at_trial: None,
        }
    }

    /// The dimension the policy has inferred so far.
    pub fn inferred_dimension(&self) -> Option<FeatureDim> {
        self.found
    }

    /// Trial during which the dimension was first inferred.
    pub fn inferred_at_trial(&self) -> Option<usize> {
        self.found_at_trial
    }

    fn learn(&mut self, dim: FeatureDim) {
        if self.found.is_none() {
            self.found = Some(dim);
            self.found_at_trial = Some(self.trial);
        }
    }

    fn sticky_pick(&mut self, objects: &[VisibleObject]) -> Option<TilePos> {
        if let Some(t) = self.target.filter(|t| objects.iter().any(|o| o.tile == *t)) {
            return Some(t);
        }
        if objects.is_empty() {
            return None;
        }
        let t = objects[self.rng.gen_range(0..objects.len())].tile;
        self.target = Some(t);
        Some(t)
    }
}

impl Policy for MetaExperimenter {
    fn name(&self) -> String {
        if self.read_explanations {
            "experimenter"
        } else {
            "experimenter-reward-only"
        }
        .into()
    }

    fn begin_episode(&mut self, seed: u64) {
        *self = Self::new(self.read_explanations);
        self.rng = policy_rng(seed);
    }

    fn act(&mut self, ctx: &PolicyContext<'_>) -> Action {
        let view = ctx.observable();
        for event in view.events() {
            match *event {
                Event::Chose { .. } => {
                    self.in_tail = true;
                    if view.reward() > 0.0 && self.trial < PROBE_ORDER.len() {
                        if let Some(dim) = self.probe {
                            self.learn(dim);
                        }
                    }
                }
                Event::TrialEnded { .. } => {
                    self.trial += 1;
                    self.in_tail = false;
                    self.probe = None;
                    self.target = None;
                }
                _ => {}
            }
        }
        if self.read_explanations && self.in_tail {
            if let Some(dim) = view.explanation_dimension() {
                self.learn(dim);
            }
        }
        if self.in_tail {
            return Action::NoOp;
        }

        let percept = view.percept();
        let tiles: Vec<TilePos> = percept.objects.iter().map(|o| o.tile).collect();
        let final_trial = self.trial >= PROBE_ORDER.len() || view.instruction() == FIND_INSTRUCTION;

        let target = if final_trial {
            match self.found.and_then(|d| visible_oddity(&percept.objects, d)) {
                Some(i) => Some(percept.objects[i].tile),
                None => self.sticky_pick(&percept.objects),
            }
        } else {
            let Some(dim) = self.probe else {
                let dim = match (self.read_explanations, self.found) {
                    (true, Some(found)) => found,
                    _ => PROBE_ORDER[self.trial],
                };
                if tiles.iter().any(|t| t.is_adjacent(percept.agent)) {
                    self.probe = Some(dim);
                    return Action::transform(dim).expect("attribute dimension");
                }
                return approach_any_neighbour(percept.agent, &tiles);
            };
            match visible_oddity(&percept.objects, dim) {
                Some(i) => Some(percept.objects[i].tile),
                None => self.sticky_pick(&percept.objects),
            }
        };
        target.map_or(Action::NoOp, |t| {
            approach(percept.agent, t, tiles.iter().copied())
        })
    }
}
