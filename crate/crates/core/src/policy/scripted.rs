use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{approach, approach_any_neighbour, policy_rng, Policy, PolicyContext};
use crate::board::{Action, TilePos};
use crate::catalog::FeatureDim;
use crate::engine::{Phase, RewardContext, WorldState};
use crate::structure::oddity;

fn alive_tiles(state: &WorldState) -> impl Iterator<Item = TilePos> + '_ {
    state.objects().iter().filter(|o| o.alive).map(|o| o.tile)
}

fn go_to_object(state: &WorldState, index: usize) -> Action {
    approach(
        state.agent(),
        state.objects()[index].tile,
        alive_tiles(state),
    )
}

/// Walks straight to the rewarded object. In meta experiment trials it
/// first uses the wand along the relevant dimension.
#[derive(Debug, Default)]
pub struct Omniscient;

impl Policy for Omniscient {
    fn name(&self) -> String {
        "omniscient".into()
    }

    fn begin_episode(&mut self, _seed: u64) {}

    fn act(&mut self, ctx: &PolicyContext<'_>) -> Action {
        let state = ctx.privileged();
        if state.phase() != Phase::Acting {
            return Action::NoOp;
        }
        let objects = state.objects();
        let reward_ctx = state.reward_context();
        if let RewardContext::MetaEarly { relevant } = reward_ctx {
            if state.wand_available() {
                if state.adjacent_objects().next().is_some() {
                    return Action::transform(relevant).expect("attribute dimension");
                }
                let tiles: Vec<TilePos> = alive_tiles(state).collect();
                return approach_any_neighbour(state.agent(), &tiles);
            }
        }
        let target = match reward_ctx {
            RewardContext::Basic { relevant: dim }
            | RewardContext::Deconfounded { eval_dim: dim }
            | RewardContext::MetaEarly { relevant: dim }
            | RewardContext::MetaFinal { relevant: dim } => oddity(objects, dim),
            RewardContext::Confounded { target } | RewardContext::Curriculum { target } => {
                Some(target)
            }
        };
        let target = target.or_else(|| objects.iter().position(|o| o.alive));
        target.map_or(Action::NoOp, |t| go_to_object(state, t))
    }
}

/// Per-trial uniform pick among the alive objects.
#[derive(Debug, Default)]
struct TrialPick {
    pick: Option<(u8, usize)>,
}

impl TrialPick {
    fn get(&mut self, state: &WorldState, rng: &mut ChaCha8Rng) -> usize {
        match self.pick {
            Some((trial, index)) if trial == state.trial_index() => index,
            _ => {
                let alive: Vec<usize> = (0..4).filter(|&i| state.objects()[i].alive).collect();
                let index = alive[rng.gen_range(0..alive.len())];
                self.pick = Some((state.trial_index(), index));
                index
            }
        }
    }
}

/// Chooses one of the objects uniformly at random each trial.
#[derive(Debug)]
pub struct UniformChoice {
    rng: ChaCha8Rng,
    pick: TrialPick,
}

impl Default for UniformChoice {
    fn default() -> Self {
        Self {
            rng: policy_rng(0),
            pick: TrialPick::default(),
        }
    }
}

impl Policy for UniformChoice {
    fn name(&self) -> String {
        "uniform".into()
    }

    fn begin_episode(&mut self, seed: u64) {
        self.rng = policy_rng(seed);
        self.pick = TrialPick::default();
    }

    fn act(&mut self, ctx: &PolicyContext<'_>) -> Action {
        let state = ctx.privileged();
        if state.phase() != Phase::Acting {
            return Action::NoOp;
        }
        let target = self.pick.get(state, &mut self.rng);
        go_to_object(state, target)
    }
}

/// Always goes for the object unique along one fixed dimension, falling
/// back to a uniform pick when there is none.
#[derive(Debug)]
pub struct DimensionBiased {
    dim: FeatureDim,
    fallback: UniformChoice,
}

impl DimensionBiased {
    pub fn new(dim: FeatureDim) -> Self {
        Self {
            dim,
            fallback: UniformChoice::default(),
        }
    }
}

impl Policy for DimensionBiased {
    fn name(&self) -> String {
        format!("biased:{}", self.dim)
    }

    fn begin_episode(&mut self, seed: u64) {
        self.fallback.begin_episode(seed);
    }

    fn act(&mut self, ctx: &PolicyContext<'_>) -> Action {
        let state = ctx.privileged();
        if state.phase() != Phase::Acting {
            return Action::NoOp;
        }
        match oddity(state.objects(), self.dim) {
            Some(target) => go_to_object(state, target),
            None => self.fallback.act(ctx),
        }
    }
}
