//! Episode configuration.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::catalog::FeatureDim;
use crate::error::{Error, Result};

pub const DEFAULT_TAIL_LENGTH: u16 = 16;
pub const DEFAULT_STEP_LIMIT: u16 = 128;
pub const DEFAULT_META_STEP_LIMIT: u16 = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetaDifficulty {
    /// Every attribute matches across the experiment room.
    Easy,
    /// Every attribute is split into two pairs.
    Hard,
    /// Each attribute independently matching or paired.
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    Basic,
    Confounded,
    Deconfounded,
    Meta(MetaDifficulty),
    Curriculum,
}

impl TaskKind {
    pub fn is_meta(self) -> bool {
        matches!(self, TaskKind::Meta(_))
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            TaskKind::Basic => "basic",
            TaskKind::Confounded => "confounded",
            TaskKind::Deconfounded => "deconfounded",
            TaskKind::Meta(MetaDifficulty::Easy) => "meta:easy",
            TaskKind::Meta(MetaDifficulty::Hard) => "meta:hard",
            TaskKind::Meta(MetaDifficulty::Mixed) => "meta:mixed",
            TaskKind::Curriculum => "curriculum",
        })
    }
}

impl FromStr for TaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "basic" => TaskKind::Basic,
            "confounded" => TaskKind::Confounded,
            "deconfounded" => TaskKind::Deconfounded,
            "meta:easy" => TaskKind::Meta(MetaDifficulty::Easy),
            "meta:hard" => TaskKind::Meta(MetaDifficulty::Hard),
            "meta:mixed" => TaskKind::Meta(MetaDifficulty::Mixed),
            "curriculum" => TaskKind::Curriculum,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown task kind `{other}`"
                )))
            }
        })
    }
}

/// A subset of [`FeatureDim`], stored as a bit set and iterated in
/// canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<FeatureDim>", from = "Vec<FeatureDim>")]
pub struct DimSet(u8);

impl DimSet {
    pub const ALL: DimSet = DimSet(0b1111);
    pub const ATTRIBUTES: DimSet = DimSet(0b0111);

    pub fn empty() -> Self {
        DimSet(0)
    }

    pub fn of(dims: &[FeatureDim]) -> Self {
        dims.iter().fold(DimSet(0), |s, &d| s.with(d))
    }

    pub fn with(self, dim: FeatureDim) -> Self {
        DimSet(self.0 | 1 << dim.index())
    }

    pub fn contains(self, dim: FeatureDim) -> bool {
        self.0 & (1 << dim.index()) != 0
    }

    pub fn intersect(self, other: DimSet) -> DimSet {
        DimSet(self.0 & other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = FeatureDim> {
        FeatureDim::ALL
            .into_iter()
            .filter(move |&d| self.contains(d))
    }
}

impl From<DimSet> for Vec<FeatureDim> {
    fn from(s: DimSet) -> Self {
        s.iter().collect()
    }
}

impl From<Vec<FeatureDim>> for DimSet {
    fn from(v: Vec<FeatureDim>) -> Self {
        DimSet::of(&v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ablation {
    #[default]
    None,
    /// Room-relevant explanations emitted independently of behavior.
    BehaviorIrrelevant,
    /// Templates filled with random attributes.
    ContextIrrelevant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExplanationMode {
    pub property_on: bool,
    pub reward_on: bool,
    /// Restrict explanations to one feature dimension.
    pub single_dim: Option<FeatureDim>,
    pub ablation: Ablation,
    /// Echo each step's explanation target into the next observation.
    pub as_input: bool,
}

impl Default for ExplanationMode {
    fn default() -> Self {
        Self {
            property_on: true,
            reward_on: true,
            single_dim: None,
            ablation: Ablation::None,
            as_input: false,
        }
    }
}

impl ExplanationMode {
    pub fn off() -> Self {
        Self {
            property_on: false,
            reward_on: false,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EpisodeConfig {
    pub task_kind: TaskKind,
    pub allowed_relevant_dims: DimSet,
    pub explanation_mode: ExplanationMode,
    pub tail_length: u16,
    pub step_limit: u16,
    pub seed: u64,
    /// Basic episodes only: half of episodes become curriculum property
    /// tasks, the rest carry the instruction "find the odd one out".
    #[serde(default)]
    pub curriculum_mix: bool,
}

impl EpisodeConfig {
    /// Defaults for `kind`: every legal dimension allowed, both explanation
    /// kinds on, 16-step tail, 128 or 512 step budget.
    pub fn new(task_kind: TaskKind, seed: u64) -> Self {
        let (allowed, limit) = if task_kind.is_meta() {
            (DimSet::ATTRIBUTES, DEFAULT_META_STEP_LIMIT)
        } else {
            (DimSet::ALL, DEFAULT_STEP_LIMIT)
        };
        Self {
            task_kind,
            allowed_relevant_dims: allowed,
            explanation_mode: ExplanationMode::default(),
            tail_length: DEFAULT_TAIL_LENGTH,
            step_limit: limit,
            seed,
            curriculum_mix: false,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_explanations(mut self, mode: ExplanationMode) -> Self {
        self.explanation_mode = mode;
        self
    }

    pub fn with_allowed_dims(mut self, dims: DimSet) -> Self {
        self.allowed_relevant_dims = dims;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let allowed = self.allowed_relevant_dims;
        if allowed.is_empty() {
            return Err(Error::InvalidConfig(
                "allowed_relevant_dims is empty".into(),
            ));
        }
        if self.task_kind.is_meta() && allowed.contains(FeatureDim::Position) {
            return Err(Error::InvalidConfig(
                "meta episodes cannot use position as the relevant dimension".into(),
            ));
        }
        if self.task_kind == TaskKind::Deconfounded
            && allowed.intersect(DimSet::ATTRIBUTES).is_empty()
        {
            return Err(Error::InvalidConfig(
                "deconfounded episodes need color, shape or texture allowed".into(),
            ));
        }
        if self.tail_length == 0 {
            return Err(Error::InvalidConfig(
                "tail_length must be at least 1".into(),
            ));
        }
        if self.step_limit == 0 {
            return Err(Error::InvalidConfig("step_limit must be at least 1".into()));
        }
        Ok(())
    }

    /// Number of actions legal in this episode kind.
    pub fn num_actions(&self) -> usize {
        if self.task_kind.is_meta() {
            crate::board::Action::COUNT
        } else {
            crate::board::Action::BASE_COUNT
        }
    }
}
