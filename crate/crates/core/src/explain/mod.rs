//! Explanation templates, ablation samplers and tokenization.
//!
//! All text is lower case without punctuation. Slots always appear in the
//! order color, texture, shape, position.

mod ablation;
mod vocab;

pub use ablation::{
    sample_behavior_irrelevant, sample_context_irrelevant, BEHAVIOR_IRRELEVANT_RATE,
};
pub use vocab::{detokenize, tokenize, vocabulary, Vocabulary, BOS, CAPACITY, EOS, PAD, UNK};

use serde::{Deserialize, Serialize};

use crate::catalog::{canonical_catalog, feature_name, FeatureDim};
use crate::config::{DimSet, ExplanationMode, TaskKind};
use crate::object::ObjectSpec;
use crate::taskgen::{Episode, Relevance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Template {
    Property,
    Reward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExplanationKind {
    Property,
    Reward,
    /// Emitted by an ablation sampler rather than by behavior.
    Irrelevant(Template),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplanationEvent {
    pub kind: ExplanationKind,
    pub text: String,
    pub tokens: Vec<u32>,
    pub subject: Option<usize>,
}

impl ExplanationEvent {
    pub fn new(kind: ExplanationKind, text: String, subject: Option<usize>) -> Self {
        let tokens = tokenize(&text);
        Self {
            kind,
            text,
            tokens,
            subject,
        }
    }

    pub fn template(&self) -> Template {
        match self.kind {
            ExplanationKind::Property => Template::Property,
            ExplanationKind::Reward => Template::Reward,
            ExplanationKind::Irrelevant(t) => t,
        }
    }
}

/// Which slots a property explanation fills.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyStyle {
    Full,
    /// Meta-learning episodes never mention position.
    NoPosition,
    Single(FeatureDim),
}

/// Value ids indexed by [`FeatureDim::index`].
type Values = [u8; 4];

fn values_of(obj: &ObjectSpec) -> Values {
    FeatureDim::ALL.map(|d| obj.value(d))
}

fn name(dim: FeatureDim, values: &Values) -> &'static str {
    feature_name(dim, values[dim.index()]).expect("catalog ids")
}

fn property_text(values: &Values, style: PropertyStyle) -> String {
    let dims: &[FeatureDim] = match style {
        PropertyStyle::Full => &FeatureDim::SLOT_ORDER,
        PropertyStyle::NoPosition => &FeatureDim::SLOT_ORDER[..3],
        PropertyStyle::Single(ref d) => std::slice::from_ref(d),
    };
    let slots: Vec<&str> = dims.iter().map(|&d| name(d, values)).collect();
    format!("this is a {}", slots.join(" "))
}

fn correct_text(values: &Values, dims: DimSet) -> String {
    let slots: Vec<&str> = FeatureDim::SLOT_ORDER
        .into_iter()
        .filter(|&d| dims.contains(d))
        .map(|d| name(d, values))
        .collect();
    format!("correct because it is uniquely {}", slots.join(" "))
}

/// `None` when no slot survives.
fn incorrect_text(values: &Values, dims: DimSet) -> Option<String> {
    let mut words: Vec<String> = Vec::new();
    for dim in [FeatureDim::Color, FeatureDim::Texture] {
        if dims.contains(dim) {
            words.push(name(dim, values).to_string());
        }
    }
    if dims.contains(FeatureDim::Shape) {
        words.push(format!("{}s", name(FeatureDim::Shape, values)));
    }
    let mut body = words.join(" ");
    if dims.contains(FeatureDim::Position) {
        let pos = name(FeatureDim::Position, values);
        body = if body.is_empty() {
            pos.to_string()
        } else {
            format!("{body} or {pos}")
        };
    }
    (!body.is_empty()).then(|| format!("incorrect because other objects are {body}"))
}

fn meta_text(dim: FeatureDim, values: &Values, correct: bool) -> String {
    let value = name(dim, values);
    if correct {
        format!("correct because the dimension is {dim} and it is uniquely {value}")
    } else {
        let value = if dim == FeatureDim::Shape {
            format!("{value}s")
        } else {
            value.to_string()
        };
        format!("incorrect because the dimension is {dim} and other objects are {value}")
    }
}

/// Describe an object: `this is a <color> <texture> <shape> <position>`.
pub fn property_explanation(obj: &ObjectSpec, style: PropertyStyle) -> String {
    property_text(&values_of(obj), style)
}

/// Post-choice explanation for single-room tasks.
///
/// A correct choice names the chosen object's values along `relevant`. An
/// incorrect choice names every value of the chosen object that some other
/// object shares, restricted to `single_dim` when set; if nothing is shared
/// there is nothing to say and the result is `None`.
pub fn reward_explanation_basic(
    objects: &[ObjectSpec],
    chosen: usize,
    relevant: DimSet,
    correct: bool,
    single_dim: Option<FeatureDim>,
) -> Option<String> {
    let values = values_of(&objects[chosen]);
    if correct {
        let dims = match single_dim {
            Some(d) if relevant.contains(d) => DimSet::of(&[d]),
            _ => relevant,
        };
        return Some(correct_text(&values, dims));
    }
    let candidates = single_dim.map_or(DimSet::ALL, |d| DimSet::of(&[d]));
    let shared = candidates.iter().filter(|&dim| {
        objects
            .iter()
            .enumerate()
            .any(|(j, other)| j != chosen && other.value(dim) == values[dim.index()])
    });
    incorrect_text(&values, shared.fold(DimSet::empty(), DimSet::with))
}

/// Post-choice explanation for meta-learning trials; names the episode's
/// relevant dimension and never mentions position.
pub fn reward_explanation_meta(
    objects: &[ObjectSpec],
    chosen: usize,
    relevant_dim: FeatureDim,
    correct: bool,
) -> String {
    meta_text(relevant_dim, &values_of(&objects[chosen]), correct)
}

/// How reward explanations are phrased for an episode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewardStyle {
    Basic {
        relevant: DimSet,
        single_dim: Option<FeatureDim>,
    },
    Meta {
        relevant: FeatureDim,
    },
}

/// Template selection for one episode, derived from its config and layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Explainer {
    pub property_style: PropertyStyle,
    pub reward_style: RewardStyle,
    pub property_on: bool,
    pub reward_on: bool,
}

impl Explainer {
    pub fn new(mode: &ExplanationMode, episode: &Episode) -> Self {
        let is_meta = matches!(episode.task_kind(), TaskKind::Meta(_));
        let property_style = match (mode.single_dim, is_meta) {
            (Some(d), _) => PropertyStyle::Single(d),
            (None, true) => PropertyStyle::NoPosition,
            (None, false) => PropertyStyle::Full,
        };
        let reward_style = match episode {
            Episode::Meta(meta) => RewardStyle::Meta {
                relevant: meta.relevant_dim,
            },
            Episode::Single(spec) => {
                let relevant = match spec.relevance {
                    Relevance::Single(d) | Relevance::Property(d) => DimSet::of(&[d]),
                    Relevance::PerDimension { eval_dim, .. } => DimSet::of(&[eval_dim]),
                    Relevance::AllAttributes => DimSet::ATTRIBUTES,
                };
                RewardStyle::Basic {
                    relevant,
                    single_dim: mode.single_dim,
                }
            }
        };
        Self {
            property_style,
            reward_style,
            property_on: mode.property_on,
            reward_on: mode.reward_on,
        }
    }

    pub fn property(&self, objects: &[ObjectSpec], index: usize) -> ExplanationEvent {
        let text = property_explanation(&objects[index], self.property_style);
        ExplanationEvent::new(ExplanationKind::Property, text, Some(index))
    }

    pub fn reward(
        &self,
        objects: &[ObjectSpec],
        chosen: usize,
        correct: bool,
    ) -> Option<ExplanationEvent> {
        let text = match self.reward_style {
            RewardStyle::Basic {
                relevant,
                single_dim,
            } => reward_explanation_basic(objects, chosen, relevant, correct, single_dim)?,
            RewardStyle::Meta { relevant } => {
                reward_explanation_meta(objects, chosen, relevant, correct)
            }
        };
        Some(ExplanationEvent::new(
            ExplanationKind::Reward,
            text,
            Some(chosen),
        ))
    }

    /// Every explanation an agent could receive in this room: each object's
    /// property description and the reward explanation for choosing it.
    pub fn possible_set(
        &self,
        objects: &[ObjectSpec],
        is_correct: impl Fn(usize) -> bool,
    ) -> Vec<ExplanationEvent> {
        let mut out = Vec::with_capacity(objects.len() * 2);
        if self.property_on {
            out.extend((0..objects.len()).map(|i| self.property(objects, i)));
        }
        if self.reward_on {
            out.extend((0..objects.len()).filter_map(|i| self.reward(objects, i, is_correct(i))));
        }
        out
    }

    fn random_values<R: rand::Rng>(rng: &mut R) -> Values {
        let catalog = canonical_catalog();
        [
            rng.gen_range(0..catalog.colors.len()) as u8,
            rng.gen_range(0..catalog.shapes.len()) as u8,
            rng.gen_range(0..catalog.textures.len()) as u8,
            rng.gen_range(0..catalog.position_types.len()) as u8,
        ]
    }
}
