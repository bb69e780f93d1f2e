//! Samplers for the explanation-relevance ablations.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{
    correct_text, incorrect_text, meta_text, property_text, Explainer, ExplanationEvent,
    ExplanationKind, PropertyStyle, RewardStyle, Template,
};
use crate::catalog::FeatureDim;
use crate::config::DimSet;

/// Fraction of steps on which an ablation explanation is emitted.
pub const BEHAVIOR_IRRELEVANT_RATE: f64 = 0.1;

/// With probability 0.1, one explanation drawn uniformly from the room's
/// possible set, independent of what the agent did.
pub fn sample_behavior_irrelevant<R: Rng>(
    rng: &mut R,
    possible: &[ExplanationEvent],
) -> Option<ExplanationEvent> {
    if !rng.gen_bool(BEHAVIOR_IRRELEVANT_RATE) {
        return None;
    }
    let picked = possible.choose(rng)?;
    let template = picked.template();
    Some(ExplanationEvent {
        kind: ExplanationKind::Irrelevant(template),
        ..picked.clone()
    })
}

/// A property or reward template (50/50 when both are enabled) filled with
/// uniformly random catalog values, ignoring the room.
pub fn sample_context_irrelevant<R: Rng>(rng: &mut R, explainer: &Explainer) -> ExplanationEvent {
    let property = match (explainer.property_on, explainer.reward_on) {
        (true, false) => true,
        (false, true) => false,
        _ => rng.gen_bool(0.5),
    };
    let values = Explainer::random_values(rng);
    let (template, text) = if property {
        (
            Template::Property,
            property_text(&values, explainer.property_style),
        )
    } else {
        let correct = rng.gen_bool(0.5);
        let text = match explainer.reward_style {
            RewardStyle::Meta { .. } => {
                let dim = *FeatureDim::ATTRIBUTES.choose(rng).expect("non-empty");
                meta_text(dim, &values, correct)
            }
            RewardStyle::Basic { single_dim, .. } => {
                let slots = match (single_dim, explainer.property_style) {
                    (Some(d), _) => DimSet::of(&[d]),
                    (None, PropertyStyle::NoPosition) => DimSet::ATTRIBUTES,
                    (None, _) => DimSet::ALL,
                };
                if correct {
                    let dims: Vec<FeatureDim> = slots.iter().collect();
                    let dim = *dims.choose(rng).expect("non-empty");
                    correct_text(&values, DimSet::of(&[dim]))
                } else {
                    incorrect_text(&values, slots).expect("non-empty slot set")
                }
            }
        };
        (Template::Reward, text)
    };
    ExplanationEvent::new(ExplanationKind::Irrelevant(template), text, None)
}
