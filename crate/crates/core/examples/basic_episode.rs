//! Walk an omniscient policy through one basic episode and print every
//! explanation target it triggers.

use oddity::policy::Omniscient;
use oddity::{EpisodeConfig, Policy, PolicyContext, TaskKind, WorldState};

fn main() -> oddity::Result<()> {
    let config = EpisodeConfig::new(TaskKind::Basic, 42);
    let (mut state, mut last) = WorldState::reset(&config)?;
    println!("relevant dimension: {:?}", state.episode().relevant_dim());
    for (i, o) in state.objects().iter().enumerate() {
        println!(
            "object {i} at {}: {} {} {}",
            o.tile,
            o.name(oddity::FeatureDim::Color),
            o.name(oddity::FeatureDim::Texture),
            o.name(oddity::FeatureDim::Shape)
        );
    }

    let mut policy = Omniscient;
    policy.begin_episode(config.seed);
    while !state.is_done() {
        let action = policy.act(&PolicyContext::new(&state, &last));
        last = state.step(action)?;
        let text = last.explanation.as_ref().map_or("", |e| e.text.as_str());
        println!(
            "{:>3} {:<8} reward={} {:?} {}",
            state.steps_elapsed(),
            action.to_string(),
            last.reward,
            last.events,
            text
        );
    }
    Ok(())
}
