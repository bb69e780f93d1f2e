//! Meta episodes: three experiment rooms where the wand can create an odd
//! object, then a test room. Compares the reward-only probe sweep with the
//! variant that reads reward explanations.

use oddity::harness::run_episode;
use oddity::policy::MetaExperimenter;
use oddity::{run, EpisodeConfig, MetaDifficulty, TaskKind};

fn main() -> oddity::Result<()> {
    for difficulty in [MetaDifficulty::Easy, MetaDifficulty::Hard] {
        let config = EpisodeConfig::new(TaskKind::Meta(difficulty), 0);
        for mut policy in [
            MetaExperimenter::reward_only(),
            MetaExperimenter::reading_explanations(),
        ] {
            let stats = run(&config, &mut policy, 500, 0)?;
            let final_trial = stats.per_trial.last().map_or(0.0, |r| r.rate());
            println!(
                "{difficulty:?} {:<26} final-trial success {:.3} mean return {:.3} transforms {:?}",
                oddity::Policy::name(&policy),
                final_trial,
                stats.mean_return(),
                stats.transform_usage
            );
        }
    }

    let mut reader = MetaExperimenter::reading_explanations();
    let record = run_episode(
        &EpisodeConfig::new(TaskKind::Meta(MetaDifficulty::Hard), 7),
        &mut reader,
        false,
    )?;
    println!(
        "relevant: {:?}; inferred {:?} during trial {:?}",
        record.episode.relevant_dim(),
        reader.inferred_dimension(),
        reader.inferred_at_trial()
    );
    for step in record
        .trajectory
        .steps
        .iter()
        .filter(|s| s.explanation.is_some())
        .take(3)
    {
        println!(
            "  t={} {}",
            step.t,
            step.explanation.as_deref().unwrap_or_default()
        );
    }
    Ok(())
}
