//! Curriculum rooms name a feature value in the instruction; every object
//! differs along every dimension.

use oddity::policy::{Omniscient, UniformChoice};
use oddity::{generate, run, Episode, EpisodeConfig, TaskKind};

fn main() -> oddity::Result<()> {
    for seed in 0..3 {
        let Episode::Single(spec) = generate(&EpisodeConfig::new(TaskKind::Curriculum, seed))?
        else {
            unreachable!()
        };
        println!(
            "seed {seed}: \"{}\" -> object {:?}",
            spec.instruction, spec.target_index
        );
    }
    let config = EpisodeConfig::new(TaskKind::Curriculum, 0);
    println!(
        "omniscient {:.3}",
        run(&config, &mut Omniscient, 1000, 0)?.success_rate()
    );
    println!(
        "uniform    {:.3}",
        run(&config, &mut UniformChoice::default(), 1000, 0)?.success_rate()
    );

    let mut mixed = EpisodeConfig::new(TaskKind::Basic, 0);
    mixed.curriculum_mix = true;
    let stats = run(&mixed, &mut Omniscient, 1000, 0)?;
    println!(
        "basic with curriculum mix: per relevant {:?}",
        stats.per_relevant
    );
    Ok(())
}
