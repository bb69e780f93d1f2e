//! Record episodes to line-delimited JSON, read them back and replay them
//! through the engine.

use oddity::harness::run_with;
use oddity::policy::UniformChoice;
use oddity::{read_trajectories, write_trajectory, EpisodeConfig, MetaDifficulty, TaskKind};

fn main() -> oddity::Result<()> {
    let config = EpisodeConfig::new(TaskKind::Meta(MetaDifficulty::Mixed), 0);
    let mut buf = Vec::new();
    let stats = run_with(
        &config,
        &mut UniformChoice::default(),
        5,
        100,
        false,
        |record| write_trajectory(&record.trajectory, &mut buf),
    )?;
    println!(
        "wrote {} episodes, {} bytes, mean length {:.1}",
        stats.episodes,
        buf.len(),
        stats.mean_length()
    );
    println!(
        "first line: {}",
        String::from_utf8_lossy(buf.split(|&b| b == b'\n').next().unwrap_or_default())
    );

    for traj in read_trajectories(buf.as_slice())? {
        traj.replay()?;
        println!(
            "seed {} replayed {} steps, return {}",
            traj.header.seed,
            traj.steps.len(),
            traj.total_reward()
        );
    }
    Ok(())
}
