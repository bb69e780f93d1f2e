//! Headless and rendering throughput across thread counts.

use oddity::harness::bench;
use oddity::{EpisodeConfig, MetaDifficulty, TaskKind};

fn main() -> oddity::Result<()> {
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    for kind in [TaskKind::Basic, TaskKind::Meta(MetaDifficulty::Mixed)] {
        let config = EpisodeConfig::new(kind, 0);
        for threads in [1, 2, 4, 8].into_iter().filter(|&t| t == 1 || t <= cores) {
            let r = bench(&config, 1_000_000, threads, false)?;
            println!(
                "{kind:<12} headless threads={threads} {:>10.0} steps/s checksum={:016x}",
                r.steps_per_sec, r.checksum
            );
        }
        let r = bench(&config, 50_000, 1, true)?;
        println!(
            "{kind:<12} render   threads=1 {:>10.0} steps/s",
            r.steps_per_sec
        );
    }
    Ok(())
}
