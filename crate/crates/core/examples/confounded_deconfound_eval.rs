//! Confounded rooms share one odd object across color, shape and texture.
//! Deconfounded rooms split them apart, which reveals which dimension a
//! policy actually follows.

use oddity::harness::{eval_deconfound, ChoiceCategory};
use oddity::policy::{by_name, Omniscient};
use oddity::{generate, oddity, run, Episode, EpisodeConfig, FeatureDim, TaskKind};

fn main() -> oddity::Result<()> {
    let Episode::Single(spec) = generate(&EpisodeConfig::new(TaskKind::Confounded, 5))? else {
        unreachable!()
    };
    for dim in FeatureDim::ALL {
        println!(
            "confounded oddity along {dim}: {:?}",
            oddity(&spec.objects, dim)
        );
    }

    let stats = run(
        &EpisodeConfig::new(TaskKind::Confounded, 0),
        &mut Omniscient,
        500,
        0,
    )?;
    println!(
        "omniscient on confounded rooms: {:.3}",
        stats.success_rate()
    );

    for name in ["biased:color", "biased:shape", "biased:texture", "uniform"] {
        let report = eval_deconfound(by_name(name)?.as_mut(), 2000, 0)?;
        let row: Vec<String> = ChoiceCategory::ALL
            .iter()
            .map(|&c| format!("{}={:.3}", c.name(), report.fraction(c)))
            .collect();
        println!("{name:<16} {}", row.join(" "));
    }
    Ok(())
}
