//! Policy rollouts over seeded episode batches.

use serde::{Deserialize, Serialize};

use super::stats::{EpisodeSummary, RunStats};
use super::trajectory::{StepRecord, Trajectory};
use crate::config::{EpisodeConfig, TaskKind};
use crate::engine::{Event, WorldState};
use crate::error::{Error, Result};
use crate::policy::{Policy, PolicyContext};
use crate::render::PixelBuffer;
use crate::taskgen::{Episode, Relevance};

/// One finished episode as handed to a sink.
#[derive(Clone, Debug)]
pub struct EpisodeRecord {
    pub index: usize,
    pub trajectory: Trajectory,
    pub summary: EpisodeSummary,
    /// One frame per step, only when rendering was requested.
    pub frames: Vec<PixelBuffer>,
    pub episode: Episode,
}

/// Roll out one episode with `policy`.
pub fn run_episode(
    config: &EpisodeConfig,
    policy: &mut dyn Policy,
    render: bool,
) -> Result<EpisodeRecord> {
    let (mut state, mut last) = WorldState::reset_with(config, render)?;
    policy.begin_episode(config.seed);
    let mut trajectory = Trajectory::new(*config, Some(policy.name()));
    let mut frames = Vec::new();
    while !state.is_done() {
        let action = policy.act(&PolicyContext::new(&state, &last));
        last = state.step(action)?;
        trajectory.steps.push(StepRecord::new(
            trajectory.steps.len() as u32 + 1,
            action,
            &last,
            state.agent(),
        ));
        if let Some(pixels) = last.observation.pixels.take() {
            frames.push(pixels);
        }
    }
    let episode = state.episode().clone();
    let summary = EpisodeSummary::new(
        &episode,
        trajectory
            .steps
            .iter()
            .map(|s| (s.reward, s.events.as_slice())),
    );
    Ok(EpisodeRecord {
        index: 0,
        trajectory,
        summary,
        frames,
        episode,
    })
}

/// Run `n` episodes with seeds `base_seed..base_seed + n`.
pub fn run(
    config: &EpisodeConfig,
    policy: &mut dyn Policy,
    n: usize,
    base_seed: u64,
) -> Result<RunStats> {
    run_with(config, policy, n, base_seed, false, |_| Ok(()))
}

/// [`run`] with every finished episode passed to `sink`.
pub fn run_with(
    config: &EpisodeConfig,
    policy: &mut dyn Policy,
    n: usize,
    base_seed: u64,
    render: bool,
    mut sink: impl FnMut(&EpisodeRecord) -> Result<()>,
) -> Result<RunStats> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "episode count must be at least 1".into(),
        ));
    }
    config.validate()?;
    let mut stats = RunStats::default();
    for index in 0..n {
        let seed = base_seed.wrapping_add(index as u64);
        let wrap = |source| Error::Episode {
            episode: index,
            seed,
            source: Box::new(source),
        };
        let mut record = run_episode(&config.with_seed(seed), policy, render).map_err(wrap)?;
        record.index = index;
        stats.add(&record.summary);
        sink(&record).map_err(wrap)?;
    }
    Ok(stats)
}

/// [`run`] split over `threads` workers, each with its own policy.
/// Results are identical to the single-threaded run.
pub fn run_parallel<F>(
    config: &EpisodeConfig,
    make_policy: F,
    n: usize,
    base_seed: u64,
    threads: usize,
) -> Result<RunStats>
where
    F: Fn() -> Box<dyn Policy> + Sync,
{
    if n == 0 || threads == 0 {
        return Err(Error::InvalidArgument(
            "episode and thread counts must be at least 1".into(),
        ));
    }
    let threads = threads.min(n);
    let chunk = n.div_ceil(threads);
    let parts: Vec<Result<RunStats>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                let make_policy = &make_policy;
                scope.spawn(move || {
                    let start = w * chunk;
                    let count = chunk.min(n.saturating_sub(start));
                    if count == 0 {
                        return Ok(RunStats::default());
                    }
                    let mut policy = make_policy();
                    run(
                        config,
                        policy.as_mut(),
                        count,
                        base_seed.wrapping_add(start as u64),
                    )
                    .map_err(|e| match e {
                        Error::Episode {
                            episode,
                            seed,
                            source,
                        } => Error::Episode {
                            episode: episode + start,
                            seed,
                            source,
                        },
                        other => other,
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("runner thread panicked"))
            .collect()
    });
    let mut stats = RunStats::default();
    for part in parts {
        stats.merge(&part?);
    }
    Ok(stats)
}

/// Which kind of object a deconfounded choice landed on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChoiceCategory {
    Color,
    Shape,
    Texture,
    Distractor,
    None,
}

impl ChoiceCategory {
    pub const ALL: [ChoiceCategory; 5] = [
        Self::Color,
        Self::Shape,
        Self::Texture,
        Self::Distractor,
        Self::None,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Color => "color",
            Self::Shape => "shape",
            Self::Texture => "texture",
            Self::Distractor => "distractor",
            Self::None => "none",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DeconfoundReport {
    /// Counts indexed like [`ChoiceCategory::ALL`].
    pub counts: [usize; 5],
}

impl DeconfoundReport {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn count(&self, category: ChoiceCategory) -> usize {
        self.counts[category as usize]
    }

    pub fn fraction(&self, category: ChoiceCategory) -> f64 {
        match self.total() {
            0 => 0.0,
            total => self.count(category) as f64 / total as f64,
        }
    }

    pub fn to_table(&self) -> String {
        let mut out = String::from("category\tcount\tfraction\n");
        for c in ChoiceCategory::ALL {
            out.push_str(&format!(
                "{}\t{}\t{:.6}\n",
                c.name(),
                self.count(c),
                self.fraction(c)
            ));
        }
        out
    }
}

/// Classify the first choice of a deconfounded episode.
pub fn classify_choice(episode: &Episode, events: &[Event]) -> Result<ChoiceCategory> {
    let Episode::Single(spec) = episode else {
        return Err(Error::InvalidArgument(
            "classification needs a deconfounded episode".into(),
        ));
    };
    let Relevance::PerDimension { layout, .. } = spec.relevance else {
        return Err(Error::InvalidArgument(
            "classification needs a deconfounded episode".into(),
        ));
    };
    let chosen = events.iter().find_map(|e| match e {
        Event::Chose { object, .. } => Some(*object),
        _ => None,
    });
    Ok(match chosen {
        None => ChoiceCategory::None,
        Some(i) if i == layout.color => ChoiceCategory::Color,
        Some(i) if i == layout.shape => ChoiceCategory::Shape,
        Some(i) if i == layout.texture => ChoiceCategory::Texture,
        Some(_) => ChoiceCategory::Distractor,
    })
}

/// Run deconfounded episodes and tally which unique object each choice took.
pub fn eval_deconfound(
    policy: &mut dyn Policy,
    n: usize,
    base_seed: u64,
) -> Result<DeconfoundReport> {
    let config = EpisodeConfig::new(TaskKind::Deconfounded, base_seed);
    let mut report = DeconfoundReport::default();
    let mut failure = None;
    run_with(&config, policy, n, base_seed, false, |record| {
        let events: Vec<Event> = record
            .trajectory
            .steps
            .iter()
            .flat_map(|s| s.events.iter().copied())
            .collect();
        match classify_choice(&record.episode, &events) {
            Ok(c) => report.counts[c as usize] += 1,
            Err(e) => failure = Some(e),
        }
        Ok(())
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::FeatureDim;
    use crate::policy::{DimensionBiased, Omniscient, UniformChoice};

    #[test]
    fn omniscient_wins_basic() {
        let stats = run(
            &EpisodeConfig::new(TaskKind::Basic, 0),
            &mut Omniscient,
            50,
            100,
        )
        .unwrap();
        assert_eq!(stats.episodes, 50);
        assert_eq!(stats.success_rate(), 1.0);
        assert_eq!(stats.mean_return(), 1.0);
    }

    #[test]
    fn parallel_matches_sequential() {
        let config = EpisodeConfig::new(TaskKind::Basic, 0);
        let seq = run(&config, &mut UniformChoice::default(), 37, 5).unwrap();
        for threads in [1, 2, 3, 8] {
            let par = run_parallel(
                &config,
                || Box::new(UniformChoice::default()),
                37,
                5,
                threads,
            )
            .unwrap();
            assert_eq!(par, seq, "threads={threads}");
        }
    }

    #[test]
    fn zero_episodes_is_rejected() {
        assert!(run(
            &EpisodeConfig::new(TaskKind::Basic, 0),
            &mut Omniscient,
            0,
            0
        )
        .is_err());
    }

    #[test]
    fn biased_policy_registers_its_dimension() {
        let report =
            eval_deconfound(&mut DimensionBiased::new(FeatureDim::Texture), 40, 0).unwrap();
        assert_eq!(report.count(ChoiceCategory::Texture), 40);
        let sum: f64 = ChoiceCategory::ALL
            .iter()
            .map(|&c| report.fraction(c))
            .sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }
}
