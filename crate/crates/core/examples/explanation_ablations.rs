//! Explanation modes: default targets, reward-only, and the two
//! irrelevant-explanation controls.

use oddity::{Ablation, Action, EpisodeConfig, ExplanationMode, TaskKind, WorldState};
use rand::{Rng, SeedableRng};

fn sample(mode: ExplanationMode, steps: usize) -> oddity::Result<(usize, Vec<String>)> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let mut emitted = 0;
    let mut texts = Vec::new();
    let mut seed = 0;
    let (mut state, _) = WorldState::reset_headless(
        &EpisodeConfig::new(TaskKind::Basic, seed).with_explanations(mode),
    )?;
    for _ in 0..steps {
        if state.is_done() {
            seed += 1;
            state = WorldState::reset_headless(
                &EpisodeConfig::new(TaskKind::Basic, seed).with_explanations(mode),
            )?
            .0;
        }
        let action =
            Action::from_index(rng.gen_range(0..Action::BASE_COUNT as u8)).expect("base action");
        if let Some(e) = state.step(action)?.explanation {
            emitted += 1;
            if texts.len() < 3 {
                texts.push(e.text);
            }
        }
    }
    Ok((emitted, texts))
}

fn main() -> oddity::Result<()> {
    let steps = 100_000;
    let modes = [
        ("default", ExplanationMode::default()),
        (
            "reward only",
            ExplanationMode {
                property_on: false,
                ..ExplanationMode::default()
            },
        ),
        (
            "behavior-irrelevant",
            ExplanationMode {
                ablation: Ablation::BehaviorIrrelevant,
                ..ExplanationMode::default()
            },
        ),
        (
            "context-irrelevant",
            ExplanationMode {
                ablation: Ablation::ContextIrrelevant,
                ..ExplanationMode::default()
            },
        ),
    ];
    for (name, mode) in modes {
        let (emitted, texts) = sample(mode, steps)?;
        println!(
            "{name:<20} {:.4} of steps carry a target",
            emitted as f64 / steps as f64
        );
        for t in texts {
            println!("    {t}");
        }
    }
    Ok(())
}
