//! Acceptance suite. Each test prints one `A<n> PASS|FAIL` line with the
//! measured quantities, then asserts.

use std::io::Write;
use std::time::Instant;

use oddity::catalog::feature_id;
use oddity::explain::{
    property_explanation, reward_explanation_basic, reward_explanation_meta, tokenize, vocabulary,
    Explainer, PropertyStyle, Template, CAPACITY,
};
use oddity::harness::{
    bench, eval_deconfound, run_episode, run_parallel, run_with, ChoiceCategory,
};
use oddity::policy::{by_name, DimensionBiased, MetaExperimenter, Omniscient, UniformChoice};
use oddity::{
    choice_reward, generate, oddity, run, transform_semantics, verify_structure, Ablation, Action,
    DimPattern, DimSet, Episode, EpisodeConfig, Event, ExplanationKind, ExplanationMode,
    FeatureDim, MetaDifficulty, ObjectSpec, Relevance, StepOutcome, TaskKind, TilePos, Trajectory,
    WorldState,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn line(id: &str, pass: bool, detail: impl AsRef<str>) {
    // bypass the harness capture so the verdict shows in a plain `cargo test` run
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{id} {verdict} {}", detail.as_ref());
}

fn random_action(rng: &mut ChaCha8Rng, config: &EpisodeConfig) -> Action {
    Action::from_index(rng.gen_range(0..config.num_actions()) as u8).unwrap()
}

#[test]
fn a1_structure_suite() {
    let start = Instant::now();
    let mut violations = 0;
    for seed in 0..10_000 {
        let Episode::Single(spec) = generate(&EpisodeConfig::new(TaskKind::Basic, seed)).unwrap()
        else {
            panic!("basic episode expected");
        };
        let Relevance::Single(relevant) = spec.relevance else {
            panic!("single relevant dimension expected")
        };
        let report = verify_structure(&spec.objects);
        let ok = report.unique_pairs.len() == 1
            && report.unique_pairs[0].1 == relevant
            && FeatureDim::ALL.iter().all(|&d| {
                report.pattern(d)
                    == if d == relevant {
                        DimPattern::Unique1v3
                    } else {
                        DimPattern::Paired2v2
                    }
            });
        violations += !ok as usize;
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = violations == 0 && secs < 10.0;
    line(
        "A1",
        pass,
        format!("10000 basic episodes, {violations} violations, {secs:.2}s"),
    );
    assert!(pass);
}

#[test]
fn a2_confounding() {
    let mut confounded_bad = 0;
    for seed in 0..10_000 {
        let Episode::Single(spec) =
            generate(&EpisodeConfig::new(TaskKind::Confounded, seed)).unwrap()
        else {
            panic!()
        };
        let target = spec.target_index;
        let ok = target.is_some()
            && FeatureDim::ATTRIBUTES
                .iter()
                .all(|&d| oddity(&spec.objects, d) == target)
            && oddity(&spec.objects, FeatureDim::Position).is_none();
        confounded_bad += !ok as usize;
    }
    let mut deconfounded_bad = 0;
    for seed in 0..10_000 {
        let Episode::Single(spec) =
            generate(&EpisodeConfig::new(TaskKind::Deconfounded, seed)).unwrap()
        else {
            panic!()
        };
        let Relevance::PerDimension { layout, .. } = spec.relevance else {
            panic!()
        };
        let report = verify_structure(&spec.objects);
        let uniques: Vec<usize> = FeatureDim::ATTRIBUTES
            .iter()
            .filter_map(|&d| oddity(&spec.objects, d))
            .collect();
        let mut all = uniques.clone();
        all.push(layout.distractor);
        all.sort_unstable();
        all.dedup();
        let ok = uniques.len() == 3
            && all.len() == 4
            && report.is_unique[layout.distractor] == [false; 4];
        deconfounded_bad += !ok as usize;
    }
    let pass = confounded_bad == 0 && deconfounded_bad == 0;
    line(
        "A2",
        pass,
        format!("confounded violations {confounded_bad}/10000, deconfounded violations {deconfounded_bad}/10000"),
    );
    assert!(pass);
}

#[test]
fn a3_meta_structure() {
    let difficulties = [
        MetaDifficulty::Easy,
        MetaDifficulty::Hard,
        MetaDifficulty::Mixed,
    ];
    let mut pre_unique = 0;
    let mut transform_bad = 0;
    let mut wand_bad = 0;
    let mut transforms_seen = 0;
    let mut dyn_rng = ChaCha8Rng::seed_from_u64(0);
    for n in 0..5_000u64 {
        let config = EpisodeConfig::new(TaskKind::Meta(difficulties[n as usize % 3]), n);
        let Episode::Meta(meta) = generate(&config).unwrap() else {
            panic!()
        };
        for trial in meta.trials.iter().filter(|t| !t.is_final) {
            pre_unique +=
                verify_structure(&trial.objects).unique_count_among(&FeatureDim::ATTRIBUTES);
            for dim in FeatureDim::ATTRIBUTES {
                for target in 0..4 {
                    let before = trial.objects;
                    // all-equal rooms make the target unique; paired rooms make its former partner unique
                    let expected = (0..4)
                        .find(|&j| j != target && before[j].value(dim) == before[target].value(dim))
                        .filter(|_| verify_structure(&before).pattern(dim) == DimPattern::Paired2v2)
                        .unwrap_or(target);
                    let mut objects = before;
                    let changed = transform_semantics(&mut objects, target, dim, &mut dyn_rng);
                    let ok = changed
                        && verify_structure(&objects)
                            .unique_pairs
                            .iter()
                            .filter(|(_, d)| *d == dim)
                            .count()
                            == 1
                        && oddity(&objects, dim) == Some(expected);
                    transform_bad += !ok as usize;
                }
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(n);
        let (mut state, _) = WorldState::reset_headless(&config).unwrap();
        let mut per_trial = [0usize; 4];
        while !state.is_done() {
            let trial = state.trial_index() as usize;
            for e in state.step(random_action(&mut rng, &config)).unwrap().events {
                if matches!(e, Event::Transformed { .. }) {
                    per_trial[trial] += 1;
                }
            }
        }
        transforms_seen += per_trial.iter().sum::<usize>();
        wand_bad += per_trial[..3].iter().any(|&c| c > 1) as usize + (per_trial[3] != 0) as usize;
    }
    let pass = pre_unique == 0 && transform_bad == 0 && wand_bad == 0 && transforms_seen > 0;
    line(
        "A3",
        pass,
        format!(
            "5000 meta episodes: {pre_unique} pre-transform uniques, {transform_bad} bad transforms, \
             {wand_bad} wand violations over {transforms_seen} wand uses"
        ),
    );
    assert!(pass);
}

#[test]
fn a4_oracle_bracketing() {
    let mut rates = Vec::new();
    for kind in [TaskKind::Basic, TaskKind::Confounded, TaskKind::Curriculum] {
        rates.push((
            kind,
            run(&EpisodeConfig::new(kind, 0), &mut Omniscient, 1000, 0)
                .unwrap()
                .success_rate(),
        ));
    }
    let uniform = run(
        &EpisodeConfig::new(TaskKind::Basic, 0),
        &mut UniformChoice::default(),
        10_000,
        0,
    )
    .unwrap()
    .success_rate();
    let pass = rates.iter().all(|&(_, r)| r == 1.0) && (uniform - 0.25).abs() <= 0.015;
    let detail: Vec<String> = rates
        .iter()
        .map(|(k, r)| format!("omniscient {k} {r:.4}"))
        .collect();
    line(
        "A4",
        pass,
        format!("{}, uniform basic {uniform:.4}", detail.join(", ")),
    );
    assert!(pass);
}

#[test]
fn a5_deconfound_evaluation() {
    let mut details = Vec::new();
    let mut pass = true;
    for (dim, category) in [
        (FeatureDim::Color, ChoiceCategory::Color),
        (FeatureDim::Shape, ChoiceCategory::Shape),
        (FeatureDim::Texture, ChoiceCategory::Texture),
    ] {
        let report = eval_deconfound(&mut DimensionBiased::new(dim), 1000, 0).unwrap();
        pass &= report.fraction(category) == 1.0;
        details.push(format!("biased:{dim} {:.3}", report.fraction(category)));
    }
    let report = eval_deconfound(&mut UniformChoice::default(), 10_000, 0).unwrap();
    for c in [
        ChoiceCategory::Color,
        ChoiceCategory::Shape,
        ChoiceCategory::Texture,
        ChoiceCategory::Distractor,
    ] {
        pass &= (report.fraction(c) - 0.25).abs() <= 0.02;
        details.push(format!("uniform {} {:.4}", c.name(), report.fraction(c)));
    }
    let sum: f64 = ChoiceCategory::ALL
        .iter()
        .map(|&c| report.fraction(c))
        .sum();
    pass &= (sum - 1.0).abs() < 1e-9;
    line("A5", pass, details.join(", "));
    assert!(pass);
}

#[test]
fn a6_meta_experimenter() {
    let mut sweep_bad = 0;
    let mut final_fail = 0;
    let mut reading_bad = 0;
    for difficulty in [MetaDifficulty::Easy, MetaDifficulty::Hard] {
        let config = EpisodeConfig::new(TaskKind::Meta(difficulty), 0);
        run_with(
            &config,
            &mut MetaExperimenter::reward_only(),
            500,
            0,
            false,
            |record| {
                sweep_bad += (record.summary.episode_return != 11.0) as usize;
                final_fail += (record.summary.trial_success[3] != Some(true)) as usize;
                Ok(())
            },
        )
        .unwrap();
        for seed in 0..500 {
            let mut reader = MetaExperimenter::reading_explanations();
            let record = run_episode(&config.with_seed(seed), &mut reader, false).unwrap();
            // the first reward explanation arrives in trial 0; every later choice must be correct
            let ok = reader.inferred_dimension() == record.episode.relevant_dim()
                && reader.inferred_at_trial() == Some(0)
                && record.summary.trial_success[1..]
                    .iter()
                    .all(|&s| s == Some(true));
            reading_bad += !ok as usize;
        }
    }
    let pass = sweep_bad == 0 && final_fail == 0 && reading_bad == 0;
    line(
        "A6",
        pass,
        format!(
            "sweep: {final_fail}/1000 final-trial failures, {sweep_bad}/1000 returns != 11; \
             reading variant: {reading_bad}/1000 episodes not solved after the first explanation"
        ),
    );
    assert!(pass);
}

fn named(color: &str, texture: &str, shape: &str, pos: &str) -> ObjectSpec {
    ObjectSpec {
        color: feature_id(FeatureDim::Color, color).unwrap(),
        shape: feature_id(FeatureDim::Shape, shape).unwrap(),
        texture: feature_id(FeatureDim::Texture, texture).unwrap(),
        pos_type: feature_id(FeatureDim::Position, pos).unwrap(),
        tile: TilePos::new(1, 1),
        alive: true,
    }
}

fn matches_grammar(text: &str) -> bool {
    ["this is a ", "correct because ", "incorrect because "]
        .iter()
        .any(|p| text.starts_with(p))
        && text == text.to_lowercase()
        && !text.chars().any(|c| c.is_ascii_punctuation() && c != '-')
}

#[test]
fn a7_template_fidelity() {
    let texture = DimSet::of(&[FeatureDim::Texture]);
    let shared = [
        named("red", "horizontal-striped", "triangle", "in-the-corner"),
        named("red", "solid", "square", "in-the-corner"),
        named("blue", "horizontal-striped", "triangle", "in-the-center"),
        named("blue", "checkered", "square", "in-the-center"),
    ];
    let striped = [
        named("red", "horizontal-striped", "triangle", "in-the-corner"),
        named("red", "solid", "square", "in-the-corner"),
        named("blue", "solid", "triangle", "in-the-center"),
        named("blue", "solid", "square", "in-the-center"),
    ];
    let squares = [
        named("red", "solid", "square", "in-the-corner"),
        named("red", "solid", "square", "in-the-corner"),
        named("blue", "solid", "square", "in-the-corner"),
        named("blue", "solid", "square", "in-the-corner"),
    ];
    let fixtures = [
        (
            property_explanation(&shared[0], PropertyStyle::Full),
            "this is a red horizontal-striped triangle in-the-corner",
        ),
        (
            reward_explanation_basic(&striped, 0, texture, true, None).unwrap_or_default(),
            "correct because it is uniquely horizontal-striped",
        ),
        (
            reward_explanation_basic(&shared, 0, texture, false, None).unwrap_or_default(),
            "incorrect because other objects are red horizontal-striped triangles or in-the-corner",
        ),
        (
            reward_explanation_meta(&squares, 0, FeatureDim::Shape, false),
            "incorrect because the dimension is shape and other objects are squares",
        ),
    ];
    let mismatches = fixtures.iter().filter(|(got, want)| got != want).count();

    // every target the engine emits stays inside the vocabulary and grammar
    let mut emitted = 0;
    let mut off_grammar = 0;
    let kinds = [
        TaskKind::Basic,
        TaskKind::Confounded,
        TaskKind::Deconfounded,
        TaskKind::Curriculum,
        TaskKind::Meta(MetaDifficulty::Mixed),
    ];
    for (k, kind) in kinds.into_iter().enumerate() {
        for seed in 0..400 {
            let config = EpisodeConfig::new(kind, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 1000 * k as u64);
            let (mut state, _) = WorldState::reset_headless(&config).unwrap();
            while !state.is_done() {
                if let Some(e) = state
                    .step(random_action(&mut rng, &config))
                    .unwrap()
                    .explanation
                {
                    emitted += 1;
                    let known = vocabulary().detokenize(&e.tokens) == e.text
                        && e.tokens == tokenize(&e.text);
                    off_grammar += !(known && matches_grammar(&e.text)) as usize;
                }
            }
        }
    }
    let vocab = vocabulary().len();
    let pass = mismatches == 0 && vocab <= CAPACITY && off_grammar == 0 && emitted > 0;
    line(
        "A7",
        pass,
        format!("{mismatches}/4 fixture mismatches, vocabulary {vocab} tokens, {off_grammar}/{emitted} emitted targets off-grammar"),
    );
    assert!(pass);
}

#[test]
fn a8_ablation_cadence() {
    const STEPS: usize = 1_000_000;
    let run_mode = |ablation: Ablation| {
        let mode = ExplanationMode {
            ablation,
            ..ExplanationMode::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut seed = 0;
        let mut emitted = Vec::new();
        let mut outside = 0;
        let fresh = |seed: u64| {
            let config = EpisodeConfig::new(TaskKind::Basic, seed).with_explanations(mode);
            let (state, _) = WorldState::reset_headless(&config).unwrap();
            let objects = *state.objects();
            let ctx = state.reward_context();
            let possible: Vec<String> = Explainer::new(&mode, state.episode())
                .possible_set(&objects, |i| choice_reward(ctx, &objects, i) > 0.0)
                .into_iter()
                .map(|e| e.text)
                .collect();
            (state, config, possible)
        };
        let (mut state, mut config, mut possible) = fresh(seed);
        for _ in 0..STEPS {
            if state.is_done() {
                seed += 1;
                (state, config, possible) = fresh(seed);
            }
            if let Some(e) = state
                .step(random_action(&mut rng, &config))
                .unwrap()
                .explanation
            {
                outside += !possible.contains(&e.text) as usize;
                emitted.push(e);
            }
        }
        (emitted, outside)
    };

    let (behavior, outside) = run_mode(Ablation::BehaviorIrrelevant);
    let behavior_rate = behavior.len() as f64 / STEPS as f64;
    let (context, _) = run_mode(Ablation::ContextIrrelevant);
    let property = context
        .iter()
        .filter(|e| e.kind == ExplanationKind::Irrelevant(Template::Property))
        .count();
    let property_share = property as f64 / context.len() as f64;
    let pass = (behavior_rate - 0.10).abs() <= 0.005
        && outside == 0
        && (property_share - 0.5).abs() <= 0.01;
    line(
        "A8",
        pass,
        format!(
            "behavior-irrelevant rate {behavior_rate:.4} ({outside} outside the possible set), \
             context-irrelevant property share {property_share:.4} of {}",
            context.len()
        ),
    );
    assert!(pass);
}

/// A seeded (config, action sequence) pair.
fn triple(i: u64) -> (EpisodeConfig, Vec<Action>) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA9 + i);
    let kinds = [
        TaskKind::Basic,
        TaskKind::Confounded,
        TaskKind::Deconfounded,
        TaskKind::Curriculum,
        TaskKind::Meta(MetaDifficulty::Easy),
        TaskKind::Meta(MetaDifficulty::Hard),
        TaskKind::Meta(MetaDifficulty::Mixed),
    ];
    let ablations = [
        Ablation::None,
        Ablation::BehaviorIrrelevant,
        Ablation::ContextIrrelevant,
    ];
    let mode = ExplanationMode {
        property_on: rng.gen_bool(0.8),
        reward_on: rng.gen_bool(0.8),
        single_dim: None,
        ablation: ablations[rng.gen_range(0..3)],
        as_input: rng.gen_bool(0.5),
    };
    let config =
        EpisodeConfig::new(kinds[rng.gen_range(0..kinds.len())], rng.gen()).with_explanations(mode);
    let len = rng.gen_range(1..600);
    let actions = (0..len).map(|_| random_action(&mut rng, &config)).collect();
    (config, actions)
}

fn outcomes(config: &EpisodeConfig, actions: &[Action]) -> Vec<StepOutcome> {
    let (mut state, first) = WorldState::reset(config).unwrap();
    let mut out = vec![first];
    for &a in actions {
        if state.is_done() {
            break;
        }
        out.push(state.step(a).unwrap());
    }
    out
}

#[test]
fn a9_determinism_and_replay() {
    let triples: Vec<_> = (0..100).map(triple).collect();
    let reference: Vec<Vec<StepOutcome>> = triples.iter().map(|(c, a)| outcomes(c, a)).collect();
    let mut diverged = 0;
    for threads in [1usize, 2, 4] {
        let chunk = triples.len().div_ceil(threads);
        let again: Vec<Vec<StepOutcome>> = std::thread::scope(|s| {
            let handles: Vec<_> = triples
                .chunks(chunk)
                .map(|part| {
                    s.spawn(move || part.iter().map(|(c, a)| outcomes(c, a)).collect::<Vec<_>>())
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().unwrap())
                .collect()
        });
        diverged += reference.iter().zip(&again).filter(|(a, b)| a != b).count();
    }

    let mut replay_bad = 0;
    for (config, actions) in &triples {
        let traj = Trajectory::record(config, actions.iter().copied()).unwrap();
        let mut buf = Vec::new();
        oddity::write_trajectory(&traj, &mut buf).unwrap();
        let back = oddity::read_trajectories(buf.as_slice()).unwrap();
        let ok = back.len() == 1 && back[0] == traj && back[0].replay().is_ok();
        replay_bad += !ok as usize;
    }

    let config = EpisodeConfig::new(TaskKind::Basic, 0);
    let make = || by_name("uniform").unwrap();
    let one = run_parallel(&config, make, 400, 0, 1).unwrap();
    let four = run_parallel(&config, make, 400, 0, 4).unwrap();

    let pass = diverged == 0 && replay_bad == 0 && one == four;
    line(
        "A9",
        pass,
        format!(
            "100 triples: {diverged} divergent outcome streams across runs and 1/2/4 threads, \
             {replay_bad} replay failures, runner stats equal across threads: {}",
            one == four
        ),
    );
    assert!(pass);
}

#[test]
fn a10_throughput() {
    let config = EpisodeConfig::new(TaskKind::Basic, 0);
    let probe =
        Trajectory::record(&config.with_seed(77), (0..200).map(|i| Action::ALL[i % 9])).unwrap();

    let single = bench(&config, 2_000_000, 1, false).unwrap();
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let threads = cores.min(8);
    let multi = bench(&config, 2_000_000 * threads as u64, threads, false).unwrap();
    let speedup = multi.steps_per_sec / single.steps_per_sec;
    let rendered = bench(&config, 50_000, 1, true).unwrap();

    let after =
        Trajectory::record(&config.with_seed(77), (0..200).map(|i| Action::ALL[i % 9])).unwrap();
    let untouched = probe == after;
    let fast = single.steps_per_sec >= 50_000.0;
    let scales_here = speedup >= threads as f64 * 0.7;
    let eight_measured = threads == 8;
    let pass = fast && untouched && scales_here && eight_measured;
    line(
        "A10",
        pass,
        format!(
            "headless {:.0} steps/s single-thread, {threads}-thread speedup {speedup:.2}x on {cores} core(s), \
             render {:.0} steps/s, observables untouched: {untouched}{}",
            single.steps_per_sec,
            rendered.steps_per_sec,
            if eight_measured { "" } else { "; 8-thread scaling not measurable on this machine" }
        ),
    );
    // scaling to 8 threads is checked by `eight_thread_scaling` on 8-core hardware
    assert!(fast && untouched && scales_here);
}

#[test]
#[ignore = "needs at least 8 cores"]
fn eight_thread_scaling() {
    let config = EpisodeConfig::new(TaskKind::Basic, 0);
    let single = bench(&config, 4_000_000, 1, false).unwrap();
    let eight = bench(&config, 32_000_000, 8, false).unwrap();
    let speedup = eight.steps_per_sec / single.steps_per_sec;
    println!("8-thread speedup {speedup:.2}x");
    assert!((5.6..=10.4).contains(&speedup), "{speedup}");
}
