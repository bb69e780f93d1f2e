use oddity::harness::{read_trajectories, write_trajectory};
use oddity::{
    generate, oddity, verify_structure, Action, DimSet, Episode, EpisodeConfig, FeatureDim,
    MetaDifficulty, Phase, TaskKind, Trajectory, WorldState,
};
use proptest::prelude::*;

fn task_kind() -> impl Strategy<Value = TaskKind> {
    prop_oneof![
        Just(TaskKind::Basic),
        Just(TaskKind::Confounded),
        Just(TaskKind::Deconfounded),
        Just(TaskKind::Curriculum),
        Just(TaskKind::Meta(MetaDifficulty::Easy)),
        Just(TaskKind::Meta(MetaDifficulty::Hard)),
        Just(TaskKind::Meta(MetaDifficulty::Mixed)),
    ]
}

fn legal_actions(kind: TaskKind) -> impl Strategy<Value = Vec<Action>> {
    let n = if kind.is_meta() {
        Action::COUNT
    } else {
        Action::BASE_COUNT
    } as u8;
    prop::collection::vec((0..n).prop_map(|i| Action::from_index(i).unwrap()), 0..400)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_index_round_trips(i in 0u8..12) {
        let a = Action::from_index(i).unwrap();
        prop_assert_eq!(a.index(), i);
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Action>(&json).unwrap(), a);
    }

    #[test]
    fn basic_rooms_have_one_odd_object(seed in any::<u64>(), mask in 1u8..16) {
        let dims: Vec<FeatureDim> = FeatureDim::ALL.into_iter().filter(|d| mask & (1 << d.index()) != 0).collect();
        let config = EpisodeConfig::new(TaskKind::Basic, seed).with_allowed_dims(DimSet::of(&dims));
        let Episode::Single(spec) = generate(&config).unwrap() else { unreachable!() };
        let report = verify_structure(&spec.objects);
        prop_assert_eq!(report.unique_pairs.len(), 1);
        prop_assert!(dims.contains(&report.unique_pairs[0].1));
        for (i, a) in spec.objects.iter().enumerate() {
            prop_assert!(a.is_placed_consistently());
            prop_assert!(spec.objects[i + 1..].iter().all(|b| b.tile != a.tile));
        }
    }

    #[test]
    fn confounded_target_is_the_attribute_oddity(seed in any::<u64>()) {
        let Episode::Single(spec) = generate(&EpisodeConfig::new(TaskKind::Confounded, seed)).unwrap() else { unreachable!() };
        for dim in FeatureDim::ATTRIBUTES {
            prop_assert_eq!(oddity(&spec.objects, dim), spec.target_index);
        }
    }

    #[test]
    fn engine_invariants_hold(kind in task_kind(), seed in any::<u64>(), actions in legal_actions(TaskKind::Meta(MetaDifficulty::Mixed))) {
        let config = EpisodeConfig::new(kind, seed);
        let (mut state, _) = WorldState::reset_headless(&config).unwrap();
        for action in actions {
            if state.is_done() {
                prop_assert!(state.step(action).is_err());
                break;
            }
            let before = state.steps_elapsed();
            match state.step(action) {
                Ok(outcome) => {
                    prop_assert_eq!(state.steps_elapsed(), before + 1);
                    prop_assert!(state.agent().is_playable());
                    prop_assert!(state.steps_elapsed() <= config.step_limit);
                    prop_assert_eq!(outcome.done, state.phase() == Phase::Done);
                    if let Phase::Tail { .. } = state.phase() {
                        let chose = outcome.events.iter().any(|e| matches!(e, oddity::Event::Chose { .. }));
                        prop_assert!(outcome.reward == 0.0 || chose);
                    }
                }
                Err(_) => {
                    prop_assert!(action.is_transform() && !kind.is_meta());
                    prop_assert_eq!(state.steps_elapsed(), before);
                }
            }
        }
    }

    #[test]
    fn trajectories_round_trip_and_replay((kind, actions) in task_kind().prop_flat_map(|k| (Just(k), legal_actions(k))), seed in any::<u64>()) {
        let traj = Trajectory::record(&EpisodeConfig::new(kind, seed), actions).unwrap();
        let mut buf = Vec::new();
        write_trajectory(&traj, &mut buf).unwrap();
        let back = read_trajectories(buf.as_slice()).unwrap();
        prop_assert_eq!(&back, &vec![traj]);
        prop_assert!(back[0].replay().is_ok());
    }
}
