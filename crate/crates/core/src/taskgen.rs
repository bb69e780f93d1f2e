//! Procedural generation of episode layouts for every task kind.
//!
//! Generators are pure functions of the config and an explicit RNG; the
//! engine seeds that RNG from `config.seed` so an episode is fully
//! determined by its config.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::board::{position_region_tiles, TilePos, POSITION_TYPES};
use crate::catalog::{feature_name, FeatureDim};
use crate::config::{DimSet, EpisodeConfig, MetaDifficulty, TaskKind};
use crate::error::{Error, Result};
use crate::object::ObjectSpec;
use crate::structure::DimPattern;

pub const FIND_INSTRUCTION: &str = "find the odd one out";
pub const MAKE_INSTRUCTION: &str = "make an odd one out";

/// Attempts per object before tile placement gives up.
const TILE_RETRIES: usize = 64;

/// Which object carries each rare attribute in a deconfounded room.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeconfoundedLayout {
    pub color: usize,
    pub shape: usize,
    pub texture: usize,
    /// All-common object, unique along nothing.
    pub distractor: usize,
}

impl DeconfoundedLayout {
    pub fn unique_along(&self, dim: FeatureDim) -> Option<usize> {
        match dim {
            FeatureDim::Color => Some(self.color),
            FeatureDim::Shape => Some(self.shape),
            FeatureDim::Texture => Some(self.texture),
            FeatureDim::Position => None,
        }
    }
}

/// What makes a choice correct in a single-room episode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relevance {
    /// Basic: the odd one out along one dimension.
    Single(FeatureDim),
    /// Confounded: the target is unique along color, shape and texture.
    AllAttributes,
    /// Deconfounded: one unique object per attribute; rewarded along `eval_dim`.
    PerDimension {
        layout: DeconfoundedLayout,
        eval_dim: FeatureDim,
    },
    /// Curriculum: the object named by the instruction along this dimension.
    Property(FeatureDim),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpisodeSpec {
    pub task_kind: TaskKind,
    pub objects: [ObjectSpec; 4],
    pub relevance: Relevance,
    pub target_index: Option<usize>,
    pub instruction: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialSpec {
    pub trial_index: u8,
    pub objects: [ObjectSpec; 4],
    pub is_final: bool,
    /// Color, shape, texture patterns of an experiment room.
    pub per_dim_pattern: Option<[(FeatureDim, DimPattern); 3]>,
    /// Set on the final trial.
    pub deconfounded: Option<DeconfoundedLayout>,
    pub instruction: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaEpisode {
    pub difficulty: MetaDifficulty,
    pub relevant_dim: FeatureDim,
    pub trials: Vec<TrialSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Episode {
    Single(EpisodeSpec),
    Meta(MetaEpisode),
}

impl Episode {
    pub fn task_kind(&self) -> TaskKind {
        match self {
            Episode::Single(spec) => spec.task_kind,
            Episode::Meta(meta) => TaskKind::Meta(meta.difficulty),
        }
    }

    /// The dimension that decides reward, where there is exactly one.
    pub fn relevant_dim(&self) -> Option<FeatureDim> {
        match self {
            Episode::Single(spec) => match spec.relevance {
                Relevance::Single(d) | Relevance::Property(d) => Some(d),
                Relevance::PerDimension { eval_dim, .. } => Some(eval_dim),
                Relevance::AllAttributes => None,
            },
            Episode::Meta(meta) => Some(meta.relevant_dim),
        }
    }

    pub fn trial_count(&self) -> usize {
        match self {
            Episode::Single(_) => 1,
            Episode::Meta(meta) => meta.trials.len(),
        }
    }

    pub fn trial_objects(&self, trial: usize) -> &[ObjectSpec; 4] {
        match self {
            Episode::Single(spec) => &spec.objects,
            Episode::Meta(meta) => &meta.trials[trial].objects,
        }
    }

    pub fn trial_instruction(&self, trial: usize) -> &str {
        match self {
            Episode::Single(spec) => &spec.instruction,
            Episode::Meta(meta) => &meta.trials[trial].instruction,
        }
    }
}

/// The generator RNG for an episode seed.
pub fn episode_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generate the episode described by `config`, seeded from `config.seed`.
pub fn generate(config: &EpisodeConfig) -> Result<Episode> {
    config.validate()?;
    let mut rng = episode_rng(config.seed);
    Ok(match config.task_kind {
        TaskKind::Basic if config.curriculum_mix => {
            if rng.gen_bool(0.5) {
                Episode::Single(gen_curriculum(&mut rng, config)?)
            } else {
                let mut spec = gen_basic(&mut rng, config)?;
                spec.instruction = FIND_INSTRUCTION.to_string();
                Episode::Single(spec)
            }
        }
        TaskKind::Basic => Episode::Single(gen_basic(&mut rng, config)?),
        TaskKind::Confounded => Episode::Single(gen_confounded(&mut rng, config)?),
        TaskKind::Deconfounded => Episode::Single(gen_deconfounded(&mut rng, config)?),
        TaskKind::Meta(_) => Episode::Meta(gen_meta_episode(&mut rng, config)?),
        TaskKind::Curriculum => Episode::Single(gen_curriculum(&mut rng, config)?),
    })
}

fn distinct_pair<R: Rng>(rng: &mut R, cardinality: usize) -> Result<(u8, u8)> {
    if cardinality < 2 {
        return Err(Error::GenerationFailure(format!(
            "need two values, catalog has {cardinality}"
        )));
    }
    let a = rng.gen_range(0..cardinality);
    let b = (a + rng.gen_range(1..cardinality)) % cardinality;
    Ok((a as u8, b as u8))
}

fn other_value<R: Rng>(rng: &mut R, cardinality: usize, not: u8) -> u8 {
    let offset = rng.gen_range(1..cardinality);
    ((not as usize + offset) % cardinality) as u8
}

/// Two values split over the four objects, two each, with a random pairing.
fn paired_values<R: Rng>(rng: &mut R, cardinality: usize) -> Result<[u8; 4]> {
    let (a, b) = distinct_pair(rng, cardinality)?;
    let partner = rng.gen_range(1..4);
    let mut out = [b; 4];
    out[0] = a;
    out[partner] = a;
    Ok(out)
}

/// Sample distinct tiles, one per object, inside each object's region.
fn place_tiles<R: Rng>(rng: &mut R, pos_types: [u8; 4]) -> Result<[TilePos; 4]> {
    let mut placed: Vec<TilePos> = Vec::with_capacity(4);
    for pos_type in pos_types {
        let region = position_region_tiles(pos_type)?;
        let tile = (0..TILE_RETRIES)
            .map(|_| region[rng.gen_range(0..region.len())])
            .find(|t| !placed.contains(t))
            .ok_or_else(|| {
                Error::GenerationFailure(format!(
                    "no free tile in position type {pos_type} after {TILE_RETRIES} draws"
                ))
            })?;
        placed.push(tile);
    }
    Ok([placed[0], placed[1], placed[2], placed[3]])
}

fn assemble(
    colors: [u8; 4],
    shapes: [u8; 4],
    textures: [u8; 4],
    pos: [u8; 4],
    tiles: [TilePos; 4],
) -> [ObjectSpec; 4] {
    std::array::from_fn(|i| ObjectSpec {
        color: colors[i],
        shape: shapes[i],
        texture: textures[i],
        pos_type: pos[i],
        tile: tiles[i],
        alive: true,
    })
}

fn choose_dim<R: Rng>(rng: &mut R, dims: DimSet) -> Result<FeatureDim> {
    let dims: Vec<FeatureDim> = dims.iter().collect();
    dims.choose(rng)
        .copied()
        .ok_or_else(|| Error::InvalidConfig("no dimension available to draw from".into()))
}

/// One odd object along a drawn relevant dimension, 2+2 pairs elsewhere.
pub fn gen_basic<R: Rng>(rng: &mut R, config: &EpisodeConfig) -> Result<EpisodeSpec> {
    let relevant = choose_dim(rng, config.allowed_relevant_dims)?;
    let odd = rng.gen_range(0..4);
    let mut columns = [[0u8; 4]; 4];
    for dim in FeatureDim::ALL {
        let card = dim.cardinality();
        columns[dim.index()] = if dim == relevant {
            let (unique, common) = distinct_pair(rng, card)?;
            let mut col = [common; 4];
            col[odd] = unique;
            col
        } else {
            paired_values(rng, card)?
        };
    }
    let [colors, shapes, textures, pos] = columns;
    let tiles = place_tiles(rng, pos)?;
    Ok(EpisodeSpec {
        task_kind: TaskKind::Basic,
        objects: assemble(colors, shapes, textures, pos, tiles),
        relevance: Relevance::Single(relevant),
        target_index: None,
        instruction: String::new(),
    })
}

/// Three identical objects and a target unique in color, shape and texture,
/// all sharing one position type.
pub fn gen_confounded<R: Rng>(rng: &mut R, _config: &EpisodeConfig) -> Result<EpisodeSpec> {
    let pos_type = rng.gen_range(0..POSITION_TYPES);
    let target = rng.gen_range(0..4);
    let mut columns = [[0u8; 4]; 3];
    for (col, dim) in columns.iter_mut().zip(FeatureDim::ATTRIBUTES) {
        let (rare, common) = distinct_pair(rng, dim.cardinality())?;
        *col = [common; 4];
        col[target] = rare;
    }
    let [colors, shapes, textures] = columns;
    let pos = [pos_type; 4];
    let tiles = place_tiles(rng, pos)?;
    Ok(EpisodeSpec {
        task_kind: TaskKind::Confounded,
        objects: assemble(colors, shapes, textures, pos, tiles),
        relevance: Relevance::AllAttributes,
        target_index: Some(target),
        instruction: String::new(),
    })
}

fn deconfounded_room<R: Rng>(rng: &mut R) -> Result<([ObjectSpec; 4], DeconfoundedLayout)> {
    let pos_type = rng.gen_range(0..POSITION_TYPES);
    let mut common = [0u8; 3];
    let mut rare = [0u8; 3];
    for (k, dim) in FeatureDim::ATTRIBUTES.into_iter().enumerate() {
        let card = dim.cardinality();
        common[k] = rng.gen_range(0..card) as u8;
        rare[k] = other_value(rng, card, common[k]);
    }
    // role 0 is the distractor, role 1+k carries the rare value of attribute k
    let mut slots = [0usize, 1, 2, 3];
    slots.shuffle(rng);
    let mut columns = [[0u8; 4]; 3];
    for (k, col) in columns.iter_mut().enumerate() {
        *col = [common[k]; 4];
        col[slots[1 + k]] = rare[k];
    }
    let layout = DeconfoundedLayout {
        color: slots[1],
        shape: slots[2],
        texture: slots[3],
        distractor: slots[0],
    };
    let [colors, shapes, textures] = columns;
    let pos = [pos_type; 4];
    let tiles = place_tiles(rng, pos)?;
    Ok((assemble(colors, shapes, textures, pos, tiles), layout))
}

/// A different object unique along each of color, shape and texture, plus
/// a distractor unique along nothing.
pub fn gen_deconfounded<R: Rng>(rng: &mut R, config: &EpisodeConfig) -> Result<EpisodeSpec> {
    let eval_dim = choose_dim(
        rng,
        config.allowed_relevant_dims.intersect(DimSet::ATTRIBUTES),
    )?;
    let (objects, layout) = deconfounded_room(rng)?;
    Ok(EpisodeSpec {
        task_kind: TaskKind::Deconfounded,
        objects,
        relevance: Relevance::PerDimension { layout, eval_dim },
        target_index: None,
        instruction: String::new(),
    })
}

/// Per-attribute layout of an experiment room.
type AttributePatterns = [(FeatureDim, DimPattern); 3];

fn experiment_room<R: Rng>(
    rng: &mut R,
    difficulty: MetaDifficulty,
) -> Result<([ObjectSpec; 4], AttributePatterns)> {
    let pos_type = rng.gen_range(0..POSITION_TYPES);
    let mut columns = [[0u8; 4]; 3];
    let mut patterns = [(FeatureDim::Color, DimPattern::AllMatching); 3];
    for (k, dim) in FeatureDim::ATTRIBUTES.into_iter().enumerate() {
        let paired = match difficulty {
            MetaDifficulty::Easy => false,
            MetaDifficulty::Hard => true,
            MetaDifficulty::Mixed => rng.gen_bool(0.5),
        };
        let card = dim.cardinality();
        columns[k] = if paired {
            paired_values(rng, card)?
        } else {
            [rng.gen_range(0..card) as u8; 4]
        };
        patterns[k] = (
            dim,
            if paired {
                DimPattern::Paired2v2
            } else {
                DimPattern::AllMatching
            },
        );
    }
    let [colors, shapes, textures] = columns;
    let pos = [pos_type; 4];
    let tiles = place_tiles(rng, pos)?;
    Ok((assemble(colors, shapes, textures, pos, tiles), patterns))
}

/// Three experiment rooms with no unique object, then a deconfounded test.
pub fn gen_meta_episode<R: Rng>(rng: &mut R, config: &EpisodeConfig) -> Result<MetaEpisode> {
    let TaskKind::Meta(difficulty) = config.task_kind else {
        return Err(Error::InvalidConfig(format!(
            "gen_meta_episode called for {}",
            config.task_kind
        )));
    };
    let relevant_dim = choose_dim(
        rng,
        config.allowed_relevant_dims.intersect(DimSet::ATTRIBUTES),
    )?;
    let mut trials = Vec::with_capacity(4);
    for trial_index in 0..3u8 {
        let (objects, patterns) = experiment_room(rng, difficulty)?;
        trials.push(TrialSpec {
            trial_index,
            objects,
            is_final: false,
            per_dim_pattern: Some(patterns),
            deconfounded: None,
            instruction: MAKE_INSTRUCTION.to_string(),
        });
    }
    let (objects, layout) = deconfounded_room(rng)?;
    trials.push(TrialSpec {
        trial_index: 3,
        objects,
        is_final: true,
        per_dim_pattern: None,
        deconfounded: Some(layout),
        instruction: FIND_INSTRUCTION.to_string(),
    });
    Ok(MetaEpisode {
        difficulty,
        relevant_dim,
        trials,
    })
}

/// Four objects that differ along every dimension; the instruction names
/// one object's value along a drawn dimension.
pub fn gen_curriculum<R: Rng>(rng: &mut R, config: &EpisodeConfig) -> Result<EpisodeSpec> {
    let mut columns = [[0u8; 4]; 4];
    for dim in FeatureDim::ALL {
        let picked = rand::seq::index::sample(rng, dim.cardinality(), 4);
        for (slot, v) in columns[dim.index()].iter_mut().zip(picked.iter()) {
            *slot = v as u8;
        }
    }
    let [colors, shapes, textures, pos] = columns;
    let tiles = place_tiles(rng, pos)?;
    let objects = assemble(colors, shapes, textures, pos, tiles);
    let target = rng.gen_range(0..4);
    let dim = choose_dim(rng, config.allowed_relevant_dims)?;
    let instruction = feature_name(dim, objects[target].value(dim))?.to_string();
    Ok(EpisodeSpec {
        task_kind: TaskKind::Curriculum,
        objects,
        relevance: Relevance::Property(dim),
        target_index: Some(target),
        instruction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{oddity, verify_structure};

    fn cfg(kind: TaskKind) -> EpisodeConfig {
        EpisodeConfig::new(kind, 0)
    }

    fn check_tiles(objects: &[ObjectSpec; 4]) {
        for (i, a) in objects.iter().enumerate() {
            assert!(a.alive);
            assert!(a.is_placed_consistently(), "{a:?}");
            for b in &objects[i + 1..] {
                assert_ne!(a.tile, b.tile);
            }
        }
    }

    #[test]
    fn basic_has_one_unique_pair_on_the_relevant_dim() {
        for seed in 0..2000 {
            let spec = gen_basic(&mut episode_rng(seed), &cfg(TaskKind::Basic)).unwrap();
            check_tiles(&spec.objects);
            let Relevance::Single(relevant) = spec.relevance else {
                panic!()
            };
            let report = verify_structure(&spec.objects);
            assert_eq!(report.unique_pairs.len(), 1, "seed {seed}");
            assert_eq!(report.unique_pairs[0].1, relevant);
            for dim in FeatureDim::ALL {
                let want = if dim == relevant {
                    DimPattern::Unique1v3
                } else {
                    DimPattern::Paired2v2
                };
                assert_eq!(report.pattern(dim), want);
            }
        }
    }

    #[test]
    fn position_only_basic() {
        let config = cfg(TaskKind::Basic).with_allowed_dims(DimSet::of(&[FeatureDim::Position]));
        for seed in 0..200 {
            let spec = gen_basic(&mut episode_rng(seed), &config).unwrap();
            assert_eq!(spec.relevance, Relevance::Single(FeatureDim::Position));
            let report = verify_structure(&spec.objects);
            for dim in FeatureDim::ATTRIBUTES {
                assert_eq!(report.pattern(dim), DimPattern::Paired2v2);
            }
        }
    }

    #[test]
    fn confounded_target_is_odd_along_every_attribute() {
        for seed in 0..1000 {
            let spec = gen_confounded(&mut episode_rng(seed), &cfg(TaskKind::Confounded)).unwrap();
            check_tiles(&spec.objects);
            for dim in FeatureDim::ATTRIBUTES {
                assert_eq!(oddity(&spec.objects, dim), spec.target_index);
            }
            assert_eq!(oddity(&spec.objects, FeatureDim::Position), None);
        }
    }

    #[test]
    fn deconfounded_uniques_are_distinct() {
        for seed in 0..1000 {
            let spec =
                gen_deconfounded(&mut episode_rng(seed), &cfg(TaskKind::Deconfounded)).unwrap();
            check_tiles(&spec.objects);
            let Relevance::PerDimension { layout, eval_dim } = spec.relevance else {
                panic!()
            };
            assert_ne!(eval_dim, FeatureDim::Position);
            let report = verify_structure(&spec.objects);
            assert_eq!(report.unique_pairs.len(), 3);
            for dim in FeatureDim::ATTRIBUTES {
                assert_eq!(oddity(&spec.objects, dim), layout.unique_along(dim));
            }
            assert_eq!(report.is_unique[layout.distractor], [false; 4]);
            let mut idx = [
                layout.color,
                layout.shape,
                layout.texture,
                layout.distractor,
            ];
            idx.sort_unstable();
            assert_eq!(idx, [0, 1, 2, 3]);
        }
    }

    #[test]
    fn meta_trials_follow_difficulty() {
        for (difficulty, allowed) in [
            (MetaDifficulty::Easy, vec![DimPattern::AllMatching]),
            (MetaDifficulty::Hard, vec![DimPattern::Paired2v2]),
            (
                MetaDifficulty::Mixed,
                vec![DimPattern::AllMatching, DimPattern::Paired2v2],
            ),
        ] {
            for seed in 0..300 {
                let meta =
                    gen_meta_episode(&mut episode_rng(seed), &cfg(TaskKind::Meta(difficulty)))
                        .unwrap();
                assert_eq!(meta.trials.len(), 4);
                for trial in &meta.trials[..3] {
                    assert_eq!(trial.instruction, MAKE_INSTRUCTION);
                    let report = verify_structure(&trial.objects);
                    for (dim, pattern) in trial.per_dim_pattern.unwrap() {
                        assert!(allowed.contains(&pattern));
                        assert_eq!(report.pattern(dim), pattern);
                        assert_eq!(oddity(&trial.objects, dim), None);
                    }
                }
                let last = &meta.trials[3];
                assert!(last.is_final);
                assert_eq!(last.instruction, FIND_INSTRUCTION);
                assert_eq!(verify_structure(&last.objects).unique_pairs.len(), 3);
            }
        }
    }

    #[test]
    fn curriculum_is_all_distinct_and_named() {
        for seed in 0..1000 {
            let spec = gen_curriculum(&mut episode_rng(seed), &cfg(TaskKind::Curriculum)).unwrap();
            check_tiles(&spec.objects);
            let report = verify_structure(&spec.objects);
            assert_eq!(report.patterns, [DimPattern::AllDistinct; 4]);
            let Relevance::Property(dim) = spec.relevance else {
                panic!()
            };
            let named: Vec<usize> = (0..4)
                .filter(|&i| spec.objects[i].name(dim) == spec.instruction)
                .collect();
            assert_eq!(named, vec![spec.target_index.unwrap()]);
        }
    }

    #[test]
    fn curriculum_mix_interleaves_both_kinds() {
        let mut config = cfg(TaskKind::Basic);
        config.curriculum_mix = true;
        let mut curriculum = 0;
        for seed in 0..1000 {
            match generate(&config.with_seed(seed)).unwrap() {
                Episode::Single(spec) if spec.task_kind == TaskKind::Curriculum => curriculum += 1,
                Episode::Single(spec) => assert_eq!(spec.instruction, FIND_INSTRUCTION),
                Episode::Meta(_) => unreachable!(),
            }
        }
        assert!((400..600).contains(&curriculum), "{curriculum}");
    }

    #[test]
    fn generation_is_seeded() {
        for kind in [
            TaskKind::Basic,
            TaskKind::Confounded,
            TaskKind::Curriculum,
            TaskKind::Meta(MetaDifficulty::Mixed),
        ] {
            let a = generate(&cfg(kind).with_seed(42)).unwrap();
            let b = generate(&cfg(kind).with_seed(42)).unwrap();
            let c = generate(&cfg(kind).with_seed(43)).unwrap();
            assert_eq!(a, b);
            assert_ne!(a, c);
        }
    }
}
