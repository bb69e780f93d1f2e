//! Uniqueness analysis over a room's objects.
//!
//! [`verify_structure`] is deliberately brute force: it counts every value
//! against every other object and never uses the generators' bookkeeping,
//! so tests can use it as an oracle for them.

use serde::{Deserialize, Serialize};

use crate::catalog::FeatureDim;
use crate::object::ObjectSpec;

/// How the four values along one dimension are partitioned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DimPattern {
    /// Four equal values.
    AllMatching,
    /// One value held by a single object, the other three share a value.
    Unique1v3,
    /// Two values, each held by two objects.
    Paired2v2,
    /// One pair plus two singletons.
    Split2v1v1,
    /// Four different values.
    AllDistinct,
}

/// Index of the single value held by no other entry, if exactly one exists.
pub fn unique_index(values: &[u8]) -> Option<usize> {
    let mut found = None;
    for (i, v) in values.iter().enumerate() {
        if values.iter().filter(|w| *w == v).count() == 1 {
            if found.is_some() {
                return None;
            }
            found = Some(i);
        }
    }
    found
}

/// The object whose value along `dim` is held by no other object, when
/// exactly one such object exists.
pub fn oddity(objects: &[ObjectSpec], dim: FeatureDim) -> Option<usize> {
    let values: Vec<u8> = objects.iter().map(|o| o.value(dim)).collect();
    unique_index(&values)
}

/// Classify a multiset of values by its multiplicities.
pub fn classify(values: &[u8]) -> DimPattern {
    let mut counts: Vec<usize> = Vec::with_capacity(values.len());
    for (i, v) in values.iter().enumerate() {
        if values[..i].contains(v) {
            continue;
        }
        counts.push(values.iter().filter(|w| *w == v).count());
    }
    counts.sort_unstable_by(|a, b| b.cmp(a));
    match counts.as_slice() {
        [4] => DimPattern::AllMatching,
        [3, 1] => DimPattern::Unique1v3,
        [2, 2] => DimPattern::Paired2v2,
        [2, 1, 1] => DimPattern::Split2v1v1,
        _ => DimPattern::AllDistinct,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    /// `is_unique[object][dim]`.
    pub is_unique: Vec<[bool; 4]>,
    pub unique_pairs: Vec<(usize, FeatureDim)>,
    /// Indexed by [`FeatureDim::index`].
    pub patterns: [DimPattern; 4],
}

impl StructureReport {
    pub fn pattern(&self, dim: FeatureDim) -> DimPattern {
        self.patterns[dim.index()]
    }

    pub fn unique_count_among(&self, dims: &[FeatureDim]) -> usize {
        self.unique_pairs
            .iter()
            .filter(|(_, d)| dims.contains(d))
            .count()
    }
}

/// Exhaustive classification of every (object, dimension) pair.
pub fn verify_structure(objects: &[ObjectSpec]) -> StructureReport {
    let mut is_unique = vec![[false; 4]; objects.len()];
    let mut unique_pairs = Vec::new();
    for (i, obj) in objects.iter().enumerate() {
        for dim in FeatureDim::ALL {
            let shared = objects
                .iter()
                .enumerate()
                .any(|(j, other)| j != i && other.value(dim) == obj.value(dim));
            if !shared {
                is_unique[i][dim.index()] = true;
                unique_pairs.push((i, dim));
            }
        }
    }
    let patterns = FeatureDim::ALL.map(|dim| {
        let values: Vec<u8> = objects.iter().map(|o| o.value(dim)).collect();
        classify(&values)
    });
    StructureReport {
        is_unique,
        unique_pairs,
        patterns,
    }
}
