//! Per-episode summaries and their aggregate.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::catalog::FeatureDim;
use crate::engine::Event;
use crate::taskgen::Episode;

/// Key used for episodes where all attributes are relevant at once.
pub const ALL_RELEVANT_KEY: &str = "all";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeSummary {
    /// Relevant dimension name, or `all` for confounded rooms.
    pub relevant: String,
    /// The choice in the last trial was correct.
    pub success: bool,
    pub episode_return: f64,
    pub length: usize,
    /// Correctness of the choice in each trial, `None` when no choice was made.
    pub trial_success: Vec<Option<bool>>,
    pub transforms: Vec<FeatureDim>,
}

impl EpisodeSummary {
    /// Summarize the `(reward, events)` stream of one episode.
    pub fn new<'a>(episode: &Episode, steps: impl IntoIterator<Item = (f32, &'a [Event])>) -> Self {
        let mut trial_success = vec![None; episode.trial_count()];
        let mut transforms = Vec::new();
        let mut episode_return = 0.0;
        let mut length = 0;
        let mut trial = 0usize;
        for (reward, events) in steps {
            length += 1;
            episode_return += reward as f64;
            for event in events {
                match *event {
                    Event::Chose { correct, .. } => {
                        if let Some(slot) = trial_success.get_mut(trial) {
                            slot.get_or_insert(correct);
                        }
                    }
                    Event::Transformed { dim, .. } => transforms.push(dim),
                    Event::TrialEnded { .. } => trial += 1,
                    Event::EpisodeEnded => {}
                }
            }
        }
        Self {
            relevant: episode
                .relevant_dim()
                .map_or(ALL_RELEVANT_KEY, FeatureDim::name)
                .to_string(),
            success: trial_success.last().copied().flatten().unwrap_or(false),
            episode_return,
            length,
            trial_success,
            transforms,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub episodes: usize,
    pub successes: usize,
}

impl Rate {
    pub fn rate(&self) -> f64 {
        if self.episodes == 0 {
            0.0
        } else {
            self.successes as f64 / self.episodes as f64
        }
    }

    fn add(&mut self, success: bool) {
        self.episodes += 1;
        self.successes += success as usize;
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub episodes: usize,
    pub overall: Rate,
    /// Success conditioned on the relevant dimension.
    pub per_relevant: BTreeMap<String, Rate>,
    pub total_return: f64,
    pub total_length: usize,
    /// Success by trial index; only trials where a choice was made count.
    pub per_trial: Vec<Rate>,
    pub transform_usage: BTreeMap<String, usize>,
}

impl RunStats {
    pub fn add(&mut self, summary: &EpisodeSummary) {
        self.episodes += 1;
        self.overall.add(summary.success);
        self.per_relevant
            .entry(summary.relevant.clone())
            .or_default()
            .add(summary.success);
        self.total_return += summary.episode_return;
        self.total_length += summary.length;
        if self.per_trial.len() < summary.trial_success.len() {
            self.per_trial
                .resize(summary.trial_success.len(), Rate::default());
        }
        for (rate, outcome) in self.per_trial.iter_mut().zip(&summary.trial_success) {
            if let Some(correct) = outcome {
                rate.add(*correct);
            }
        }
        for dim in &summary.transforms {
            *self
                .transform_usage
                .entry(dim.name().to_string())
                .or_default() += 1;
        }
    }

    /// Fold another run into this one.
    pub fn merge(&mut self, other: &RunStats) {
        self.episodes += other.episodes;
        self.overall.episodes += other.overall.episodes;
        self.overall.successes += other.overall.successes;
        for (key, rate) in &other.per_relevant {
            let mine = self.per_relevant.entry(key.clone()).or_default();
            mine.episodes += rate.episodes;
            mine.successes += rate.successes;
        }
        self.total_return += other.total_return;
        self.total_length += other.total_length;
        if self.per_trial.len() < other.per_trial.len() {
            self.per_trial
                .resize(other.per_trial.len(), Rate::default());
        }
        for (mine, theirs) in self.per_trial.iter_mut().zip(&other.per_trial) {
            mine.episodes += theirs.episodes;
            mine.successes += theirs.successes;
        }
        for (key, n) in &other.transform_usage {
            *self.transform_usage.entry(key.clone()).or_default() += n;
        }
    }

    pub fn success_rate(&self) -> f64 {
        self.overall.rate()
    }

    pub fn mean_return(&self) -> f64 {
        if self.episodes == 0 {
            0.0
        } else {
            self.total_return / self.episodes as f64
        }
    }

    pub fn mean_length(&self) -> f64 {
        if self.episodes == 0 {
            0.0
        } else {
            self.total_length as f64 / self.episodes as f64
        }
    }

    /// Tab-separated `metric  key  value` rows.
    pub fn to_table(&self) -> String {
        let mut out = String::from("metric\tkey\tvalue\n");
        let mut row = |metric: &str, key: &str, value: String| {
            let _ = writeln!(out, "{metric}\t{key}\t{value}");
        };
        row("episodes", "-", self.episodes.to_string());
        row("success_rate", "-", format!("{:.6}", self.success_rate()));
        row("mean_return", "-", format!("{:.6}", self.mean_return()));
        row("mean_length", "-", format!("{:.6}", self.mean_length()));
        for (key, rate) in &self.per_relevant {
            row("relevant_episodes", key, rate.episodes.to_string());
            row("relevant_success_rate", key, format!("{:.6}", rate.rate()));
        }
        for (trial, rate) in self.per_trial.iter().enumerate() {
            row(
                "trial_success_rate",
                &trial.to_string(),
                format!("{:.6}", rate.rate()),
            );
        }
        for (dim, n) in &self.transform_usage {
            row("transforms", dim, n.to_string());
        }
        out
    }
}
