//! Line-delimited JSON trajectories.
//!
//! A file holds one or more episodes. Each episode starts with a header
//! line and continues with one line per step. Pixels are not stored; they
//! can be written to a side directory and are reproducible by replay.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::board::{Action, TilePos};
use crate::config::EpisodeConfig;
use crate::engine::{Event, StepOutcome, WorldState};
use crate::error::{Error, Result};

pub const TRAJECTORY_FORMAT: &str = "oddity-trajectory";
pub const TRAJECTORY_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryHeader {
    pub format: String,
    pub version: u32,
    pub config: EpisodeConfig,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// 1-based step index within the episode.
    pub t: u32,
    pub action: Action,
    pub reward: f32,
    pub events: Vec<Event>,
    pub explanation: Option<String>,
    pub explanation_tokens: Vec<u32>,
    pub agent: TilePos,
    pub done: bool,
    /// File name of the frame in the frames directory, when one was written.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<String>,
}

impl StepRecord {
    pub fn new(t: u32, action: Action, outcome: &StepOutcome, agent: TilePos) -> Self {
        Self {
            t,
            action,
            reward: outcome.reward,
            events: outcome.events.clone(),
            explanation: outcome.explanation.as_ref().map(|e| e.text.clone()),
            explanation_tokens: outcome
                .explanation
                .as_ref()
                .map(|e| e.tokens.clone())
                .unwrap_or_default(),
            agent,
            done: outcome.done,
            frame: None,
        }
    }

    /// Name of the first field that differs from `other`, ignoring frame references.
    fn first_difference(&self, other: &StepRecord) -> Option<&'static str> {
        if self.action != other.action {
            Some("action")
        } else if self.reward.to_bits() != other.reward.to_bits() {
            Some("reward")
        } else if self.events != other.events {
            Some("events")
        } else if self.explanation != other.explanation {
            Some("explanation")
        } else if self.explanation_tokens != other.explanation_tokens {
            Some("explanation_tokens")
        } else if self.agent != other.agent {
            Some("agent")
        } else if self.done != other.done {
            Some("done")
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub header: TrajectoryHeader,
    pub steps: Vec<StepRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum Line {
    Header(TrajectoryHeader),
    Step(StepRecord),
}

impl Trajectory {
    pub fn new(config: EpisodeConfig, policy: Option<String>) -> Self {
        Self {
            header: TrajectoryHeader {
                format: TRAJECTORY_FORMAT.into(),
                version: TRAJECTORY_VERSION,
                config,
                seed: config.seed,
                policy,
            },
            steps: Vec::new(),
        }
    }

    pub fn actions(&self) -> impl Iterator<Item = Action> + '_ {
        self.steps.iter().map(|s| s.action)
    }

    pub fn total_reward(&self) -> f32 {
        self.steps.iter().map(|s| s.reward).sum()
    }

    /// Record `actions` from a fresh headless episode.
    pub fn record(
        config: &EpisodeConfig,
        actions: impl IntoIterator<Item = Action>,
    ) -> Result<Self> {
        let (mut state, _) = WorldState::reset_headless(config)?;
        let mut traj = Self::new(*config, None);
        for (i, action) in actions.into_iter().enumerate() {
            if state.is_done() {
                break;
            }
            let outcome = state.step(action)?;
            traj.steps.push(StepRecord::new(
                i as u32 + 1,
                action,
                &outcome,
                state.agent(),
            ));
        }
        Ok(traj)
    }

    /// Re-run the recorded actions and check every recorded field.
    pub fn replay(&self) -> Result<()> {
        let replayed = Self::record(&self.header.config, self.actions())?;
        if replayed.steps.len() != self.steps.len() {
            return Err(Error::ReplayMismatch {
                step: replayed.steps.len().min(self.steps.len()),
                field: "length".into(),
            });
        }
        for (i, (a, b)) in self.steps.iter().zip(&replayed.steps).enumerate() {
            if let Some(field) = a.first_difference(b) {
                return Err(Error::ReplayMismatch {
                    step: i + 1,
                    field: field.into(),
                });
            }
        }
        Ok(())
    }
}

pub fn write_trajectory<W: Write>(traj: &Trajectory, sink: &mut W) -> Result<()> {
    serde_json::to_writer(&mut *sink, &Line::Header(traj.header.clone()))?;
    sink.write_all(b"\n")?;
    for step in &traj.steps {
        serde_json::to_writer(&mut *sink, &Line::Step(step.clone()))?;
        sink.write_all(b"\n")?;
    }
    Ok(())
}

/// Read every episode in a trajectory file.
pub fn read_trajectories<R: BufRead>(source: R) -> Result<Vec<Trajectory>> {
    let mut out: Vec<Trajectory> = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: Line = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        match parsed {
            Line::Header(header) => {
                if header.format != TRAJECTORY_FORMAT {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("unknown format `{}`", header.format),
                    });
                }
                if header.version != TRAJECTORY_VERSION {
                    return Err(Error::IncompatibleVersion {
                        found: header.version,
                        expected: TRAJECTORY_VERSION,
                    });
                }
                out.push(Trajectory {
                    header,
                    steps: Vec::new(),
                });
            }
            Line::Step(step) => match out.last_mut() {
                Some(traj) => traj.steps.push(step),
                None => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "step before any header".into(),
                    })
                }
            },
        }
    }
    Ok(out)
}

/// Read a file holding exactly one episode.
pub fn read_trajectory<R: BufRead>(source: R) -> Result<Trajectory> {
    let mut all = read_trajectories(source)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        n => Err(Error::Parse {
            line: 0,
            message: format!("expected one episode, found {n}"),
        }),
    }
}
