//! Command-line front end: generation, rollouts, statistics, benchmarks
//! and data dumps.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use oddity::harness::{self, write_trajectory, EpisodeSummary, RunStats};
use oddity::policy::by_name;
use oddity::{canonical_catalog, generate, EpisodeConfig, Error, Result, TaskKind, WorldState};

#[derive(Parser)]
#[command(
    name = "oddity",
    version,
    about = "Odd-one-out environments with explanation targets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one episode layout.
    Gen {
        #[arg(long, default_value = "basic")]
        task: String,
        #[arg(long, env = "ODDITY_SEED", default_value_t = 0)]
        seed: u64,
        /// Print the full layout as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Roll out a policy and write trajectories.
    Play {
        #[arg(long, default_value = "basic")]
        task: String,
        #[arg(long)]
        policy: String,
        #[arg(long, default_value_t = 1)]
        episodes: usize,
        #[arg(long)]
        out: PathBuf,
        /// Directory for per-step PNG frames.
        #[arg(long)]
        frames: Option<PathBuf>,
        #[arg(long, env = "ODDITY_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Tally which unique object a policy picks in deconfounded rooms.
    EvalDeconfound {
        #[arg(long)]
        policy: String,
        #[arg(long, default_value_t = 1000)]
        episodes: usize,
        #[arg(long, env = "ODDITY_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Summarize a trajectory file.
    Stats { file: PathBuf },
    /// Measure stepping throughput.
    Bench {
        #[arg(long, default_value_t = 1_000_000)]
        steps: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        render: bool,
        #[arg(long, default_value = "basic")]
        task: String,
        #[arg(long, env = "ODDITY_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Write the first frame of an episode.
    Render {
        #[arg(long, env = "ODDITY_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "basic")]
        task: String,
        /// Write raw RGB bytes instead of PNG.
        #[arg(long)]
        raw: bool,
    },
    /// Feature catalog tables.
    Catalog {
        #[command(subcommand)]
        action: DumpAction,
    },
    /// Explanation vocabulary tables.
    Vocab {
        #[command(subcommand)]
        action: DumpAction,
    },
}

#[derive(Subcommand)]
enum DumpAction {
    /// Print the table to stdout.
    Dump,
}

fn config_for(task: &str, seed: u64) -> Result<EpisodeConfig> {
    Ok(EpisodeConfig::new(task.parse::<TaskKind>()?, seed))
}

fn execute(command: Command) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Gen { task, seed, json } => {
            let config = config_for(&task, seed)?;
            let episode = generate(&config)?;
            if json {
                serde_json::to_writer_pretty(&mut out, &episode)?;
                writeln!(out)?;
            } else {
                writeln!(out, "task\t{}\nseed\t{seed}", episode.task_kind())?;
                if let Some(dim) = episode.relevant_dim() {
                    writeln!(out, "relevant\t{dim}")?;
                }
                for trial in 0..episode.trial_count() {
                    writeln!(out, "trial {trial}: {}", episode.trial_instruction(trial))?;
                    for (i, o) in episode.trial_objects(trial).iter().enumerate() {
                        writeln!(
                            out,
                            "  {i}\t{}\t{}\t{}\t{}\t{}",
                            o.tile,
                            o.name(oddity::FeatureDim::Color),
                            o.name(oddity::FeatureDim::Texture),
                            o.name(oddity::FeatureDim::Shape),
                            o.name(oddity::FeatureDim::Position)
                        )?;
                    }
                }
            }
        }
        Command::Play {
            task,
            policy,
            episodes,
            out: path,
            frames,
            seed,
        } => {
            let config = config_for(&task, seed)?;
            let mut policy = by_name(&policy)?;
            if let Some(dir) = &frames {
                std::fs::create_dir_all(dir)?;
            }
            let mut sink = BufWriter::new(File::create(&path)?);
            let stats = harness::run_with(
                &config,
                policy.as_mut(),
                episodes,
                seed,
                frames.is_some(),
                |record| {
                    let mut traj = record.trajectory.clone();
                    if let Some(dir) = &frames {
                        for (step, frame) in traj.steps.iter_mut().zip(&record.frames) {
                            let name = format!("ep{:05}_t{:04}.png", record.index, step.t);
                            frame.write_png(&dir.join(&name))?;
                            step.frame = Some(name);
                        }
                    }
                    write_trajectory(&traj, &mut sink)
                },
            )?;
            sink.flush()?;
            write!(out, "{}", stats.to_table())?;
        }
        Command::EvalDeconfound {
            policy,
            episodes,
            seed,
        } => {
            let mut policy = by_name(&policy)?;
            let report = harness::eval_deconfound(policy.as_mut(), episodes, seed)?;
            write!(out, "{}", report.to_table())?;
        }
        Command::Stats { file } => {
            let trajectories = harness::read_trajectories(BufReader::new(File::open(&file)?))?;
            let mut stats = RunStats::default();
            for traj in &trajectories {
                let episode = generate(&traj.header.config)?;
                stats.add(&EpisodeSummary::new(
                    &episode,
                    traj.steps.iter().map(|s| (s.reward, s.events.as_slice())),
                ));
            }
            write!(out, "{}", stats.to_table())?;
        }
        Command::Bench {
            steps,
            threads,
            render,
            task,
            seed,
        } => {
            let config = config_for(&task, seed)?;
            let report = harness::bench(&config, steps, threads, render)?;
            writeln!(out, "mode\t{}", if render { "render" } else { "headless" })?;
            writeln!(out, "threads\t{}", report.threads)?;
            writeln!(out, "steps\t{}", report.steps)?;
            writeln!(out, "episodes\t{}", report.episodes)?;
            writeln!(out, "elapsed_secs\t{:.6}", report.elapsed_secs)?;
            writeln!(out, "steps_per_sec\t{:.0}", report.steps_per_sec)?;
            writeln!(out, "checksum\t{:016x}", report.checksum)?;
        }
        Command::Render {
            seed,
            out: path,
            task,
            raw,
        } => {
            let (_, first) = WorldState::reset(&config_for(&task, seed)?)?;
            let frame = first
                .observation
                .pixels
                .ok_or_else(|| Error::InvalidState("no frame rendered".into()))?;
            if raw {
                frame.write_raw(&path)?;
            } else {
                frame.write_png(&path)?;
            }
        }
        Command::Catalog {
            action: DumpAction::Dump,
        } => write!(out, "{}", canonical_catalog().dump())?,
        Command::Vocab {
            action: DumpAction::Dump,
        } => write!(out, "{}", oddity::explain::vocabulary().dump())?,
    }
    Ok(())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_) | Error::InvalidConfig(_) => 2,
        Error::Episode { source, .. } => exit_code(source),
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
