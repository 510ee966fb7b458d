//! PPO training over a dataset of same-shape formulas.

use std::fmt::Write as _;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use satrl_core::{CnfFormula, Limits};

use crate::checkpoint::write_policy;
use crate::error::AgentError;
use crate::heuristic::run_episode;
use crate::observation::Shape;
use crate::policy::Policy;
use crate::ppo::{PpoMetrics, PpoTrainer};

#[derive(Debug, Clone, Default)]
pub struct TrainOptions {
    /// Decision transitions to collect.
    pub steps: u64,
    pub seed: u64,
    /// Write `checkpoint-NNNNN.bin` into `checkpoint_dir` every this many windows.
    pub checkpoint_every: Option<usize>,
    pub checkpoint_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowLog {
    pub window: usize,
    /// Transitions collected so far, including this window.
    pub steps: u64,
    pub episodes: usize,
    /// Mean undiscounted return of the window's episodes.
    pub mean_reward: f64,
    pub mean_decisions: f64,
    pub metrics: PpoMetrics,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainingLog {
    pub windows: Vec<WindowLog>,
    /// `(undiscounted return, decisions)` of every episode, in training order.
    pub episodes: Vec<(i64, usize)>,
}

impl TrainingLog {
    pub const CSV_HEADER: &'static str = "window,steps,mean_reward,mean_decisions";

    /// Mean of `mean_reward` over the first and over the last `ceil(windows / 4)` windows.
    pub fn quartile_means(&self) -> Option<(f64, f64)> {
        let n = self.windows.len();
        if n < 2 {
            return None;
        }
        let q = n.div_ceil(4);
        let mean = |ws: &[WindowLog]| ws.iter().map(|w| w.mean_reward).sum::<f64>() / ws.len() as f64;
        Some((mean(&self.windows[..q]), mean(&self.windows[n - q..])))
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", Self::CSV_HEADER);
        for w in &self.windows {
            let _ = writeln!(out, "{},{},{},{}", w.window, w.steps, w.mean_reward, w.mean_decisions);
        }
        out
    }
}

/// Trains `policy` in place.
///
/// Instances are visited in a seeded shuffled order, reshuffled after every pass.
/// Each episode is capped at `min(episode_cap, remaining steps)` decisions, so
/// exactly `steps` transitions are collected. Windows close at episode boundaries
/// once they hold at least `rollout_window` transitions, and each closed window
/// gets one PPO update. Instances solved without any decision contribute nothing.
pub fn train(
    dataset: &[CnfFormula],
    policy: &mut Policy,
    options: &TrainOptions,
) -> Result<TrainingLog, AgentError> {
    for f in dataset {
        policy.check_shape(Shape::of(f))?;
    }
    let mut log = TrainingLog::default();
    if options.steps == 0 {
        return Ok(log);
    }
    if dataset.is_empty() {
        return Err(AgentError::NoTransitions);
    }
    let cfg = policy.config().ppo.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut trainer = PpoTrainer::new(policy, rng.random());
    let mut order: Vec<usize> = (0..dataset.len()).collect();
    order.shuffle(&mut rng);
    let mut pos = 0;
    let mut idle = 0;

    let mut collected = 0u64;
    let mut buffer = Vec::new();
    let mut episodes: Vec<(i64, usize)> = Vec::new();
    while collected < options.steps {
        if pos == order.len() {
            order.shuffle(&mut rng);
            pos = 0;
        }
        let f = &dataset[order[pos]];
        pos += 1;
        let limit = cfg.episode_cap.min(options.steps - collected);
        let ep = run_episode(f, policy, Limits::decisions(limit), rng.random())?;
        if ep.transitions.is_empty() {
            idle += 1;
            if idle >= dataset.len() {
                return Err(AgentError::NoTransitions);
            }
            continue;
        }
        idle = 0;
        collected += ep.transitions.len() as u64;
        episodes.push((ep.total_reward(), ep.transitions.len()));
        log.episodes.push((ep.total_reward(), ep.transitions.len()));
        buffer.extend(ep.transitions);

        if buffer.len() >= cfg.rollout_window || collected >= options.steps {
            let metrics = trainer.update(policy, &buffer)?;
            let count = episodes.len() as f64;
            let window = WindowLog {
                window: log.windows.len(),
                steps: collected,
                episodes: episodes.len(),
                mean_reward: episodes.iter().map(|e| e.0 as f64).sum::<f64>() / count,
                mean_decisions: episodes.iter().map(|e| e.1 as f64).sum::<f64>() / count,
                metrics,
            };
            log::info!(
                "window {} steps {} mean_reward {:.3} mean_decisions {:.2} entropy {:.4} clip {:.3}",
                window.window,
                window.steps,
                window.mean_reward,
                window.mean_decisions,
                metrics.entropy,
                metrics.clip_fraction
            );
            log.windows.push(window);
            buffer.clear();
            episodes.clear();
            if let (Some(every), Some(dir)) = (options.checkpoint_every, &options.checkpoint_dir) {
                if every > 0 && log.windows.len() % every == 0 {
                    write_policy(policy, dir.join(format!("checkpoint-{:05}.bin", log.windows.len())))?;
                }
            }
        }
    }
    Ok(log)
}
