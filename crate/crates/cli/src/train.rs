use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use satrl_agent::{train, write_policy, Policy, PolicyConfig, PpoConfig, RewardMode, Shape, TrainOptions};
use satrl_bench::{load_dataset, split_dataset, LoadOptions};

use crate::args::{RewardKind, TrainArgs};
use crate::{sibling_path, CmdResult};

pub fn run(a: &TrainArgs, seed: u64) -> CmdResult {
    let ds = load_dataset(&a.dataset, LoadOptions { strict: a.strict, expect_shape: None })?;
    let mut entries = ds.entries;
    if let Some(split_seed) = a.split_seed {
        let paths: Vec<PathBuf> = entries.iter().map(|e| e.0.clone()).collect();
        let split = split_dataset(&paths, 0.8, split_seed);
        entries.retain(|(p, _)| split.train.contains(p));
    }
    let Some((first_path, first)) = entries.first() else {
        return Err(anyhow!("no usable instances in {}", a.dataset.display()).into());
    };
    let shape = Shape::of(first);
    if let Some((p, f)) = entries.iter().find(|(_, f)| Shape::of(f) != shape) {
        return Err(anyhow!(
            "{} has shape {} but {} has {}; a policy is bound to one shape",
            p.display(),
            Shape::of(f),
            first_path.display(),
            shape
        )
        .into());
    }
    let ppo = PpoConfig {
        learning_rate: a.lr,
        rollout_window: a.rollout_window,
        episode_cap: a.episode_cap,
        reward_mode: match a.reward {
            RewardKind::Absolute => RewardMode::Absolute,
            RewardKind::Delta => RewardMode::Delta,
        },
        ..PpoConfig::default()
    };
    let config = PolicyConfig::new(shape).with_hidden(&a.hidden).with_seed(seed).with_ppo(ppo);
    log::info!("training on {} instances of shape {shape}", entries.len());
    let mut policy = Policy::new(config);
    let formulas: Vec<_> = entries.into_iter().map(|e| e.1).collect();
    let options = TrainOptions {
        steps: a.steps,
        seed,
        checkpoint_every: a.checkpoint_every,
        checkpoint_dir: a.checkpoint_every.map(|_| {
            a.out.parent().map(PathBuf::from).unwrap_or_default()
        }),
    };
    let log = train(&formulas, &mut policy, &options)?;
    write_policy(&policy, &a.out)?;
    let log_path = a.log.clone().unwrap_or_else(|| sibling_path(&a.out, ".log.csv"));
    fs::write(&log_path, log.to_csv()).with_context(|| format!("cannot write {}", log_path.display()))?;
    if let Some((first, last)) = log.quartile_means() {
        println!("mean episode reward: first quartile {first:.3}, last quartile {last:.3}");
    }
    println!("{} windows; policy written to {}", log.windows.len(), a.out.display());
    Ok(0)
}
