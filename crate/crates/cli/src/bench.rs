use std::fs;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{anyhow, Context};
use satrl_agent::read_policy;
use satrl_bench::{
    generate_satisfiable, load_dataset, run_comparison, split_dataset, summarize, write_csv, write_dataset,
    CompareConfig, Instance, LoadOptions,
};
use satrl_core::Limits;

use crate::args::{BenchArgs, GenerateArgs, Subset};
use crate::{sibling_path, CmdResult};

pub fn run(a: &BenchArgs, seed: u64) -> CmdResult {
    let policy = read_policy(&a.policy).with_context(|| format!("policy {}", a.policy.display()))?;
    let ds = load_dataset(&a.dataset, LoadOptions { strict: a.strict, expect_shape: None })?;
    let paths: Vec<PathBuf> = ds.paths();
    let keep: Vec<PathBuf> = match a.subset {
        Subset::All => paths,
        Subset::Train => split_dataset(&paths, 0.8, a.split_seed).train,
        Subset::Test => split_dataset(&paths, 0.8, a.split_seed).test,
    };
    let instances: Vec<Instance> = ds
        .entries
        .into_iter()
        .filter(|(p, _)| keep.contains(p))
        .map(|(p, formula)| Instance {
            name: p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
            formula,
        })
        .collect();
    if instances.is_empty() {
        return Err(anyhow!("no instances to benchmark in {}", a.dataset.display()).into());
    }
    if a.parallel > 1 {
        log::warn!("running {} instances concurrently; wall times are less comparable", a.parallel);
    }
    let cfg = CompareConfig {
        limits: Limits::timeout(Duration::from_millis(a.timeout_ms)),
        repetitions: a.reps.max(1),
        seed,
        parallel: a.parallel,
    };
    log::info!("benchmarking {} instances", instances.len());
    let cmp = run_comparison(&instances, &policy, &cfg)?;
    fs::write(&a.out, write_csv(&cmp.records)).with_context(|| format!("cannot write {}", a.out.display()))?;

    let mut features = String::from("instance,feature_time_s\n");
    for (name, t) in &cmp.feature_times {
        features += &format!("{name},{t}\n");
    }
    fs::write(sibling_path(&a.out, ".features.csv"), features)?;

    let summary = summarize(&cmp.records)?;
    let mean_feature = cmp.feature_times.iter().map(|f| f.1).sum::<f64>() / cmp.feature_times.len() as f64;
    let kv = format!("{}rl.mean_feature_time_s={mean_feature}\n", summary.to_key_values());
    fs::write(sibling_path(&a.out, ".summary.txt"), kv)?;
    println!("{summary}");
    println!("mean feature extraction time {mean_feature:.6} s (not included in rl times)");
    Ok(0)
}

pub fn generate(a: &GenerateArgs, seed: u64) -> CmdResult {
    if a.vars < 3 {
        return Err(crate::Failure::usage(anyhow!("--vars must be at least 3")));
    }
    fs::create_dir_all(&a.out).with_context(|| format!("cannot create {}", a.out.display()))?;
    let prefix = a.prefix.clone().unwrap_or_else(|| format!("rand3sat-{}-{}", a.vars, a.clauses));
    let formulas = generate_satisfiable(a.vars, a.clauses, a.count, seed);
    let written = write_dataset(&a.out, &prefix, &formulas)?;
    println!("wrote {} satisfiable instances to {}", written.len(), a.out.display());
    Ok(0)
}
