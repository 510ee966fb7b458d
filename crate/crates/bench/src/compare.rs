//! Side-by-side runs of VSIDS and the greedy learned policy.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use satrl_agent::{AgentError, DecideMode, Policy, RlHeuristic};
use satrl_core::{solve, BranchingHeuristic, CnfFormula, Limits, SolveOutcome, Verdict, VsidsHeuristic};

use crate::record::{BenchRecord, RecordVerdict};

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub formula: CnfFormula,
}

#[derive(Debug, Clone)]
pub struct CompareConfig {
    pub limits: Limits,
    /// Runs per heuristic and instance; the fastest is reported.
    pub repetitions: usize,
    pub seed: u64,
    /// Instances solved concurrently. Above 1, wall times are less comparable.
    pub parallel: usize,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            limits: Limits::none(),
            repetitions: 3,
            seed: 0,
            parallel: 1,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Comparison {
    /// Two records per instance, baseline first, in instance order.
    pub records: Vec<BenchRecord>,
    /// Feature-extraction time of the policy heuristic, per instance, in seconds.
    pub feature_times: Vec<(String, f64)>,
}

fn timed(f: &CnfFormula, h: &mut dyn BranchingHeuristic, limits: &Limits) -> (SolveOutcome, f64) {
    let start = Instant::now();
    let out = solve(f, h, *limits);
    (out, start.elapsed().as_secs_f64())
}

fn record(inst: &Instance, heuristic: &str, out: &SolveOutcome, time_s: f64, seed: u64) -> BenchRecord {
    if let Verdict::Sat(model) = &out.verdict {
        assert!(inst.formula.is_satisfied_by(model), "{heuristic} returned a bad model on {}", inst.name);
    }
    BenchRecord {
        instance: inst.name.clone(),
        heuristic: heuristic.to_string(),
        verdict: RecordVerdict::from(&out.verdict),
        time_s,
        decisions: out.stats.decisions,
        conflicts: out.stats.conflicts,
        propagations: out.stats.propagations,
        seed,
    }
}

fn best_of(reps: usize, mut run: impl FnMut() -> (SolveOutcome, f64)) -> (SolveOutcome, f64) {
    let mut best = run();
    for _ in 1..reps {
        let next = run();
        if next.1 < best.1 {
            best = next;
        }
    }
    best
}

fn compare_one(
    inst: &Instance,
    policy: &Policy,
    cfg: &CompareConfig,
) -> Result<([BenchRecord; 2], f64), AgentError> {
    let reps = cfg.repetitions.max(1);
    let n = inst.formula.num_vars();
    let (base, base_t) = best_of(reps, || timed(&inst.formula, &mut VsidsHeuristic::new(n), &cfg.limits));

    let mut feature_time = f64::INFINITY;
    let mut rl_runs = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        let mut h = RlHeuristic::new(policy, &inst.formula, DecideMode::Greedy, cfg.seed)?;
        feature_time = feature_time.min(start.elapsed().as_secs_f64());
        rl_runs.push(timed(&inst.formula, &mut h, &cfg.limits));
    }
    let (rl, rl_t) = rl_runs
        .into_iter()
        .reduce(|a, b| if b.1 < a.1 { b } else { a })
        .unwrap();
    Ok((
        [
            record(inst, "vsids", &base, base_t, cfg.seed),
            record(inst, "rl", &rl, rl_t, cfg.seed),
        ],
        feature_time,
    ))
}

/// Runs both heuristics on every instance under identical limits.
pub fn run_comparison(
    instances: &[Instance],
    policy: &Policy,
    cfg: &CompareConfig,
) -> Result<Comparison, AgentError> {
    for inst in instances {
        policy.check_shape(satrl_agent::Shape::of(&inst.formula))?;
    }
    let results: Vec<([BenchRecord; 2], f64)> = if cfg.parallel <= 1 {
        instances
            .iter()
            .map(|inst| compare_one(inst, policy, cfg))
            .collect::<Result<_, _>>()?
    } else {
        let next = AtomicUsize::new(0);
        let slots: Mutex<Vec<Option<Result<([BenchRecord; 2], f64), AgentError>>>> =
            Mutex::new((0..instances.len()).map(|_| None).collect());
        std::thread::scope(|s| {
            for _ in 0..cfg.parallel.min(instances.len()) {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(inst) = instances.get(i) else { break };
                    let r = compare_one(inst, policy, cfg);
                    slots.lock().unwrap()[i] = Some(r);
                });
            }
        });
        slots
            .into_inner()
            .unwrap()
            .into_iter()
            .map(|r| r.expect("every slot filled"))
            .collect::<Result<_, _>>()?
    };
    let mut cmp = Comparison::default();
    for (inst, (records, ft)) in instances.iter().zip(results) {
        cmp.records.extend(records);
        cmp.feature_times.push((inst.name.clone(), ft));
    }
    Ok(cmp)
}
