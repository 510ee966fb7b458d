use std::time::Duration;

use satrl_agent::{read_policy, DecideMode, RlHeuristic};
use satrl_core::{BranchingHeuristic, Limits, RandomHeuristic, SolverState, Verdict, VsidsHeuristic};

use crate::args::{HeuristicKind, SolveArgs};
use crate::convert::read_cnf;
use crate::CmdResult;

pub fn run(a: &SolveArgs, seed: u64) -> CmdResult {
    let f = read_cnf(&a.file)?;
    let limits = Limits {
        max_decisions: a.max_decisions,
        timeout: a.timeout_ms.map(Duration::from_millis),
    };
    let policy = match &a.policy {
        Some(p) if a.heuristic == HeuristicKind::Rl => Some(read_policy(p)?),
        _ => None,
    };
    let mut h: Box<dyn BranchingHeuristic + '_> = match a.heuristic {
        HeuristicKind::Vsids => Box::new(VsidsHeuristic::new(f.num_vars())),
        HeuristicKind::Random => Box::new(RandomHeuristic::new(seed)),
        HeuristicKind::Rl => Box::new(RlHeuristic::new(
            policy.as_ref().expect("clap requires --policy"),
            &f,
            DecideMode::Greedy,
            seed,
        )?),
    };
    let out = SolverState::new(&f).solve(h.as_mut(), limits);
    let s = &out.stats;
    let code = match &out.verdict {
        Verdict::Sat(model) => {
            println!("s SATISFIABLE");
            let lits: Vec<String> = model.to_literals().iter().map(i64::to_string).collect();
            println!("v {} 0", lits.join(" "));
            10
        }
        Verdict::Unsat => {
            println!("s UNSATISFIABLE");
            20
        }
        Verdict::Unknown(reason) => {
            println!("s UNKNOWN");
            println!("c reason={reason}");
            0
        }
    };
    println!(
        "c heuristic={} decisions={} conflicts={} propagations={} learned={} restarts={} time_s={}",
        h.name(),
        s.decisions,
        s.conflicts,
        s.propagations,
        s.learned_clauses,
        s.restarts,
        s.wall_time.as_secs_f64()
    );
    Ok(code)
}
