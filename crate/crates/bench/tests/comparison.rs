use satrl_agent::{Policy, PolicyConfig, Shape};
use satrl_bench::{read_csv, run_comparison, summarize, write_csv, CompareConfig, Instance, RecordVerdict};
use satrl_core::Limits;

fn instances(count: usize) -> Vec<Instance> {
    satrl_bench::generate_satisfiable(12, 50, count, 11)
        .into_iter()
        .enumerate()
        .map(|(i, formula)| Instance { name: format!("g{i}"), formula })
        .collect()
}

#[test]
fn both_heuristics_solve_every_instance() {
    let insts = instances(6);
    let policy = Policy::new(PolicyConfig::new(Shape::new(12, 50)).with_hidden(&[16, 16]).with_seed(2));
    let cfg = CompareConfig { repetitions: 2, ..CompareConfig::default() };
    let cmp = run_comparison(&insts, &policy, &cfg).unwrap();
    assert_eq!(cmp.records.len(), 12);
    assert_eq!(cmp.feature_times.len(), 6);
    assert!(cmp.records.iter().all(|r| r.verdict == RecordVerdict::Sat && r.time_s >= 0.0));
    assert_eq!(cmp.records[0].heuristic, "vsids");
    assert_eq!(cmp.records[1].heuristic, "rl");
    let s = summarize(&cmp.records).unwrap();
    assert_eq!(s.instances, 6);
    assert_eq!(read_csv(&write_csv(&cmp.records)).unwrap(), cmp.records);
}

#[test]
fn parallel_run_matches_sequential_counts() {
    let insts = instances(5);
    let policy = Policy::new(PolicyConfig::new(Shape::new(12, 50)).with_hidden(&[8]).with_seed(4));
    let seq = run_comparison(&insts, &policy, &CompareConfig { repetitions: 1, ..Default::default() }).unwrap();
    let par = run_comparison(&insts, &policy, &CompareConfig { repetitions: 1, parallel: 3, ..Default::default() }).unwrap();
    let key = |c: &satrl_bench::Comparison| {
        c.records.iter().map(|r| (r.instance.clone(), r.heuristic.clone(), r.decisions, r.conflicts)).collect::<Vec<_>>()
    };
    assert_eq!(key(&seq), key(&par));
}

#[test]
fn decision_limit_gives_unknown_not_error() {
    let insts = instances(3);
    let policy = Policy::new(PolicyConfig::new(Shape::new(12, 50)).with_hidden(&[8]).with_seed(4));
    let cfg = CompareConfig { limits: Limits::decisions(0), repetitions: 1, ..Default::default() };
    let cmp = run_comparison(&insts, &policy, &cfg).unwrap();
    assert!(cmp.records.iter().all(|r| r.verdict != RecordVerdict::Sat || r.decisions == 0));
}

#[test]
fn wrong_shape_policy_is_rejected() {
    let insts = instances(1);
    let policy = Policy::new(PolicyConfig::new(Shape::new(20, 91)).with_hidden(&[4]));
    assert!(run_comparison(&insts, &policy, &CompareConfig::default()).is_err());
}
