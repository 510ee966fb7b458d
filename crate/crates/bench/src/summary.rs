//! Aggregate statistics over a set of benchmark records.

use std::collections::BTreeMap;
use std::fmt;

use crate::record::{BenchRecord, RecordVerdict};

pub const BASELINE: &str = "vsids";
pub const CANDIDATE: &str = "rl";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SummaryError {
    #[error("no records for heuristic `{0}`")]
    Missing(&'static str),
    #[error("heuristics cover different instances (only {BASELINE}: {only_baseline:?}, only {CANDIDATE}: {only_candidate:?})")]
    MismatchedCoverage {
        only_baseline: Vec<String>,
        only_candidate: Vec<String>,
    },
    #[error("duplicate record for `{instance}` under `{heuristic}`")]
    Duplicate { instance: String, heuristic: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicSummary {
    pub name: String,
    pub instances: usize,
    pub solved: usize,
    pub unknown: usize,
    pub median_time_s: f64,
    pub mean_time_s: f64,
    pub median_decisions: f64,
    pub mean_decisions: f64,
    pub mean_conflicts: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub instances: usize,
    pub baseline: HeuristicSummary,
    pub candidate: HeuristicSummary,
    /// Share of all instances on which the candidate was strictly faster.
    pub candidate_faster: f64,
}

/// Median with linear interpolation between the two middle values.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    if v.len() % 2 == 1 {
        v[k]
    } else {
        (v[k - 1] + v[k]) / 2.0
    }
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        f64::NAN
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

fn by_instance<'a>(
    records: &'a [BenchRecord],
    heuristic: &'static str,
) -> Result<BTreeMap<&'a str, &'a BenchRecord>, SummaryError> {
    let mut out = BTreeMap::new();
    for r in records.iter().filter(|r| r.heuristic == heuristic) {
        if out.insert(r.instance.as_str(), r).is_some() {
            return Err(SummaryError::Duplicate {
                instance: r.instance.clone(),
                heuristic: r.heuristic.clone(),
            });
        }
    }
    if out.is_empty() {
        return Err(SummaryError::Missing(heuristic));
    }
    Ok(out)
}

fn describe(name: &str, rs: &[&BenchRecord]) -> HeuristicSummary {
    let col = |f: fn(&BenchRecord) -> f64| rs.iter().map(|r| f(r)).collect::<Vec<_>>();
    let times = col(|r| r.time_s);
    let decisions = col(|r| r.decisions as f64);
    HeuristicSummary {
        name: name.to_string(),
        instances: rs.len(),
        solved: rs.iter().filter(|r| r.verdict != RecordVerdict::Unknown).count(),
        unknown: rs.iter().filter(|r| r.verdict == RecordVerdict::Unknown).count(),
        median_time_s: median(&times),
        mean_time_s: mean(&times),
        median_decisions: median(&decisions),
        mean_decisions: mean(&decisions),
        mean_conflicts: mean(&col(|r| r.conflicts as f64)),
    }
}

/// Compares the `rl` records against the `vsids` ones. Both must cover the same
/// instances exactly once. The result does not depend on record order.
pub fn summarize(records: &[BenchRecord]) -> Result<Summary, SummaryError> {
    let base = by_instance(records, BASELINE)?;
    let cand = by_instance(records, CANDIDATE)?;
    let only_baseline: Vec<String> = base.keys().filter(|k| !cand.contains_key(*k)).map(|k| k.to_string()).collect();
    let only_candidate: Vec<String> = cand.keys().filter(|k| !base.contains_key(*k)).map(|k| k.to_string()).collect();
    if !only_baseline.is_empty() || !only_candidate.is_empty() {
        return Err(SummaryError::MismatchedCoverage {
            only_baseline,
            only_candidate,
        });
    }
    let faster = base
        .iter()
        .filter(|(k, b)| cand[*k].time_s < b.time_s)
        .count();
    let base: Vec<&BenchRecord> = base.into_values().collect();
    let cand: Vec<&BenchRecord> = cand.into_values().collect();
    Ok(Summary {
        instances: base.len(),
        candidate_faster: faster as f64 / base.len() as f64,
        baseline: describe(BASELINE, &base),
        candidate: describe(CANDIDATE, &cand),
    })
}

impl Summary {
    /// One `key=value` pair per line.
    pub fn to_key_values(&self) -> String {
        let mut out = format!("instances={}\n", self.instances);
        for h in [&self.baseline, &self.candidate] {
            let p = &h.name;
            out += &format!("{p}.solved={}\n", h.solved);
            out += &format!("{p}.unknown={}\n", h.unknown);
            out += &format!("{p}.median_time_s={}\n", h.median_time_s);
            out += &format!("{p}.mean_time_s={}\n", h.mean_time_s);
            out += &format!("{p}.median_decisions={}\n", h.median_decisions);
            out += &format!("{p}.mean_decisions={}\n", h.mean_decisions);
            out += &format!("{p}.mean_conflicts={}\n", h.mean_conflicts);
        }
        out += &format!("{CANDIDATE}.faster_fraction={}\n", self.candidate_faster);
        out
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} instances", self.instances)?;
        writeln!(
            f,
            "{:<8} {:>7} {:>8} {:>12} {:>12} {:>10} {:>10} {:>10}",
            "", "solved", "unknown", "median s", "mean s", "med dec", "mean dec", "mean confl"
        )?;
        for h in [&self.baseline, &self.candidate] {
            writeln!(
                f,
                "{:<8} {:>7} {:>8} {:>12.6} {:>12.6} {:>10.1} {:>10.1} {:>10.1}",
                h.name,
                h.solved,
                h.unknown,
                h.median_time_s,
                h.mean_time_s,
                h.median_decisions,
                h.mean_decisions,
                h.mean_conflicts
            )?;
        }
        write!(
            f,
            "{CANDIDATE} strictly faster on {:.1}% of instances",
            100.0 * self.candidate_faster
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn rec(instance: &str, heuristic: &str, time_s: f64) -> BenchRecord {
        BenchRecord {
            instance: instance.into(),
            heuristic: heuristic.into(),
            verdict: RecordVerdict::Sat,
            time_s,
            decisions: 10,
            conflicts: 2,
            propagations: 30,
            seed: 0,
        }
    }

    fn records(rl: &[f64], vsids: &[f64]) -> Vec<BenchRecord> {
        let mut out = Vec::new();
        for (i, (&a, &b)) in rl.iter().zip(vsids).enumerate() {
            out.push(rec(&format!("i{i}"), "rl", a));
            out.push(rec(&format!("i{i}"), "vsids", b));
        }
        out
    }

    #[test]
    fn worked_example() {
        let s = summarize(&records(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0])).unwrap();
        assert_eq!(s.candidate.median_time_s, 2.0);
        assert_eq!(s.baseline.median_time_s, 2.0);
        assert!((s.candidate_faster - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn identical_times_are_never_faster() {
        let s = summarize(&records(&[0.5; 4], &[0.5; 4])).unwrap();
        assert_eq!(s.candidate_faster, 0.0);
    }

    #[test]
    fn even_median_interpolates() {
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), 2.5);
        assert!(median(&[]).is_nan());
    }

    #[test]
    fn coverage_must_match() {
        let mut rs = records(&[1.0, 2.0], &[1.0, 2.0]);
        rs.push(rec("extra", "vsids", 1.0));
        assert_eq!(
            summarize(&rs),
            Err(SummaryError::MismatchedCoverage {
                only_baseline: vec!["extra".into()],
                only_candidate: vec![],
            })
        );
        rs.push(rec("extra", "vsids", 1.0));
        assert!(matches!(summarize(&rs), Err(SummaryError::Duplicate { .. })));
        assert_eq!(summarize(&[rec("a", "rl", 1.0)]), Err(SummaryError::Missing("vsids")));
    }

    #[test]
    fn key_values_and_text() {
        let s = summarize(&records(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0])).unwrap();
        let kv = s.to_key_values();
        assert!(kv.contains("rl.median_time_s=2\n"));
        assert!(kv.contains("rl.faster_fraction=0.3333"));
        assert!(s.to_string().contains("33.3%"));
    }
}
