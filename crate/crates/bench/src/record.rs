//! Per-instance benchmark records and their CSV form.

use std::fmt;

use serde::{Deserialize, Serialize};
use satrl_core::Verdict;

pub const CSV_HEADER: &str = "instance,heuristic,verdict,time_s,decisions,conflicts,propagations,seed";
pub const CSV_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RecordVerdict {
    Sat,
    Unsat,
    Unknown,
}

impl From<&Verdict> for RecordVerdict {
    fn from(v: &Verdict) -> Self {
        match v {
            Verdict::Sat(_) => RecordVerdict::Sat,
            Verdict::Unsat => RecordVerdict::Unsat,
            Verdict::Unknown(_) => RecordVerdict::Unknown,
        }
    }
}

impl fmt::Display for RecordVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Field order matches [`CSV_HEADER`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub instance: String,
    pub heuristic: String,
    pub verdict: RecordVerdict,
    /// Wall time of the solve call alone.
    pub time_s: f64,
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub seed: u64,
}

pub fn write_csv(records: &[BenchRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).expect("in-memory CSV write");
    }
    if records.is_empty() {
        w.write_record(CSV_HEADER.split(',')).expect("in-memory CSV write");
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV flush")).expect("CSV output is UTF-8")
}

pub fn read_csv(text: &str) -> Result<Vec<BenchRecord>, csv::Error> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != CSV_HEADER {
        return Err(csv::Error::from(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            format!("unexpected CSV header `{header}`"),
        )));
    }
    r.deserialize().collect()
}
