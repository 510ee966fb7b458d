//! Benchmark harness: random 3-SAT datasets, loading and splitting, the side-by-side
//! VSIDS versus learned-policy comparison, and its summary statistics.

pub mod compare;
pub mod dataset;
pub mod record;
pub mod split;
pub mod summary;

pub use compare::{run_comparison, CompareConfig, Comparison, Instance};
pub use dataset::{
    generate_satisfiable, load_dataset, random_3sat, write_dataset, Dataset, DatasetError,
    LoadOptions,
};
pub use record::{read_csv, write_csv, BenchRecord, RecordVerdict, CSV_HEADER, CSV_SCHEMA_VERSION};
pub use split::{split_dataset, DatasetSplit};
pub use summary::{median, summarize, HeuristicSummary, Summary, SummaryError};
