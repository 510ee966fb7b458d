//! Core SAT machinery: an integer-encoded CNF model with DIMACS reading and
//! writing, a CDCL solver whose branching decisions come from a pluggable
//! [`BranchingHeuristic`], and a fixed-width global feature vector.

pub mod cdcl;
pub mod cnf;
pub mod dimacs;
pub mod features;

pub use cdcl::{
    solve, BranchingHeuristic, HeuristicDecision, LimitReason, Limits, Propagation,
    RandomHeuristic, SolveOutcome, SolveStats, SolverConfig, SolverState, Verdict, Vsids,
    VsidsHeuristic,
};
pub use cnf::{Assignment, Clause, CnfError, CnfFormula, Eval, Literal, VarValue};
pub use dimacs::{parse_dimacs, read_dimacs, write_dimacs, DimacsError};
pub use features::{extract_features, FeatureError, FeatureVector, FEATURE_COUNT};
