//! Conflict-driven clause learning with a pluggable branching heuristic.
//!
//! The search loop is: observe the state, ask the heuristic for a decision, assign
//! it at a fresh decision level, propagate, and either report SAT (every variable
//! assigned) or, on conflict, learn a 1-UIP clause and backjump. A conflict at
//! decision level 0 proves the formula unsatisfiable.

mod heap;
mod heuristic;
mod solver;
mod vsids;

pub use heuristic::{BranchingHeuristic, HeuristicDecision, RandomHeuristic};
pub use solver::{
    solve, ClauseRef, LimitReason, Limits, Propagation, Reason, SolveOutcome, SolveStats,
    SolverConfig, SolverState, TrailEntry, Verdict,
};
pub use vsids::{Vsids, VsidsHeuristic, VSIDS_DECAY, VSIDS_INITIAL_BUMP, VSIDS_RESCALE_LIMIT};
