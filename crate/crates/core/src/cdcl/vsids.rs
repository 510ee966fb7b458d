//! VSIDS branching.
//!
//! Activities are bumped by a growing increment instead of decaying every score:
//! after each conflict the increment is divided by the decay factor, which keeps
//! the ratios identical to multiplying all scores by `decay`. When any activity
//! exceeds [`VSIDS_RESCALE_LIMIT`] all activities and the increment are scaled down
//! together. Polarity comes from the solver's saved phase.

use super::heap::VarHeap;
use super::heuristic::{BranchingHeuristic, HeuristicDecision};
use super::solver::SolverState;
use crate::cnf::{Assignment, Clause, VarValue};

pub const VSIDS_DECAY: f64 = 0.95;
pub const VSIDS_INITIAL_BUMP: f64 = 1.0;
pub const VSIDS_RESCALE_LIMIT: f64 = 1e100;

/// Per-variable activity scores.
#[derive(Debug, Clone, PartialEq)]
pub struct Vsids {
    activity: Vec<f64>,
    bump: f64,
    decay: f64,
}

impl Vsids {
    pub fn new(num_vars: usize) -> Self {
        Self::with_params(num_vars, VSIDS_INITIAL_BUMP, VSIDS_DECAY)
    }

    pub fn with_params(num_vars: usize, bump: f64, decay: f64) -> Self {
        assert!(decay > 0.0 && decay < 1.0, "decay must lie in (0, 1)");
        Vsids {
            activity: vec![0.0; num_vars],
            bump,
            decay,
        }
    }

    /// Activity of 1-based `var`.
    pub fn activity(&self, var: u32) -> f64 {
        self.activity[var as usize - 1]
    }

    pub fn activities(&self) -> &[f64] {
        &self.activity
    }

    pub fn bump_amount(&self) -> f64 {
        self.bump
    }

    pub fn set_activity(&mut self, var: u32, value: f64) {
        self.activity[var as usize - 1] = value;
    }

    /// Bumps every variable of `learned`, then decays. Returns true when a rescale happened.
    pub fn on_conflict(&mut self, learned: &Clause) -> bool {
        let mut rescale = false;
        for lit in learned.literals() {
            let a = &mut self.activity[lit.index()];
            *a += self.bump;
            rescale |= *a > VSIDS_RESCALE_LIMIT;
        }
        self.bump /= self.decay;
        if rescale || self.bump > VSIDS_RESCALE_LIMIT {
            self.rescale();
            return true;
        }
        false
    }

    fn rescale(&mut self) {
        let factor = 1.0 / VSIDS_RESCALE_LIMIT;
        for a in &mut self.activity {
            *a *= factor;
        }
        self.bump *= factor;
    }

    /// Unassigned variable with the highest activity (lowest index on ties), with
    /// its saved phase as the value. `phases[i]` is the phase of variable `i + 1`.
    pub fn pick(&self, a: &Assignment, phases: impl Fn(u32) -> bool) -> Option<HeuristicDecision> {
        let mut best: Option<u32> = None;
        for (i, v) in a.values().iter().enumerate() {
            if *v != VarValue::Unassigned {
                continue;
            }
            let var = i as u32 + 1;
            if best.is_none_or(|b| self.activity[i] > self.activity[b as usize - 1]) {
                best = Some(var);
            }
        }
        best.map(|var| HeuristicDecision {
            var,
            value: phases(var),
        })
    }
}

/// VSIDS as a [`BranchingHeuristic`], selecting through an activity heap.
#[derive(Debug, Clone)]
pub struct VsidsHeuristic {
    scores: Vsids,
    heap: VarHeap,
}

impl VsidsHeuristic {
    pub fn new(num_vars: usize) -> Self {
        Self::from_scores(Vsids::new(num_vars))
    }

    pub fn from_scores(scores: Vsids) -> Self {
        let heap = VarHeap::with_all(scores.activity.len(), &scores.activity);
        VsidsHeuristic { scores, heap }
    }

    pub fn scores(&self) -> &Vsids {
        &self.scores
    }
}

impl BranchingHeuristic for VsidsHeuristic {
    fn name(&self) -> &str {
        "vsids"
    }

    fn init(&mut self, state: &SolverState) {
        if self.scores.activity.len() != state.num_vars() {
            *self = VsidsHeuristic::new(state.num_vars());
        }
    }

    fn pick(&mut self, state: &SolverState) -> Option<HeuristicDecision> {
        while let Some(v) = self.heap.pop(&self.scores.activity) {
            let var = v + 1;
            if state.value(var) == VarValue::Unassigned {
                return Some(HeuristicDecision {
                    var,
                    value: state.saved_phase(var),
                });
            }
        }
        None
    }

    fn on_conflict(&mut self, learned: &Clause) {
        if self.scores.on_conflict(learned) {
            self.heap.rebuild(&self.scores.activity);
        } else {
            for lit in learned.literals() {
                self.heap.increased(lit.index() as u32, &self.scores.activity);
            }
        }
    }

    fn on_unassign(&mut self, var: u32) {
        self.heap.insert(var - 1, &self.scores.activity);
    }
}
