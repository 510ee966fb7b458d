use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::solver::SolverState;
use crate::cnf::{Clause, Literal, VarValue};

/// A branching decision: assign `var` (1-based) to `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HeuristicDecision {
    pub var: u32,
    pub value: bool,
}

impl HeuristicDecision {
    pub fn literal(self) -> Literal {
        Literal::new(self.var, !self.value)
    }
}

/// Pick-branching-variable interface. All callbacks run synchronously on the
/// solver thread.
pub trait BranchingHeuristic {
    fn name(&self) -> &str;

    /// Called once, after the root-level propagation and before the first decision.
    fn init(&mut self, _state: &SolverState) {}

    /// Choose an unassigned variable and its value. Only called while at least one
    /// variable is unassigned. Returning `None`, or an already assigned variable,
    /// stops the search with an unknown verdict.
    fn pick(&mut self, state: &SolverState) -> Option<HeuristicDecision>;

    /// Called with every learned clause, before backjumping.
    fn on_conflict(&mut self, _learned: &Clause) {}

    /// Called for every variable unassigned by a backjump.
    fn on_unassign(&mut self, _var: u32) {}

    /// Called right after the propagation that follows a decision. `conflict` tells
    /// whether that propagation hit a conflict; the state still holds the
    /// conflicting assignment.
    fn on_decision_propagated(&mut self, _state: &SolverState, _conflict: bool) {}
}

impl<H: BranchingHeuristic + ?Sized> BranchingHeuristic for &mut H {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn init(&mut self, state: &SolverState) {
        (**self).init(state)
    }
    fn pick(&mut self, state: &SolverState) -> Option<HeuristicDecision> {
        (**self).pick(state)
    }
    fn on_conflict(&mut self, learned: &Clause) {
        (**self).on_conflict(learned)
    }
    fn on_unassign(&mut self, var: u32) {
        (**self).on_unassign(var)
    }
    fn on_decision_propagated(&mut self, state: &SolverState, conflict: bool) {
        (**self).on_decision_propagated(state, conflict)
    }
}

impl<H: BranchingHeuristic + ?Sized> BranchingHeuristic for Box<H> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn init(&mut self, state: &SolverState) {
        (**self).init(state)
    }
    fn pick(&mut self, state: &SolverState) -> Option<HeuristicDecision> {
        (**self).pick(state)
    }
    fn on_conflict(&mut self, learned: &Clause) {
        (**self).on_conflict(learned)
    }
    fn on_unassign(&mut self, var: u32) {
        (**self).on_unassign(var)
    }
    fn on_decision_propagated(&mut self, state: &SolverState, conflict: bool) {
        (**self).on_decision_propagated(state, conflict)
    }
}

/// Uniformly random unassigned variable with a random value.
#[derive(Debug, Clone)]
pub struct RandomHeuristic {
    rng: ChaCha8Rng,
}

impl RandomHeuristic {
    pub fn new(seed: u64) -> Self {
        RandomHeuristic {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl BranchingHeuristic for RandomHeuristic {
    fn name(&self) -> &str {
        "random"
    }

    fn pick(&mut self, state: &SolverState) -> Option<HeuristicDecision> {
        let free: Vec<u32> = state
            .assignment()
            .values()
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == VarValue::Unassigned)
            .map(|(i, _)| i as u32 + 1)
            .collect();
        if free.is_empty() {
            return None;
        }
        let var = free[self.rng.random_range(0..free.len())];
        Some(HeuristicDecision {
            var,
            value: self.rng.random_bool(0.5),
        })
    }
}
