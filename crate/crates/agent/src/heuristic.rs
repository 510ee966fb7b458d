//! The policy as a solver heuristic, and episode collection.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use satrl_core::{
    Assignment, BranchingHeuristic, CnfFormula, HeuristicDecision, Limits, SolveOutcome,
    SolverState, Verdict,
};

use crate::error::AgentError;
use crate::observation::{compute_reward, Observation, ObservationBuilder, RewardMode, Shape};
use crate::policy::{policy_decide, DecideMode, Policy};

#[derive(Debug, Clone)]
pub struct Transition {
    pub observation: Observation,
    pub action: usize,
    pub log_prob: f64,
    pub reward: i64,
    pub value: f64,
    pub done: bool,
}

/// Branching heuristic backed by a [`Policy`]. With recording enabled it keeps one
/// [`Transition`] per decision for training.
pub struct RlHeuristic<'p> {
    policy: &'p Policy,
    builder: ObservationBuilder,
    mode: DecideMode,
    rng: ChaCha8Rng,
    record: bool,
    transitions: Vec<Transition>,
    /// Satisfied-minus-falsified count after each recorded decision's propagation.
    scores: Vec<i64>,
    initial_score: i64,
}

impl<'p> RlHeuristic<'p> {
    pub fn new(
        policy: &'p Policy,
        formula: &CnfFormula,
        mode: DecideMode,
        seed: u64,
    ) -> Result<Self, AgentError> {
        policy.check_shape(Shape::of(formula))?;
        Ok(RlHeuristic {
            policy,
            builder: ObservationBuilder::with_extracted_features(formula)?,
            mode,
            rng: ChaCha8Rng::seed_from_u64(seed),
            record: false,
            transitions: Vec::new(),
            scores: Vec::new(),
            initial_score: 0,
        })
    }

    pub fn recording(mut self) -> Self {
        self.record = true;
        self
    }

    fn score(&self, a: &Assignment) -> i64 {
        compute_reward(&self.builder.observe(a).clause_eval)
    }

    /// Recorded transitions with rewards filled in. `final_score` replaces the score
    /// of the last decision when the episode reached a better-known terminal state.
    pub fn into_transitions(mut self, final_score: Option<i64>, mode: RewardMode) -> Vec<Transition> {
        self.transitions.truncate(self.scores.len());
        if let (Some(s), Some(last)) = (final_score, self.scores.last_mut()) {
            *last = s;
        }
        let mut prev = self.initial_score;
        for (t, &s) in self.transitions.iter_mut().zip(&self.scores) {
            t.reward = match mode {
                RewardMode::Absolute => s,
                RewardMode::Delta => s - prev,
            };
            prev = s;
        }
        if let Some(last) = self.transitions.last_mut() {
            last.done = true;
        }
        self.transitions
    }
}

impl BranchingHeuristic for RlHeuristic<'_> {
    fn name(&self) -> &str {
        "rl"
    }

    fn init(&mut self, state: &SolverState) {
        self.initial_score = self.score(state.assignment());
    }

    fn pick(&mut self, state: &SolverState) -> Option<HeuristicDecision> {
        let o = self.builder.observe(state.assignment());
        let d = policy_decide(self.policy, &o, state.assignment(), self.mode, &mut self.rng).ok()?;
        if self.record {
            let value = self.policy.value(&o);
            self.transitions.push(Transition {
                observation: o,
                action: d.action,
                log_prob: d.log_prob,
                reward: 0,
                value,
                done: false,
            });
        }
        Some(d.decision)
    }

    fn on_decision_propagated(&mut self, state: &SolverState, _conflict: bool) {
        if self.record && self.scores.len() < self.transitions.len() {
            self.scores.push(self.score(state.assignment()));
        }
    }
}

#[derive(Debug, Clone)]
pub struct Episode {
    pub transitions: Vec<Transition>,
    pub outcome: SolveOutcome,
}

impl Episode {
    pub fn total_reward(&self) -> i64 {
        self.transitions.iter().map(|t| t.reward).sum()
    }
}

/// Solves `f` with the sampling policy, recording one transition per decision.
///
/// A transition's reward is the clause score after the propagation following its
/// decision. When the episode ends SAT, the last transition is scored on the final
/// model instead, since conflict resolution may have completed the assignment after
/// the last decision.
pub fn run_episode(
    f: &CnfFormula,
    policy: &Policy,
    limits: Limits,
    seed: u64,
) -> Result<Episode, AgentError> {
    let mut h = RlHeuristic::new(policy, f, DecideMode::Sample, seed)?.recording();
    let mut state = SolverState::new(f);
    let outcome = state.solve(&mut h, limits);
    let final_score = match &outcome.verdict {
        Verdict::Sat(model) => Some(h.score(model)),
        _ => None,
    };
    let transitions = h.into_transitions(final_score, policy.config().ppo.reward_mode);
    Ok(Episode {
        transitions,
        outcome,
    })
}
