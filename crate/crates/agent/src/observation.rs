//! Observation and reward.

use std::fmt;
use std::sync::Arc;

use satrl_core::{extract_features, Assignment, CnfFormula, FeatureVector, SolverState, FEATURE_COUNT};
use serde::{Deserialize, Serialize};

use crate::error::AgentError;

/// Problem shape a policy is bound to: `n` variables, `m` clauses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape {
    pub n: usize,
    pub m: usize,
}

impl Shape {
    pub fn new(n: usize, m: usize) -> Self {
        Shape { n, m }
    }

    pub fn of(f: &CnfFormula) -> Self {
        Shape::new(f.num_vars(), f.num_clauses())
    }

    /// Flattened observation length `n + m + n·m + 48`.
    pub fn observation_len(self) -> usize {
        self.n + self.m + self.n * self.m + FEATURE_COUNT
    }

    pub fn num_actions(self) -> usize {
        2 * self.n
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} vars, {} clauses)", self.n, self.m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RewardMode {
    /// Satisfied minus falsified clauses after each decision.
    #[default]
    Absolute,
    /// Change of that count since the previous decision.
    Delta,
}

/// Solver state as seen by the policy. Values are +1 / -1 / 0 for
/// true / false / unassigned (or unevaluated).
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub var_assign: Vec<i8>,
    pub clause_eval: Vec<i8>,
    /// Row-major `m × n`: entry `(i, j)` is +1 if clause `i` contains `x_{j+1}`,
    /// -1 if it contains `¬x_{j+1}`, 0 otherwise.
    pub signed_adjacency: Arc<Vec<i8>>,
    pub global: Arc<FeatureVector>,
}

impl Observation {
    pub fn shape(&self) -> Shape {
        Shape::new(self.var_assign.len(), self.clause_eval.len())
    }

    pub fn len(&self) -> usize {
        self.shape().observation_len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        out.extend(self.var_assign.iter().map(|&v| v as f64));
        out.extend(self.clause_eval.iter().map(|&v| v as f64));
        out.extend(self.signed_adjacency.iter().map(|&v| v as f64));
        out.extend_from_slice(self.global.values());
        out
    }

    /// Action `k` is legal when variable `k / 2 + 1` is unassigned.
    pub fn legal_actions(&self) -> Vec<bool> {
        self.var_assign
            .iter()
            .flat_map(|&v| [v == 0, v == 0])
            .collect()
    }
}

/// Builds observations for one formula, sharing the constant parts.
#[derive(Debug, Clone)]
pub struct ObservationBuilder {
    formula: CnfFormula,
    adjacency: Arc<Vec<i8>>,
    global: Arc<FeatureVector>,
}

impl ObservationBuilder {
    pub fn new(formula: &CnfFormula, features: FeatureVector) -> Self {
        let Shape { n, m } = Shape::of(formula);
        let mut adjacency = vec![0i8; n * m];
        for (i, clause) in formula.clauses().iter().enumerate() {
            for l in clause.literals() {
                let cell = &mut adjacency[i * n + l.index()];
                // A variable with both polarities in one clause keeps +1.
                if *cell != 1 {
                    *cell = if l.is_negated() { -1 } else { 1 };
                }
            }
        }
        ObservationBuilder {
            formula: formula.clone(),
            adjacency: Arc::new(adjacency),
            global: Arc::new(features),
        }
    }

    pub fn with_extracted_features(formula: &CnfFormula) -> Result<Self, AgentError> {
        Ok(Self::new(formula, extract_features(formula)?))
    }

    pub fn shape(&self) -> Shape {
        Shape::of(&self.formula)
    }

    pub fn observe(&self, a: &Assignment) -> Observation {
        Observation {
            var_assign: a.encode(),
            clause_eval: self
                .formula
                .clauses()
                .iter()
                .map(|c| c.evaluate(a).code())
                .collect(),
            signed_adjacency: Arc::clone(&self.adjacency),
            global: Arc::clone(&self.global),
        }
    }
}

/// Observation of `state` over its original clauses; learned clauses are ignored.
pub fn build_observation(
    state: &SolverState,
    features: &FeatureVector,
    expected: Shape,
) -> Result<Observation, AgentError> {
    let found = Shape::of(state.formula());
    if found != expected {
        return Err(AgentError::ShapeMismatch { expected, found });
    }
    Ok(ObservationBuilder::new(state.formula(), *features).observe(state.assignment()))
}

/// Number of satisfied minus number of falsified clauses.
pub fn compute_reward(clause_eval: &[i8]) -> i64 {
    clause_eval.iter().map(|&v| v as i64).sum()
}
