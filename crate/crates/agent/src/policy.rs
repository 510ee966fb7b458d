//! Actor-critic policy and action selection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use satrl_core::{Assignment, HeuristicDecision, VarValue};
use serde::{Deserialize, Serialize};

use crate::error::AgentError;
use crate::mlp::{Mlp, SparseInput};
use crate::observation::{Observation, RewardMode, Shape};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PpoConfig {
    pub learning_rate: f64,
    pub clip_epsilon: f64,
    pub gamma: f64,
    pub gae_lambda: f64,
    pub epochs: usize,
    pub minibatch_size: usize,
    pub value_coef: f64,
    pub entropy_coef: f64,
    /// Transitions collected per update.
    pub rollout_window: usize,
    /// Decision limit per training episode.
    pub episode_cap: u64,
    pub reward_mode: RewardMode,
    /// Standardize advantages over each batch.
    pub normalize_advantages: bool,
}

impl Default for PpoConfig {
    fn default() -> Self {
        PpoConfig {
            learning_rate: 2e-4,
            clip_epsilon: 0.2,
            gamma: 0.99,
            gae_lambda: 0.95,
            epochs: 4,
            minibatch_size: 64,
            value_coef: 0.5,
            entropy_coef: 0.01,
            rollout_window: 2048,
            episode_cap: 500,
            reward_mode: RewardMode::Absolute,
            normalize_advantages: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyConfig {
    pub shape: Shape,
    pub hidden: Vec<usize>,
    pub ppo: PpoConfig,
    pub seed: u64,
}

impl PolicyConfig {
    pub fn new(shape: Shape) -> Self {
        PolicyConfig {
            shape,
            hidden: vec![256, 256],
            ppo: PpoConfig::default(),
            seed: 0,
        }
    }

    pub fn with_hidden(mut self, hidden: &[usize]) -> Self {
        self.hidden = hidden.to_vec();
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_ppo(mut self, ppo: PpoConfig) -> Self {
        self.ppo = ppo;
        self
    }

    pub fn actor_sizes(&self) -> Vec<usize> {
        self.layer_sizes(self.shape.num_actions())
    }

    pub fn critic_sizes(&self) -> Vec<usize> {
        self.layer_sizes(1)
    }

    fn layer_sizes(&self, head: usize) -> Vec<usize> {
        let mut s = vec![self.shape.observation_len()];
        s.extend(&self.hidden);
        s.push(head);
        s
    }
}

const HIDDEN_GAIN: f64 = std::f64::consts::SQRT_2;
const ACTOR_HEAD_GAIN: f64 = 0.01;
const CRITIC_HEAD_GAIN: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    config: PolicyConfig,
    actor: Mlp,
    critic: Mlp,
}

impl Policy {
    /// Fresh policy initialized from `config.seed`.
    pub fn new(config: PolicyConfig) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let actor = Mlp::new(&config.actor_sizes(), HIDDEN_GAIN, ACTOR_HEAD_GAIN, &mut rng);
        let critic = Mlp::new(&config.critic_sizes(), HIDDEN_GAIN, CRITIC_HEAD_GAIN, &mut rng);
        Policy {
            config,
            actor,
            critic,
        }
    }

    pub fn from_parts(config: PolicyConfig, actor: Vec<f64>, critic: Vec<f64>) -> Option<Self> {
        let actor = Mlp::from_params(&config.actor_sizes(), actor)?;
        let critic = Mlp::from_params(&config.critic_sizes(), critic)?;
        Some(Policy {
            config,
            actor,
            critic,
        })
    }

    pub fn config(&self) -> &PolicyConfig {
        &self.config
    }

    pub fn config_mut(&mut self) -> &mut PolicyConfig {
        &mut self.config
    }

    pub fn shape(&self) -> Shape {
        self.config.shape
    }

    pub fn actor(&self) -> &Mlp {
        &self.actor
    }

    pub fn critic(&self) -> &Mlp {
        &self.critic
    }

    pub fn nets_mut(&mut self) -> (&mut Mlp, &mut Mlp) {
        (&mut self.actor, &mut self.critic)
    }

    pub fn check_shape(&self, found: Shape) -> Result<(), AgentError> {
        if found == self.shape() {
            Ok(())
        } else {
            Err(AgentError::ShapeMismatch {
                expected: self.shape(),
                found,
            })
        }
    }

    /// Network input for `o`. Global features are squashed with `sign(x)·ln(1 + |x|)`
    /// so that counts such as `num_clauses` do not saturate the first layer.
    pub fn encode(&self, o: &Observation) -> SparseInput {
        let Shape { n, m } = self.shape();
        debug_assert_eq!(o.shape(), self.shape());
        let mut x = SparseInput {
            dim: self.shape().observation_len(),
            ..Default::default()
        };
        for (j, &v) in o.var_assign.iter().enumerate() {
            x.push(j, v as f64);
        }
        for (i, &v) in o.clause_eval.iter().enumerate() {
            x.push(n + i, v as f64);
        }
        for (k, &v) in o.signed_adjacency.iter().enumerate() {
            x.push(n + m + k, v as f64);
        }
        let base = n + m + n * m;
        for (k, &v) in o.global.values().iter().enumerate() {
            x.push(base + k, v.signum() * v.abs().ln_1p());
        }
        x
    }

    pub fn logits(&self, o: &Observation) -> Vec<f64> {
        self.actor.predict(&self.encode(o))
    }

    pub fn value(&self, o: &Observation) -> f64 {
        self.critic.predict(&self.encode(o))[0]
    }
}

/// Log-probabilities of the softmax restricted to `legal`; illegal actions get `-inf`.
pub fn masked_log_softmax(logits: &[f64], legal: &[bool]) -> Result<Vec<f64>, AgentError> {
    let max = logits
        .iter()
        .zip(legal)
        .filter(|(_, &ok)| ok)
        .map(|(&l, _)| l)
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(AgentError::AllMasked);
    }
    let sum: f64 = logits
        .iter()
        .zip(legal)
        .filter(|(_, &ok)| ok)
        .map(|(&l, _)| (l - max).exp())
        .sum();
    let log_z = max + sum.ln();
    Ok(logits
        .iter()
        .zip(legal)
        .map(|(&l, &ok)| if ok { l - log_z } else { f64::NEG_INFINITY })
        .collect())
}

/// Action `2j` sets `x_{j+1}` true, `2j + 1` sets it false.
pub fn action_to_decision(action: usize) -> HeuristicDecision {
    HeuristicDecision {
        var: (action / 2 + 1) as u32,
        value: action % 2 == 0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecideMode {
    Sample,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub decision: HeuristicDecision,
    pub action: usize,
    pub log_prob: f64,
}

/// Picks an action on an unassigned variable of `a` from the masked policy distribution.
pub fn policy_decide(
    p: &Policy,
    o: &Observation,
    a: &Assignment,
    mode: DecideMode,
    rng: &mut impl Rng,
) -> Result<Decision, AgentError> {
    let legal: Vec<bool> = (1..=p.shape().n as u32)
        .flat_map(|v| {
            let free = a.get(v) == VarValue::Unassigned;
            [free, free]
        })
        .collect();
    let logp = masked_log_softmax(&p.logits(o), &legal)?;
    let action = match mode {
        DecideMode::Greedy => {
            let mut best = None;
            for (k, &lp) in logp.iter().enumerate() {
                if legal[k] && best.is_none_or(|b: usize| lp > logp[b]) {
                    best = Some(k);
                }
            }
            best.unwrap()
        }
        DecideMode::Sample => {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut chosen = None;
            for (k, &lp) in logp.iter().enumerate() {
                if !legal[k] {
                    continue;
                }
                acc += lp.exp();
                chosen = Some(k);
                if u < acc {
                    break;
                }
            }
            chosen.unwrap()
        }
    };
    Ok(Decision {
        decision: action_to_decision(action),
        action,
        log_prob: logp[action],
    })
}
