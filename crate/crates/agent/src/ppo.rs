//! Proximal policy optimization: GAE, the clipped surrogate and Adam.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::AgentError;
use crate::heuristic::Transition;
use crate::mlp::ForwardCache;
use crate::policy::{masked_log_softmax, Policy, PpoConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Adam {
    pub fn new(len: usize) -> Self {
        Adam {
            m: vec![0.0; len],
            v: vec![0.0; len],
            t: 0,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }

    /// One descent step along `grad`.
    pub fn step(&mut self, params: &mut [f64], grad: &[f64], lr: f64) {
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t);
        let c2 = 1.0 - self.beta2.powi(self.t);
        for ((p, g), (m, v)) in params
            .iter_mut()
            .zip(grad)
            .zip(self.m.iter_mut().zip(self.v.iter_mut()))
        {
            *m = self.beta1 * *m + (1.0 - self.beta1) * g;
            *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
            *p -= lr * (*m / c1) / ((*v / c2).sqrt() + self.eps);
        }
    }
}

/// Generalized advantage estimates and returns. A transition with `done` set ends
/// its episode; the last transition of the slice is always treated as terminal.
pub fn gae(rewards: &[f64], values: &[f64], dones: &[bool], gamma: f64, lambda: f64) -> (Vec<f64>, Vec<f64>) {
    let len = rewards.len();
    let mut adv = vec![0.0; len];
    let mut next_adv = 0.0;
    let mut next_value = 0.0;
    for t in (0..len).rev() {
        if dones[t] || t + 1 == len {
            next_adv = 0.0;
            next_value = 0.0;
        }
        let delta = rewards[t] + gamma * next_value - values[t];
        adv[t] = delta + gamma * lambda * next_adv;
        next_adv = adv[t];
        next_value = values[t];
    }
    let returns = adv.iter().zip(values).map(|(a, v)| a + v).collect();
    (adv, returns)
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PpoMetrics {
    /// Negated clipped surrogate, averaged over minibatches.
    pub policy_loss: f64,
    pub value_loss: f64,
    pub entropy: f64,
    /// Fraction of samples with `|r - 1| > ε`.
    pub clip_fraction: f64,
    /// Surrogate of the first minibatch of the first epoch.
    pub first_surrogate: f64,
    /// Mean advantage over that same minibatch.
    pub first_mean_advantage: f64,
    pub minibatches: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MinibatchStats {
    pub loss: f64,
    pub surrogate: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub clipped: usize,
}

/// Loss `-mean(surrogate) + c_v·mean((V - R)²) - c_e·mean(H)` over `samples` of
/// `(transition, advantage, return)`; its gradient is added to the two buffers.
pub fn loss_and_gradient(
    policy: &Policy,
    samples: &[(&Transition, f64, f64)],
    cfg: &PpoConfig,
    grad_actor: &mut [f64],
    grad_critic: &mut [f64],
) -> MinibatchStats {
    let b = samples.len() as f64;
    let eps = cfg.clip_epsilon;
    let mut stats = MinibatchStats::default();
    let mut cache_a = ForwardCache::default();
    let mut cache_c = ForwardCache::default();
    for &(t, adv, ret) in samples {
        let x = policy.encode(&t.observation);
        let legal = t.observation.legal_actions();
        policy.actor().forward(&x, &mut cache_a);
        let logp = masked_log_softmax(cache_a.output(), &legal).expect("recorded action was legal");
        let ratio = (logp[t.action] - t.log_prob).exp();
        let clipped_ratio = ratio.clamp(1.0 - eps, 1.0 + eps);
        let (unclipped, clipped) = (ratio * adv, clipped_ratio * adv);
        let surrogate = unclipped.min(clipped);
        let dsurr_dlogp = if unclipped <= clipped { unclipped } else { 0.0 };
        if (ratio - 1.0).abs() > eps {
            stats.clipped += 1;
        }
        let entropy: f64 = logp
            .iter()
            .zip(&legal)
            .filter(|(_, &ok)| ok)
            .map(|(&lp, _)| -lp.exp() * lp)
            .sum();

        let dlogits: Vec<f64> = logp
            .iter()
            .enumerate()
            .map(|(k, &lp)| {
                if !legal[k] {
                    return 0.0;
                }
                let p = lp.exp();
                let dlogp = f64::from(u8::from(k == t.action)) - p;
                (-dsurr_dlogp * dlogp + cfg.entropy_coef * p * (lp + entropy)) / b
            })
            .collect();
        policy.actor().backward(&x, &cache_a, &dlogits, grad_actor);

        policy.critic().forward(&x, &mut cache_c);
        let v = cache_c.output()[0];
        let dv = cfg.value_coef * 2.0 * (v - ret) / b;
        policy.critic().backward(&x, &cache_c, &[dv], grad_critic);

        stats.surrogate += surrogate / b;
        stats.value_loss += (v - ret) * (v - ret) / b;
        stats.entropy += entropy / b;
    }
    stats.loss = -stats.surrogate + cfg.value_coef * stats.value_loss - cfg.entropy_coef * stats.entropy;
    stats
}

/// Optimizer state and minibatch RNG carried across updates.
#[derive(Debug, Clone)]
pub struct PpoTrainer {
    actor_opt: Adam,
    critic_opt: Adam,
    rng: ChaCha8Rng,
}

impl PpoTrainer {
    pub fn new(policy: &Policy, seed: u64) -> Self {
        PpoTrainer {
            actor_opt: Adam::new(policy.actor().params().len()),
            critic_opt: Adam::new(policy.critic().params().len()),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Runs the configured epochs of minibatch updates on `batch`. On a non-finite loss
    /// or gradient the policy and optimizer are restored and an error is returned.
    pub fn update(&mut self, policy: &mut Policy, batch: &[Transition]) -> Result<PpoMetrics, AgentError> {
        if batch.is_empty() {
            return Err(AgentError::EmptyBatch);
        }
        let policy_before = policy.clone();
        let self_before = self.clone();
        let result = self.update_inner(policy, batch);
        if result.is_err() {
            *policy = policy_before;
            *self = self_before;
        }
        result
    }

    fn update_inner(&mut self, policy: &mut Policy, batch: &[Transition]) -> Result<PpoMetrics, AgentError> {
        let cfg = policy.config().ppo.clone();
        let rewards: Vec<f64> = batch.iter().map(|t| t.reward as f64).collect();
        let values: Vec<f64> = batch.iter().map(|t| t.value).collect();
        let dones: Vec<bool> = batch.iter().map(|t| t.done).collect();
        let (mut adv, returns) = gae(&rewards, &values, &dones, cfg.gamma, cfg.gae_lambda);
        if cfg.normalize_advantages && adv.len() > 1 {
            let n = adv.len() as f64;
            let mean = adv.iter().sum::<f64>() / n;
            let std = (adv.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / n).sqrt();
            adv.iter_mut().for_each(|a| *a = (*a - mean) / (std + 1e-8));
        }

        let mut grad_a = vec![0.0; policy.actor().params().len()];
        let mut grad_c = vec![0.0; policy.critic().params().len()];
        let mut metrics = PpoMetrics::default();
        let mut clipped = 0usize;
        let mut order: Vec<usize> = (0..batch.len()).collect();
        for epoch in 0..cfg.epochs {
            order.shuffle(&mut self.rng);
            for (k, chunk) in order.chunks(cfg.minibatch_size.max(1)).enumerate() {
                let samples: Vec<(&Transition, f64, f64)> =
                    chunk.iter().map(|&i| (&batch[i], adv[i], returns[i])).collect();
                grad_a.iter_mut().for_each(|g| *g = 0.0);
                grad_c.iter_mut().for_each(|g| *g = 0.0);
                let stats = loss_and_gradient(policy, &samples, &cfg, &mut grad_a, &mut grad_c);
                let finite = stats.loss.is_finite()
                    && grad_a.iter().all(|g| g.is_finite())
                    && grad_c.iter().all(|g| g.is_finite());
                if !finite {
                    return Err(AgentError::NonFiniteLoss);
                }
                if epoch == 0 && k == 0 {
                    metrics.first_surrogate = stats.surrogate;
                    metrics.first_mean_advantage =
                        samples.iter().map(|s| s.1).sum::<f64>() / samples.len() as f64;
                }
                let (actor, critic) = policy.nets_mut();
                self.actor_opt.step(actor.params_mut(), &grad_a, cfg.learning_rate);
                self.critic_opt.step(critic.params_mut(), &grad_c, cfg.learning_rate);
                metrics.policy_loss -= stats.surrogate;
                metrics.value_loss += stats.value_loss;
                metrics.entropy += stats.entropy;
                clipped += stats.clipped;
                metrics.minibatches += 1;
            }
        }
        let mb = metrics.minibatches.max(1) as f64;
        metrics.policy_loss /= mb;
        metrics.value_loss /= mb;
        metrics.entropy /= mb;
        metrics.clip_fraction = clipped as f64 / (batch.len() * cfg.epochs).max(1) as f64;
        Ok(metrics)
    }
}

/// One PPO update of `policy` on `batch` using `trainer`'s optimizer state.
pub fn ppo_update(
    policy: &mut Policy,
    trainer: &mut PpoTrainer,
    batch: &[Transition],
) -> Result<PpoMetrics, AgentError> {
    trainer.update(policy, batch)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adam_first_step_moves_by_lr() {
        let mut opt = Adam::new(2);
        let mut p = vec![1.0, -1.0];
        opt.step(&mut p, &[0.5, -3.0], 0.1);
        assert!((p[0] - 0.9).abs() < 1e-6);
        assert!((p[1] + 0.9).abs() < 1e-6);
    }

    #[test]
    fn adam_zero_lr_is_identity() {
        let mut opt = Adam::new(3);
        let before = vec![0.3, -0.0, 1e-300];
        let mut p = before.clone();
        opt.step(&mut p, &[1.0, 2.0, -3.0], 0.0);
        assert_eq!(
            p.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            before.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn gae_single_episode() {
        // γ = 1, λ = 1: advantages are reward-to-go minus value.
        let (adv, ret) = gae(&[1.0, 2.0, 3.0], &[0.5, 0.5, 0.5], &[false, false, true], 1.0, 1.0);
        assert_eq!(adv, vec![5.5, 4.5, 2.5]);
        assert_eq!(ret, vec![6.0, 5.0, 3.0]);
    }

    #[test]
    fn gae_stops_at_episode_boundary() {
        let (adv, _) = gae(&[1.0, 1.0], &[0.0, 10.0], &[true, true], 0.9, 0.9);
        assert_eq!(adv, vec![1.0, -9.0]);
    }
}
