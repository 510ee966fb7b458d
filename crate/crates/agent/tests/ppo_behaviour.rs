//! PPO update semantics: analytic identities and a bandit sanity run.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use satrl_agent::policy::masked_log_softmax;
use satrl_agent::ppo::loss_and_gradient;
use satrl_agent::{
    policy_decide, AgentError, DecideMode, Observation, Policy, PolicyConfig, PpoConfig, PpoTrainer,
    Shape, Transition,
};
use satrl_core::{Assignment, FeatureVector};

fn dummy_observation() -> Observation {
    Observation {
        var_assign: vec![0],
        clause_eval: vec![0],
        signed_adjacency: Arc::new(vec![1]),
        global: Arc::new(FeatureVector::zeros()),
    }
}

fn bandit_policy(lr: f64) -> Policy {
    let ppo = PpoConfig {
        learning_rate: lr,
        ..PpoConfig::default()
    };
    Policy::new(PolicyConfig::new(Shape::new(1, 1)).with_seed(17).with_ppo(ppo))
}

fn prob_action0(p: &Policy) -> f64 {
    let lp = masked_log_softmax(&p.logits(&dummy_observation()), &[true, true]).unwrap();
    lp[0].exp()
}

/// Single dummy observation, reward 1 for action 0 and 0 for action 1.
fn bandit_batch(p: &Policy, rng: &mut ChaCha8Rng, size: usize) -> Vec<Transition> {
    let o = dummy_observation();
    let a = Assignment::new(1);
    (0..size)
        .map(|_| {
            let d = policy_decide(p, &o, &a, DecideMode::Sample, rng).unwrap();
            Transition {
                observation: o.clone(),
                action: d.action,
                log_prob: d.log_prob,
                reward: i64::from(d.action == 0),
                value: p.value(&o),
                done: true,
            }
        })
        .collect()
}

#[test]
fn bandit_learns_the_rewarded_arm() {
    let mut p = bandit_policy(2e-4);
    let mut trainer = PpoTrainer::new(&p, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let start = prob_action0(&p);
    for _ in 0..200 {
        let batch = bandit_batch(&p, &mut rng, 64);
        trainer.update(&mut p, &batch).unwrap();
    }
    let end = prob_action0(&p);
    println!("P(action 0): {start:.3} -> {end:.4}");
    assert!(end > 0.9, "P(action 0) = {end}");
}

#[test]
fn first_minibatch_surrogate_is_mean_advantage() {
    let mut p = bandit_policy(2e-4);
    let mut trainer = PpoTrainer::new(&p, 3);
    let batch = bandit_batch(&p, &mut ChaCha8Rng::seed_from_u64(4), 50);
    let m = trainer.update(&mut p, &batch).unwrap();
    assert!((m.first_surrogate - m.first_mean_advantage).abs() < 1e-12);
    assert!(m.first_mean_advantage.abs() > 0.0 || batch.iter().all(|t| t.action == batch[0].action));
}

#[test]
fn zero_learning_rate_leaves_parameters_bitwise_unchanged() {
    let mut p = bandit_policy(0.0);
    let before = p.clone();
    let mut trainer = PpoTrainer::new(&p, 5);
    let batch = bandit_batch(&p, &mut ChaCha8Rng::seed_from_u64(6), 40);
    trainer.update(&mut p, &batch).unwrap();
    let bits = |p: &Policy| -> Vec<u64> {
        p.actor().params().iter().chain(p.critic().params()).map(|w| w.to_bits()).collect()
    };
    assert_eq!(bits(&p), bits(&before));
}

#[test]
fn clipped_ratio_contributes_one_point_two() {
    let p = bandit_policy(2e-4);
    let o = dummy_observation();
    let logp = masked_log_softmax(&p.logits(&o), &[true, true]).unwrap();
    // Old log-probability ln 2 below the current one gives r = 2.
    let t = Transition {
        observation: o,
        action: 0,
        log_prob: logp[0] - 2f64.ln(),
        reward: 1,
        value: 0.0,
        done: true,
    };
    let cfg = p.config().ppo.clone();
    let mut ga = vec![0.0; p.actor().params().len()];
    let mut gc = vec![0.0; p.critic().params().len()];
    let stats = loss_and_gradient(&p, &[(&t, 1.0, 0.0)], &cfg, &mut ga, &mut gc);
    assert!((stats.surrogate - 1.2).abs() < 1e-12);
    assert_eq!(stats.clipped, 1);
}

#[test]
fn non_finite_loss_restores_parameters() {
    let mut p = bandit_policy(2e-4);
    let before = p.clone();
    let mut trainer = PpoTrainer::new(&p, 7);
    let mut batch = bandit_batch(&p, &mut ChaCha8Rng::seed_from_u64(8), 8);
    batch[3].value = f64::NAN;
    assert!(matches!(trainer.update(&mut p, &batch), Err(AgentError::NonFiniteLoss)));
    assert_eq!(p, before);
    assert!(matches!(trainer.update(&mut p, &[]), Err(AgentError::EmptyBatch)));
}
