//! Learned branching heuristic.
//!
//! The policy observes the solver state as a fixed-shape vector (variable
//! assignment, clause evaluation, signed clause-variable incidence and global
//! formula features), picks one of `2n` variable/value actions with already
//! assigned variables masked out, and is trained with PPO on the per-decision
//! reward `#satisfied - #falsified` over the original clauses.

pub mod checkpoint;
pub mod error;
pub mod heuristic;
pub mod mlp;
pub mod observation;
pub mod policy;
pub mod ppo;
pub mod train;

pub use checkpoint::{load_policy, read_policy, save_policy, write_policy, CHECKPOINT_VERSION};
pub use error::AgentError;
pub use heuristic::{run_episode, Episode, RlHeuristic, Transition};
pub use observation::{
    build_observation, compute_reward, Observation, ObservationBuilder, RewardMode, Shape,
};
pub use policy::{policy_decide, DecideMode, Decision, Policy, PolicyConfig, PpoConfig};
pub use ppo::{gae, ppo_update, Adam, PpoMetrics, PpoTrainer};
pub use train::{train, TrainOptions, TrainingLog, WindowLog};
