use satrl_core::FeatureError;
use thiserror::Error;

use crate::observation::Shape;

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("shape mismatch: policy expects {expected}, formula has {found}")]
    ShapeMismatch { expected: Shape, found: Shape },
    #[error("every action is masked")]
    AllMasked,
    #[error("non-finite PPO loss or gradient; parameters left unchanged")]
    NonFiniteLoss,
    #[error("PPO update needs a nonempty batch")]
    EmptyBatch,
    #[error("no instance in the dataset requires a decision")]
    NoTransitions,
    #[error("checkpoint version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("invalid checkpoint: {0}")]
    Format(String),
    #[error(transparent)]
    Features(#[from] FeatureError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
