//! Binary policy checkpoints.
//!
//! Layout: the magic `SATRLPOL`, a little-endian `u32` format version, a
//! little-endian `u32` header length, a JSON header (configuration with shape,
//! hyperparameters and seed, plus parameter counts), then the actor and critic
//! parameters as little-endian `f64`.

use std::path::Path;

use satrl_core::features::FEATURE_SCHEMA_VERSION;
use serde::{Deserialize, Serialize};

use crate::error::AgentError;
use crate::policy::{Policy, PolicyConfig};

pub const CHECKPOINT_VERSION: u32 = 1;
const MAGIC: &[u8; 8] = b"SATRLPOL";

#[derive(Serialize, Deserialize)]
struct Header {
    config: PolicyConfig,
    feature_schema_version: u32,
    actor_params: usize,
    critic_params: usize,
}

pub fn save_policy(p: &Policy) -> Vec<u8> {
    let header = serde_json::to_vec(&Header {
        config: p.config().clone(),
        feature_schema_version: FEATURE_SCHEMA_VERSION,
        actor_params: p.actor().params().len(),
        critic_params: p.critic().params().len(),
    })
    .expect("header serializes");
    let weights = p.actor().params().len() + p.critic().params().len();
    let mut out = Vec::with_capacity(16 + header.len() + 8 * weights);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    out.extend_from_slice(&(header.len() as u32).to_le_bytes());
    out.extend_from_slice(&header);
    for w in p.actor().params().iter().chain(p.critic().params()) {
        out.extend_from_slice(&w.to_le_bytes());
    }
    out
}

fn format_err(msg: impl Into<String>) -> AgentError {
    AgentError::Format(msg.into())
}

fn read_u32(bytes: &[u8], at: usize) -> Option<u32> {
    Some(u32::from_le_bytes(bytes.get(at..at + 4)?.try_into().ok()?))
}

pub fn load_policy(bytes: &[u8]) -> Result<Policy, AgentError> {
    if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
        return Err(format_err("not a policy checkpoint"));
    }
    let version = read_u32(bytes, 8).ok_or_else(|| format_err("truncated before version"))?;
    if version != CHECKPOINT_VERSION {
        return Err(AgentError::VersionMismatch {
            found: version,
            expected: CHECKPOINT_VERSION,
        });
    }
    let header_len = read_u32(bytes, 12).ok_or_else(|| format_err("truncated before header"))? as usize;
    let header_bytes = bytes
        .get(16..16 + header_len)
        .ok_or_else(|| format_err("truncated header"))?;
    let header: Header =
        serde_json::from_slice(header_bytes).map_err(|e| format_err(format!("bad header: {e}")))?;
    if header.feature_schema_version != FEATURE_SCHEMA_VERSION {
        return Err(format_err(format!(
            "feature schema {} does not match {FEATURE_SCHEMA_VERSION}",
            header.feature_schema_version
        )));
    }
    let body = &bytes[16 + header_len..];
    let count = header.actor_params + header.critic_params;
    if body.len() != count * 8 {
        return Err(format_err(format!(
            "expected {} weight bytes, found {}",
            count * 8,
            body.len()
        )));
    }
    let weights: Vec<f64> = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(format_err("non-finite weight"));
    }
    let (actor, critic) = weights.split_at(header.actor_params);
    Policy::from_parts(header.config, actor.to_vec(), critic.to_vec())
        .ok_or_else(|| format_err("parameter counts do not match the configured layers"))
}

pub fn write_policy(p: &Policy, path: impl AsRef<Path>) -> Result<(), AgentError> {
    std::fs::write(path, save_policy(p))?;
    Ok(())
}

pub fn read_policy(path: impl AsRef<Path>) -> Result<Policy, AgentError> {
    load_policy(&std::fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observation::Shape;

    fn policy() -> Policy {
        Policy::new(PolicyConfig::new(Shape::new(3, 4)).with_hidden(&[5]).with_seed(7))
    }

    #[test]
    fn round_trip_is_exact() {
        let p = policy();
        assert_eq!(load_policy(&save_policy(&p)).unwrap(), p);
    }

    #[test]
    fn every_truncation_is_rejected() {
        let bytes = save_policy(&policy());
        for cut in 0..bytes.len() {
            assert!(load_policy(&bytes[..cut]).is_err(), "accepted {cut} bytes");
        }
        let mut longer = bytes.clone();
        longer.push(0);
        assert!(load_policy(&longer).is_err());
    }

    #[test]
    fn version_is_checked() {
        let mut bytes = save_policy(&policy());
        bytes[8] = 9;
        assert!(matches!(
            load_policy(&bytes),
            Err(AgentError::VersionMismatch { found: 9, expected: 1 })
        ));
    }
}
