//! One-point payoff estimators.
//!
//! Both estimators see a single reward `u(X)` at a point `X` drawn from leaf
//! `c`, and reconstruct a full per-leaf payoff vector by importance weighting
//! with the probability that the *sampling* distribution put on `c`.

use std::ops::Deref;

use crate::error::{Error, Result};

/// Estimated per-leaf payoffs `v_S`.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffModel(pub Vec<f64>);

impl Deref for PayoffModel {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Estimator family and its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorKind {
    /// Loss-based importance weighting with known reward bound `bound`.
    Iwe { bound: f64 },
    /// Importance weighting with explicit exploration `gamma_t = scale * t^-decay`.
    Iwe3 { scale: f64, decay: f64 },
}

impl EstimatorKind {
    pub const DEFAULT_IWE3: EstimatorKind = EstimatorKind::Iwe3 {
        scale: 0.5,
        decay: 1.0 / 3.0,
    };

    pub fn validate(&self) -> Result<()> {
        match *self {
            EstimatorKind::Iwe { bound } if !(bound.is_finite() && bound > 0.0) => {
                Err(Error::config("bound", format!("reward bound must be positive, got {bound}")))
            }
            EstimatorKind::Iwe3 { scale, .. } if !(scale > 0.0 && scale <= 1.0) => {
                Err(Error::config("gamma_e", format!("exploration scale must lie in (0, 1], got {scale}")))
            }
            EstimatorKind::Iwe3 { decay, .. } if !(decay.is_finite() && decay >= 0.0) => {
                Err(Error::config("gamma_decay", format!("exploration decay must be >= 0, got {decay}")))
            }
            _ => Ok(()),
        }
    }

    /// Exploration weight used at round `t` (zero for IWE).
    pub fn exploration(&self, t: u64) -> f64 {
        match *self {
            EstimatorKind::Iwe { .. } => 0.0,
            EstimatorKind::Iwe3 { scale, decay } => scale * (t as f64).powf(-decay),
        }
    }

    /// Builds the payoff model from the reward observed in `chosen`, where
    /// `sampling` is the distribution the leaf was actually drawn from.
    pub fn estimate(&self, reward: f64, chosen: usize, sampling: &[f64]) -> Result<PayoffModel> {
        match *self {
            EstimatorKind::Iwe { bound } => iwe(reward, chosen, sampling, bound),
            EstimatorKind::Iwe3 { .. } => iwe3(reward, chosen, sampling),
        }
    }
}

fn chosen_probability(chosen: usize, probs: &[f64]) -> Result<f64> {
    let p = *probs.get(chosen).ok_or(Error::Dimension {
        expected: probs.len(),
        got: chosen + 1,
    })?;
    if p.is_nan() || p <= 0.0 {
        return Err(Error::Numeric(format!(
            "leaf {chosen} was sampled with probability {p}"
        )));
    }
    Ok(p)
}

/// Loss-based estimator: `R` everywhere except `R - (R - u) / x_c` on the
/// sampled leaf.
pub fn iwe(reward: f64, chosen: usize, strategy: &[f64], bound: f64) -> Result<PayoffModel> {
    if !(reward >= 0.0 && reward <= bound) {
        return Err(Error::RewardRange { reward, bound });
    }
    let p = chosen_probability(chosen, strategy)?;
    let mut v = vec![bound; strategy.len()];
    v[chosen] = bound - (bound - reward) / p;
    Ok(PayoffModel(v))
}

/// Mixes `strategy` with the uniform distribution over leaves.
pub fn perturb(strategy: &[f64], gamma: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(strategy.len());
    perturb_into(strategy, gamma, &mut out);
    out
}

pub(crate) fn perturb_into(strategy: &[f64], gamma: f64, out: &mut Vec<f64>) {
    let uniform = gamma / strategy.len() as f64;
    out.clear();
    out.extend(strategy.iter().map(|x| (1.0 - gamma) * x + uniform));
}

/// Explicit-exploration estimator: `u / xhat_c` on the sampled leaf, zero
/// elsewhere. `perturbed` is the mixed sampling distribution.
pub fn iwe3(reward: f64, chosen: usize, perturbed: &[f64]) -> Result<PayoffModel> {
    if !(reward >= 0.0 && reward.is_finite()) {
        return Err(Error::RewardRange {
            reward,
            bound: f64::INFINITY,
        });
    }
    let p = chosen_probability(chosen, perturbed)?;
    let mut v = vec![0.0; perturbed.len()];
    v[chosen] = reward / p;
    Ok(PayoffModel(v))
}
