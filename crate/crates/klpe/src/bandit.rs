//! Seeded stochastic bandit environment: reward distributions, exact policy
//! values and two-stage (action, reward) sampling.

use crate::error::{Error, Result};
use crate::policy::Policy;
use crate::rng::{standard_normal, RngState};
use rand::Rng;

/// Per-arm reward distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum RewardDistribution {
    Gaussian { mean: f64, variance: f64 },
    Bernoulli { p: f64 },
    Deterministic { r: f64 },
}

impl RewardDistribution {
    fn validate(&self) -> Result<()> {
        match *self {
            RewardDistribution::Gaussian { mean, variance } => {
                if !mean.is_finite() || !variance.is_finite() || variance <= 0.0 {
                    return Err(Error::invalid(format!(
                        "gaussian arm needs finite mean and positive variance, got ({mean}, {variance})"
                    )));
                }
            }
            RewardDistribution::Bernoulli { p } => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::invalid(format!("bernoulli p {p} outside [0, 1]")));
                }
            }
            RewardDistribution::Deterministic { r } => {
                if !r.is_finite() {
                    return Err(Error::invalid(format!("deterministic reward {r}")));
                }
            }
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        match *self {
            RewardDistribution::Gaussian { mean, .. } => mean,
            RewardDistribution::Bernoulli { p } => p,
            RewardDistribution::Deterministic { r } => r,
        }
    }

    /// Scale of the subgaussian tail: standard deviation for Gaussian arms,
    /// 1/2 for Bernoulli (bounded in an interval of length one), 0 for
    /// deterministic rewards.
    pub fn subgaussian_param(&self) -> f64 {
        match *self {
            RewardDistribution::Gaussian { variance, .. } => variance.sqrt(),
            RewardDistribution::Bernoulli { .. } => 0.5,
            RewardDistribution::Deterministic { .. } => 0.0,
        }
    }

    fn sample(&self, rng: &mut rand_chacha::ChaCha12Rng) -> f64 {
        match *self {
            RewardDistribution::Gaussian { mean, variance } => {
                mean + variance.sqrt() * standard_normal(rng)
            }
            RewardDistribution::Bernoulli { p } => {
                if rng.random::<f64>() < p {
                    1.0
                } else {
                    0.0
                }
            }
            RewardDistribution::Deterministic { r } => r,
        }
    }
}

/// A finite-action bandit: one reward distribution per arm.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditModel {
    arms: Vec<RewardDistribution>,
}

impl BanditModel {
    pub fn new(arms: Vec<RewardDistribution>) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::invalid("bandit model needs at least one arm"));
        }
        for arm in &arms {
            arm.validate()?;
        }
        Ok(Self { arms })
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn arms(&self) -> &[RewardDistribution] {
        &self.arms
    }

    /// Expected reward of arm `a`.
    pub fn mean_reward(&self, a: usize) -> Result<f64> {
        self.arms
            .get(a)
            .map(RewardDistribution::mean)
            .ok_or_else(|| {
                Error::invalid(format!("arm {a} out of range for {} arms", self.arms.len()))
            })
    }

    /// Exact policy value `v(pi) = sum_a pi(a) Q(a)`; no sampling involved.
    pub fn policy_value(&self, pi: &Policy) -> Result<f64> {
        if pi.num_actions() != self.arms.len() {
            return Err(Error::invalid(format!(
                "policy has {} actions, model has {} arms",
                pi.num_actions(),
                self.arms.len()
            )));
        }
        Ok(pi
            .probs()
            .iter()
            .zip(self.arms.iter())
            .map(|(p, arm)| p * arm.mean())
            .sum())
    }

    /// Worst-case subgaussian constant over all arms.
    pub fn subgaussian_param(&self) -> f64 {
        self.arms
            .iter()
            .map(RewardDistribution::subgaussian_param)
            .fold(0.0, f64::max)
    }

    /// Draws `n` iid (action, reward) pairs: each action is sampled from
    /// `behavior` by inverse CDF over the cumulative probabilities in index
    /// order, then the reward from that arm's distribution. Fully determined
    /// by `rng`.
    pub fn draw(&self, behavior: &Policy, n: usize, rng: RngState) -> Result<Vec<(usize, f64)>> {
        if behavior.num_actions() != self.arms.len() {
            return Err(Error::invalid(format!(
                "behavior has {} actions, model has {} arms",
                behavior.num_actions(),
                self.arms.len()
            )));
        }
        if n == 0 {
            return Err(Error::invalid("sample size must be at least one"));
        }
        let mut cumulative = Vec::with_capacity(behavior.num_actions());
        let mut acc = 0.0;
        for &p in behavior.probs() {
            acc += p;
            cumulative.push(acc);
        }
        let last = cumulative.len() - 1;
        let mut rng = rng.rng();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let u: f64 = rng.random();
            let a = cumulative.partition_point(|&c| c <= u).min(last);
            let r = self.arms[a].sample(&mut rng);
            out.push((a, r));
        }
        Ok(out)
    }
}
