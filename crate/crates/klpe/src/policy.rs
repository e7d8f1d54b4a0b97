//! Exact arithmetic on the probability simplex: divergences, entropy,
//! barycenters, safe mixtures and importance-weight extrema.

use crate::error::{Error, Result};

/// Absolute tolerance on the simplex constraint accepted by constructors.
/// Inputs whose total mass deviates by more than this are rejected rather
/// than silently rescaled.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

/// A probability distribution over a finite action set.
///
/// Entries are non-negative and sum to one within [`SIMPLEX_TOLERANCE`].
/// Zero entries are allowed; operations that need strict positivity reject
/// them explicitly. An entry counts as zero only if it is exactly `0.0` --
/// there is no epsilon flooring, since flooring would silently change
/// importance-weight extrema.
#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    probs: Vec<f64>,
}

impl Policy {
    /// Validates and renormalizes `probs` into a policy.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::invalid("policy needs at least one action"));
        }
        for (a, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::invalid(format!("probability {p} at action {a}")));
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::invalid(format!(
                "probabilities sum to {sum}, outside 1 +/- {SIMPLEX_TOLERANCE}"
            )));
        }
        let probs = probs.into_iter().map(|p| p / sum).collect();
        Ok(Self { probs })
    }

    /// Builds a policy from entries already known to lie on the simplex,
    /// skipping renormalization so exact arithmetic (e.g. barycenter means of
    /// rational inputs) is not perturbed.
    pub(crate) fn from_normalized(probs: Vec<f64>) -> Self {
        debug_assert!(!probs.is_empty());
        debug_assert!(probs.iter().all(|p| p.is_finite() && *p >= 0.0));
        debug_assert!((probs.iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOLERANCE);
        Self { probs }
    }

    pub fn uniform(num_actions: usize) -> Self {
        assert!(num_actions > 0, "policy needs at least one action");
        Self {
            probs: vec![1.0 / num_actions as f64; num_actions],
        }
    }

    /// The point mass on action `a`.
    pub fn degenerate(num_actions: usize, a: usize) -> Result<Self> {
        if a >= num_actions {
            return Err(Error::invalid(format!(
                "action {a} out of range for {num_actions} actions"
            )));
        }
        let mut probs = vec![0.0; num_actions];
        probs[a] = 1.0;
        Ok(Self { probs })
    }

    /// Softmax policy `exp(t*w_a) / sum_l exp(t*w_l)`.
    ///
    /// Computed with max-subtraction so large `t*w` cannot overflow; the
    /// result is strictly positive for any finite weights of moderate spread.
    pub fn softmax_from_weights(weights: &[f64], temperature: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("softmax needs at least one weight"));
        }
        if !temperature.is_finite() || temperature <= 0.0 {
            return Err(Error::invalid(format!("temperature {temperature}")));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::invalid(format!("non-finite weight {w}")));
        }
        let scaled: Vec<f64> = weights.iter().map(|w| temperature * w).collect();
        let max = scaled.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = scaled.iter().map(|s| (s - max).exp()).collect();
        let total: f64 = exps.iter().sum();
        Ok(Self::from_normalized(
            exps.into_iter().map(|e| e / total).collect(),
        ))
    }

    pub fn num_actions(&self) -> usize {
        self.probs.len()
    }

    pub fn prob(&self, a: usize) -> f64 {
        self.probs[a]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0)
    }

    pub fn min_prob(&self) -> f64 {
        self.probs.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Defensive mixture `(1-lambda) * self + lambda * uniform`.
    ///
    /// The output is strictly positive (every entry at least `lambda / K`)
    /// even when `self` has zero entries.
    pub fn safe_mix(&self, lambda: f64) -> Result<Policy> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::invalid(format!("lambda {lambda} outside (0, 1)")));
        }
        let u = 1.0 / self.num_actions() as f64;
        Ok(Policy::from_normalized(
            self.probs
                .iter()
                .map(|&p| (1.0 - lambda) * p + lambda * u)
                .collect(),
        ))
    }
}

/// KL divergence `sum_a p(a) log(p(a)/q(a))` in nats, with `0 log 0 := 0`.
///
/// Returns [`Error::InfiniteDivergence`] when `p` puts mass on an action
/// where `q` is exactly zero.
pub fn kl_divergence(p: &Policy, q: &Policy) -> Result<f64> {
    if p.num_actions() != q.num_actions() {
        return Err(Error::invalid(format!(
            "dimension mismatch: {} vs {}",
            p.num_actions(),
            q.num_actions()
        )));
    }
    let mut sum = 0.0;
    for (a, (&pa, &qa)) in p.probs.iter().zip(q.probs.iter()).enumerate() {
        if pa > 0.0 {
            if qa == 0.0 {
                return Err(Error::InfiniteDivergence { action: a });
            }
            sum += pa * (pa / qa).ln();
        }
    }
    Ok(sum)
}

/// Squared Hellinger distance `(1/2) sum_a (sqrt(p(a)) - sqrt(q(a)))^2`,
/// always in `[0, 1]`.
pub fn hellinger_sq(p: &Policy, q: &Policy) -> Result<f64> {
    if p.num_actions() != q.num_actions() {
        return Err(Error::invalid(format!(
            "dimension mismatch: {} vs {}",
            p.num_actions(),
            q.num_actions()
        )));
    }
    let sum: f64 = p
        .probs
        .iter()
        .zip(q.probs.iter())
        .map(|(&pa, &qa)| {
            let d = pa.sqrt() - qa.sqrt();
            d * d
        })
        .sum();
    Ok(0.5 * sum)
}

/// Shannon entropy `-sum_a p(a) log p(a)` in nats, with `0 log 0 := 0`.
pub fn entropy(p: &Policy) -> f64 {
    -p.probs
        .iter()
        .filter(|&&pa| pa > 0.0)
        .map(|&pa| pa * pa.ln())
        .sum::<f64>()
}

/// An ordered, non-empty collection of policies over a common action set.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicySet {
    policies: Vec<Policy>,
}

impl PolicySet {
    pub fn new(policies: Vec<Policy>) -> Result<Self> {
        let Some(first) = policies.first() else {
            return Err(Error::invalid("policy set needs at least one policy"));
        };
        let k = first.num_actions();
        if let Some((i, p)) = policies
            .iter()
            .enumerate()
            .find(|(_, p)| p.num_actions() != k)
        {
            return Err(Error::invalid(format!(
                "policy {i} has {} actions, expected {k}",
                p.num_actions()
            )));
        }
        Ok(Self { policies })
    }

    pub fn len(&self) -> usize {
        self.policies.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn num_actions(&self) -> usize {
        self.policies[0].num_actions()
    }

    pub fn get(&self, i: usize) -> &Policy {
        &self.policies[i]
    }

    pub fn policies(&self) -> &[Policy] {
        &self.policies
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Policy> {
        self.policies.iter()
    }

    /// The policy minimizing the average right KL divergence from the set:
    /// the component-wise arithmetic mean.
    ///
    /// Requires every member to be strictly positive. Each component is a
    /// compensated (Neumaier) sum so the mean is correctly rounded; ratios
    /// against exactly representable constructions then come out exact.
    pub fn kl_barycenter(&self) -> Result<Policy> {
        for (i, p) in self.policies.iter().enumerate() {
            if !p.is_strictly_positive() {
                return Err(Error::StrictPositivity(format!(
                    "policy {i} has a zero entry"
                )));
            }
        }
        let n = self.len() as f64;
        let k = self.num_actions();
        let mut probs = Vec::with_capacity(k);
        for a in 0..k {
            let mut sum = 0.0;
            let mut comp = 0.0;
            for p in &self.policies {
                let v = p.prob(a);
                let t = sum + v;
                if sum.abs() >= v.abs() {
                    comp += (sum - t) + v;
                } else {
                    comp += (v - t) + sum;
                }
                sum = t;
            }
            probs.push((sum + comp) / n);
        }
        Ok(Policy::from_normalized(probs))
    }

    /// Average right KL divergence `(1/N) sum_i KL(pi_i || b)`.
    pub fn average_right_kl(&self, b: &Policy) -> Result<f64> {
        let mut total = 0.0;
        for p in &self.policies {
            total += kl_divergence(p, b)?;
        }
        Ok(total / self.len() as f64)
    }

    /// Largest importance weight of any member against behavior policy `b`:
    /// `max_i max_a pi_i(a) / b(a)`.
    ///
    /// `b` must be strictly positive wherever the members put mass. The
    /// result is at least one because every policy dominates `b` somewhere.
    pub fn max_importance_weight(&self, b: &Policy) -> f64 {
        let mut max = 0.0f64;
        for p in &self.policies {
            for (pa, ba) in p.probs.iter().zip(b.probs.iter()) {
                if *pa > 0.0 {
                    max = max.max(pa / ba);
                }
            }
        }
        max
    }
}

impl<'a> IntoIterator for &'a PolicySet {
    type Item = &'a Policy;
    type IntoIter = std::slice::Iter<'a, Policy>;

    fn into_iter(self) -> Self::IntoIter {
        self.policies.iter()
    }
}
