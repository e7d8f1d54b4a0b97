//! Monte Carlo, importance-sampling and clustered importance-sampling value
//! estimators, plus best-policy selection and regret.

use crate::bandit::BanditModel;
use crate::cluster::ClusteredDesign;
use crate::error::{Error, Result};
use crate::policy::{Policy, PolicySet};

/// Per-cluster collections of (action, reward) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    per_cluster: Vec<Vec<(usize, f64)>>,
}

impl Dataset {
    pub fn new(per_cluster: Vec<Vec<(usize, f64)>>) -> Self {
        Self { per_cluster }
    }

    pub fn num_clusters(&self) -> usize {
        self.per_cluster.len()
    }

    pub fn cluster(&self, j: usize) -> &[(usize, f64)] {
        &self.per_cluster[j]
    }

    pub fn counts(&self) -> Vec<usize> {
        self.per_cluster.iter().map(Vec::len).collect()
    }

    pub fn total(&self) -> usize {
        self.per_cluster.iter().map(Vec::len).sum()
    }
}

/// Estimated value per target policy, tagged with the cluster whose data
/// produced each estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateTable {
    pub values: Vec<f64>,
    pub cluster_of: Vec<usize>,
}

/// Outcome of best-policy selection.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    pub selected_index: usize,
    pub selected_estimate: f64,
    /// Exact regret, filled in once true policy values are available.
    pub regret: Option<f64>,
}

/// Arithmetic mean of observed rewards.
pub fn mc_estimate(rewards: &[f64]) -> Result<f64> {
    if rewards.is_empty() {
        return Err(Error::invalid("cannot average an empty reward sequence"));
    }
    Ok(rewards.iter().sum::<f64>() / rewards.len() as f64)
}

/// Importance-sampling estimate
/// `(1/n) sum_t (target(A_t) / behavior(A_t)) * R_t`.
///
/// Weights are never clipped or self-normalized; the plain estimator is the
/// object of study here, and variance control happens through the choice of
/// behavior policy.
pub fn is_estimate(target: &Policy, behavior: &Policy, data: &[(usize, f64)]) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::invalid("cannot estimate from an empty dataset"));
    }
    if target.num_actions() != behavior.num_actions() {
        return Err(Error::invalid(format!(
            "target has {} actions, behavior has {}",
            target.num_actions(),
            behavior.num_actions()
        )));
    }
    let k = behavior.num_actions();
    // one division per action; the per-sample weight is then a single lookup
    let weights: Vec<f64> = (0..k)
        .map(|a| {
            let b = behavior.prob(a);
            if b > 0.0 {
                target.prob(a) / b
            } else {
                f64::NAN
            }
        })
        .collect();
    let mut sum = 0.0;
    for &(a, r) in data {
        if a >= k {
            return Err(Error::invalid(format!(
                "observed action {a} out of range for {k} actions"
            )));
        }
        let w = weights[a];
        if w.is_nan() {
            return Err(Error::SupportViolation { action: a });
        }
        sum += w * r;
    }
    Ok(sum / data.len() as f64)
}

/// Clustered importance-sampling estimates: each target policy is estimated
/// from its own cluster's samples against that cluster's barycenter.
pub fn clustered_estimates(
    set: &PolicySet,
    design: &ClusteredDesign,
    data: &Dataset,
) -> Result<EstimateTable> {
    let assignment = design.assignment();
    if assignment.len() != set.len() {
        return Err(Error::invalid(format!(
            "design covers {} policies, set has {}",
            assignment.len(),
            set.len()
        )));
    }
    if data.num_clusters() != design.num_clusters() {
        return Err(Error::invalid(format!(
            "dataset has {} clusters, design has {}",
            data.num_clusters(),
            design.num_clusters()
        )));
    }
    let labels = assignment.labels();
    for (i, &j) in labels.iter().enumerate() {
        if data.cluster(j).is_empty() {
            return Err(Error::invalid(format!(
                "cluster {j} holds policy {i} but received no samples"
            )));
        }
    }
    let mut values = Vec::with_capacity(set.len());
    for (i, &j) in labels.iter().enumerate() {
        values.push(is_estimate(set.get(i), design.barycenter(j), data.cluster(j))?);
    }
    Ok(EstimateTable {
        values,
        cluster_of: labels.to_vec(),
    })
}

/// Global argmax over all estimated values; ties go to the lowest index.
pub fn select_best(table: &EstimateTable) -> Result<SelectionResult> {
    if table.values.is_empty() {
        return Err(Error::invalid("cannot select from an empty table"));
    }
    let mut best = 0usize;
    let mut best_v = table.values[0];
    for (i, &v) in table.values.iter().enumerate().skip(1) {
        // strict inequality keeps ties on the lowest index
        if v > best_v {
            best = i;
            best_v = v;
        }
    }
    Ok(SelectionResult {
        selected_index: best,
        selected_estimate: best_v,
        regret: None,
    })
}

/// Exact regret of selecting policy `selected`:
/// `max_i v(pi_i) - v(pi_selected)`.
pub fn regret(model: &BanditModel, set: &PolicySet, selected: usize) -> Result<f64> {
    if selected >= set.len() {
        return Err(Error::invalid(format!(
            "selected index {selected} out of range for {} policies",
            set.len()
        )));
    }
    let mut best = f64::NEG_INFINITY;
    for p in set.iter() {
        best = best.max(model.policy_value(p)?);
    }
    Ok(best - model.policy_value(set.get(selected))?)
}

/// Distributes `n` samples over `m` clusters as evenly as possible: the first
/// `n mod m` clusters receive one extra sample.
pub fn allocate_samples(n: usize, m: usize) -> Result<Vec<usize>> {
    if m == 0 {
        return Err(Error::invalid("need at least one cluster"));
    }
    if n < m {
        return Err(Error::invalid(format!(
            "cannot spread {n} samples over {m} clusters"
        )));
    }
    let base = n / m;
    let rem = n % m;
    Ok((0..m).map(|j| base + usize::from(j < rem)).collect())
}
