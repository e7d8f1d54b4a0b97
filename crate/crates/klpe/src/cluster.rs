//! Hellinger-embedding k-means over a target-policy set and construction of
//! per-cluster barycenter behavior policies with their maximal weights.
//!
//! Policies are embedded by the element-wise square root, which maps the
//! simplex onto the unit sphere and turns squared Euclidean distance into
//! twice the squared Hellinger distance. Standard k-means on the embedded
//! points therefore clusters policies by Hellinger proximity, and by the
//! Hellinger/KL inequality that keeps within-cluster KL divergences small.

use crate::error::{Error, Result};
use crate::policy::{Policy, PolicySet};
use crate::rng::RngState;
use rand::Rng;

/// A partition of `N` items into `M` non-empty clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterAssignment {
    labels: Vec<usize>,
    num_clusters: usize,
}

impl ClusterAssignment {
    /// Validates that every cluster id in `[0, num_clusters)` appears at
    /// least once.
    pub fn new(labels: Vec<usize>, num_clusters: usize) -> Result<Self> {
        if num_clusters == 0 || labels.len() < num_clusters {
            return Err(Error::invalid(format!(
                "{} items cannot fill {num_clusters} clusters",
                labels.len()
            )));
        }
        let mut seen = vec![false; num_clusters];
        for &l in &labels {
            if l >= num_clusters {
                return Err(Error::invalid(format!(
                    "label {l} out of range for {num_clusters} clusters"
                )));
            }
            seen[l] = true;
        }
        if let Some(j) = seen.iter().position(|s| !s) {
            return Err(Error::invalid(format!("cluster {j} is empty")));
        }
        Ok(Self {
            labels,
            num_clusters,
        })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn num_clusters(&self) -> usize {
        self.num_clusters
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.num_clusters];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Item indices belonging to cluster `j`, in ascending order.
    pub fn members(&self, j: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == j)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Square-root embedding of a policy set: point `i` has coordinates
/// `sqrt(pi_i(a))`. Every point lies on the unit sphere and
/// `|x_i - x_j|^2 = 2 * hellinger_sq(pi_i, pi_j)` exactly.
pub fn sqrt_embed(set: &PolicySet) -> Vec<Vec<f64>> {
    set.iter()
        .map(|p| p.probs().iter().map(|&x| x.sqrt()).collect())
        .collect()
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Lloyd's algorithm with k-means++ seeding under squared Euclidean cost.
///
/// Deterministic given `rng`: seeding draws come from the provided stream,
/// equidistant points go to the lowest cluster index, and a cluster that
/// empties during an iteration is repaired by moving in the point currently
/// farthest from its own centroid. Stops when the labels are unchanged or
/// after `max_iter` iterations.
pub fn kmeans(
    points: &[Vec<f64>],
    num_clusters: usize,
    max_iter: usize,
    rng: RngState,
) -> Result<ClusterAssignment> {
    let n = points.len();
    if num_clusters == 0 {
        return Err(Error::invalid("need at least one cluster"));
    }
    if num_clusters > n {
        return Err(Error::invalid(format!(
            "{num_clusters} clusters exceed {n} points"
        )));
    }
    if max_iter == 0 {
        return Err(Error::invalid("max_iter must be at least one"));
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::invalid("points have mixed dimensions"));
    }

    let mut rng = rng.rng();
    let mut centroids = plus_plus_init(points, num_clusters, &mut rng);
    let mut labels = vec![usize::MAX; n];

    for _ in 0..max_iter {
        let new_labels = assign_and_repair(points, &centroids, num_clusters);
        let converged = new_labels == labels;
        labels = new_labels;
        centroids = centroids_of(points, &labels, num_clusters, dim);
        if converged {
            break;
        }
    }

    ClusterAssignment::new(labels, num_clusters)
}

/// k-means++ seeding: the first center is uniform over the points, each
/// following center is sampled proportionally to the squared distance to the
/// nearest chosen center. If every remaining point coincides with a chosen
/// center the lowest-index unchosen point is taken.
fn plus_plus_init(
    points: &[Vec<f64>],
    num_clusters: usize,
    rng: &mut rand_chacha::ChaCha12Rng,
) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut chosen = vec![false; n];
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(num_clusters);

    let first = rng.random_range(0..n);
    chosen[first] = true;
    centers.push(points[first].clone());

    let mut min_d2: Vec<f64> = points
        .iter()
        .map(|p| squared_distance(p, &centers[0]))
        .collect();

    while centers.len() < num_clusters {
        let total: f64 = min_d2.iter().sum();
        let idx = if total > 0.0 {
            let u: f64 = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = n - 1;
            for (i, &d) in min_d2.iter().enumerate() {
                acc += d;
                if acc > u {
                    pick = i;
                    break;
                }
            }
            pick
        } else {
            chosen.iter().position(|c| !c).unwrap_or(0)
        };
        chosen[idx] = true;
        centers.push(points[idx].clone());
        for (i, p) in points.iter().enumerate() {
            let d = squared_distance(p, centers.last().unwrap());
            if d < min_d2[i] {
                min_d2[i] = d;
            }
        }
    }
    centers
}

fn assign_and_repair(
    points: &[Vec<f64>],
    centroids: &[Vec<f64>],
    num_clusters: usize,
) -> Vec<usize> {
    let n = points.len();
    let mut labels = Vec::with_capacity(n);
    let mut dist = Vec::with_capacity(n);
    let mut counts = vec![0usize; num_clusters];
    for p in points {
        let mut best = 0usize;
        let mut best_d = squared_distance(p, &centroids[0]);
        for (j, c) in centroids.iter().enumerate().skip(1) {
            let d = squared_distance(p, c);
            // strict inequality keeps ties on the lowest cluster index
            if d < best_d {
                best = j;
                best_d = d;
            }
        }
        labels.push(best);
        dist.push(best_d);
        counts[best] += 1;
    }

    // Repair empty clusters so per-cluster weight bounds stay defined:
    // each one steals the point farthest from its own centroid, never
    // draining another cluster below one member.
    for j in 0..num_clusters {
        if counts[j] > 0 {
            continue;
        }
        let mut pick = None;
        let mut pick_d = f64::NEG_INFINITY;
        for i in 0..n {
            if counts[labels[i]] > 1 && dist[i] > pick_d {
                pick = Some(i);
                pick_d = dist[i];
            }
        }
        let i = pick.expect("a non-singleton cluster exists whenever some cluster is empty");
        counts[labels[i]] -= 1;
        labels[i] = j;
        counts[j] = 1;
        dist[i] = 0.0;
    }
    labels
}

fn centroids_of(
    points: &[Vec<f64>],
    labels: &[usize],
    num_clusters: usize,
    dim: usize,
) -> Vec<Vec<f64>> {
    let mut sums = vec![vec![0.0; dim]; num_clusters];
    let mut counts = vec![0usize; num_clusters];
    for (p, &l) in points.iter().zip(labels.iter()) {
        counts[l] += 1;
        for (s, x) in sums[l].iter_mut().zip(p.iter()) {
            *s += x;
        }
    }
    for (sum, &c) in sums.iter_mut().zip(counts.iter()) {
        for s in sum.iter_mut() {
            *s /= c as f64;
        }
    }
    sums
}

/// A clustering of a policy set together with the per-cluster barycenter
/// behavior policies and their maximal importance weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteredDesign {
    assignment: ClusterAssignment,
    barycenters: Vec<Policy>,
    sigma_per_cluster: Vec<f64>,
    sigma_c: f64,
}

impl ClusteredDesign {
    pub fn assignment(&self) -> &ClusterAssignment {
        &self.assignment
    }

    pub fn num_clusters(&self) -> usize {
        self.assignment.num_clusters()
    }

    /// Behavior policy of cluster `j`: the arithmetic mean of its members.
    pub fn barycenter(&self, j: usize) -> &Policy {
        &self.barycenters[j]
    }

    pub fn barycenters(&self) -> &[Policy] {
        &self.barycenters
    }

    /// Maximal importance weight within cluster `j`.
    pub fn sigma_per_cluster(&self) -> &[f64] {
        &self.sigma_per_cluster
    }

    /// Uniform maximal weight over all clusters.
    pub fn sigma_c(&self) -> f64 {
        self.sigma_c
    }

    pub fn m_sigma_c_sq(&self) -> f64 {
        self.num_clusters() as f64 * self.sigma_c * self.sigma_c
    }

    /// Sample-complexity improvement condition over the unclustered design:
    /// `M * sigma_c^2 < sigma_kl^2` (strict).
    pub fn improvement_holds(&self, sigma_kl: f64) -> bool {
        self.m_sigma_c_sq() < sigma_kl * sigma_kl
    }
}

/// Builds the clustered design for `set` under `assignment`: per cluster the
/// barycenter of its members (the arithmetic mean, not a renormalized
/// centroid of embedded points) and the maximal weight of any member against
/// that barycenter.
pub fn cluster_barycenters(
    set: &PolicySet,
    assignment: &ClusterAssignment,
) -> Result<ClusteredDesign> {
    if assignment.len() != set.len() {
        return Err(Error::invalid(format!(
            "assignment covers {} policies, set has {}",
            assignment.len(),
            set.len()
        )));
    }
    let m = assignment.num_clusters();
    let mut barycenters = Vec::with_capacity(m);
    let mut sigma_per_cluster = Vec::with_capacity(m);
    for j in 0..m {
        let members = assignment.members(j);
        let cluster_set =
            PolicySet::new(members.iter().map(|&i| set.get(i).clone()).collect())?;
        let bary = cluster_set.kl_barycenter()?;
        sigma_per_cluster.push(cluster_set.max_importance_weight(&bary));
        barycenters.push(bary);
    }
    let sigma_c = sigma_per_cluster.iter().cloned().fold(0.0, f64::max);
    Ok(ClusteredDesign {
        assignment: assignment.clone(),
        barycenters,
        sigma_per_cluster,
        sigma_c,
    })
}
