//! Closed-form evaluation of the sample-complexity and weight bounds, plus
//! the constructive two-arm lower-bound instance.
//!
//! All sample sizes are real-valued thresholds rounded up, with a floor of
//! one sample. Logarithms are natural throughout.

use crate::bandit::{BanditModel, RewardDistribution};
use crate::error::{Error, Result};
use crate::policy::{Policy, PolicySet};
use crate::rng::RngState;
use rand::Rng;

/// Parameters shared by the closed-form bounds. Each operation validates the
/// subset it actually consumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    /// Target accuracy (epsilon > 0).
    pub epsilon: f64,
    /// Failure probability (0 < delta < 1).
    pub delta: f64,
    /// Subgaussian reward constant R* (>= 0; zero means deterministic rewards).
    pub r_star: f64,
    /// Maximal importance weight (sigma_KL or sigma_c, >= 1).
    pub sigma: f64,
    /// Number of target policies N.
    pub n_targets: usize,
    /// Number of clusters M.
    pub n_clusters: usize,
    /// Size of the best cluster N_1.
    pub n1: usize,
    /// Uniform KL proximity eta (>= 0).
    pub eta: f64,
    /// Defensive mixing coefficient lambda in (0, 1).
    pub lambda: f64,
    /// Value gap between the best cluster and the others (> 0).
    pub gap: f64,
    /// Number of arms K.
    pub k_arms: usize,
}

impl Default for BoundInputs {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            delta: 0.1,
            r_star: 1.0,
            sigma: 1.0,
            n_targets: 1,
            n_clusters: 1,
            n1: 1,
            eta: 0.0,
            lambda: 0.5,
            gap: f64::INFINITY,
            k_arms: 1,
        }
    }
}

fn check_epsilon_delta(inputs: &BoundInputs) -> Result<()> {
    if !(inputs.epsilon.is_finite() && inputs.epsilon > 0.0) {
        return Err(Error::invalid(format!("epsilon {}", inputs.epsilon)));
    }
    if !(inputs.delta > 0.0 && inputs.delta < 1.0) {
        return Err(Error::invalid(format!("delta {}", inputs.delta)));
    }
    Ok(())
}

fn check_scale(inputs: &BoundInputs) -> Result<()> {
    if !(inputs.r_star.is_finite() && inputs.r_star >= 0.0) {
        return Err(Error::invalid(format!("r_star {}", inputs.r_star)));
    }
    if inputs.sigma < 1.0 || inputs.sigma.is_nan() {
        return Err(Error::invalid(format!("sigma {}", inputs.sigma)));
    }
    if inputs.n_targets == 0 {
        return Err(Error::invalid("n_targets must be positive"));
    }
    Ok(())
}

fn ceil_at_least_one(raw: f64) -> u64 {
    (raw.ceil() as u64).max(1)
}

/// Real-valued sample-size threshold for selection against a single
/// barycenter: `2 R*^2 sigma^2 log(N / delta) / epsilon^2`.
pub fn sample_size_klpe_raw(inputs: &BoundInputs) -> Result<f64> {
    check_epsilon_delta(inputs)?;
    check_scale(inputs)?;
    let n = inputs.n_targets as f64;
    Ok(2.0 * inputs.r_star * inputs.r_star * inputs.sigma * inputs.sigma
        * (n / inputs.delta).ln()
        / (inputs.epsilon * inputs.epsilon))
}

/// Samples sufficient for regret below epsilon with probability 1 - delta
/// under the single-barycenter design.
pub fn sample_size_klpe(inputs: &BoundInputs) -> Result<u64> {
    Ok(ceil_at_least_one(sample_size_klpe_raw(inputs)?))
}

/// Weight cap in terms of the uniform KL proximity `eta` and the smallest
/// barycenter entry: `min(N, 1 + 2 eta / m + 2 sqrt(2 eta) / sqrt(m))` with
/// `m = min_a pi_KL(a)`.
pub fn sigma_bound_from_eta(inputs: &BoundInputs, min_bary: f64) -> Result<f64> {
    if min_bary <= 0.0 || min_bary.is_nan() {
        return Err(Error::invalid(format!("min_bary {min_bary}")));
    }
    if inputs.eta < 0.0 || inputs.eta.is_nan() {
        return Err(Error::invalid(format!("eta {}", inputs.eta)));
    }
    if inputs.n_targets == 0 {
        return Err(Error::invalid("n_targets must be positive"));
    }
    let n = inputs.n_targets as f64;
    let bound = 1.0 + 2.0 * inputs.eta / min_bary + 2.0 * (2.0 * inputs.eta).sqrt() / min_bary.sqrt();
    Ok(n.min(bound))
}

/// Weight cap against the defensive mixture
/// `(1 - lambda) pi_KL + lambda * uniform`:
/// `min(N / (1-lambda), 1/(1-lambda) + 2 eta K / lambda
///  + 2 sqrt(2 eta K) / (sqrt(1-lambda) sqrt(lambda)))`.
pub fn sigma_safe_bound(inputs: &BoundInputs) -> Result<f64> {
    if !(inputs.lambda > 0.0 && inputs.lambda < 1.0) {
        return Err(Error::invalid(format!("lambda {}", inputs.lambda)));
    }
    if inputs.eta < 0.0 || inputs.eta.is_nan() {
        return Err(Error::invalid(format!("eta {}", inputs.eta)));
    }
    if inputs.k_arms == 0 || inputs.n_targets == 0 {
        return Err(Error::invalid("k_arms and n_targets must be positive"));
    }
    let n = inputs.n_targets as f64;
    let k = inputs.k_arms as f64;
    let lam = inputs.lambda;
    let first = n / (1.0 - lam);
    let second = 1.0 / (1.0 - lam)
        + 2.0 * inputs.eta * k / lam
        + 2.0 * (2.0 * inputs.eta * k).sqrt() / ((1.0 - lam).sqrt() * lam.sqrt());
    Ok(first.min(second))
}

/// The previous cap at the coupling `lambda = sqrt(eta)`, valid for
/// `0 < eta < 1`; this keeps the bound independent of `min_a pi_KL(a)` as
/// `eta` tends to zero.
pub fn sigma_safe_bound_sqrt_eta(inputs: &BoundInputs) -> Result<f64> {
    if !(inputs.eta > 0.0 && inputs.eta < 1.0) {
        return Err(Error::invalid(format!(
            "eta {} outside (0, 1), so lambda = sqrt(eta) is not a valid mix",
            inputs.eta
        )));
    }
    sigma_safe_bound(&BoundInputs {
        lambda: inputs.eta.sqrt(),
        ..*inputs
    })
}

fn check_cluster_inputs(inputs: &BoundInputs) -> Result<()> {
    check_epsilon_delta(inputs)?;
    check_scale(inputs)?;
    if inputs.n1 == 0 {
        return Err(Error::invalid("n1 must be positive"));
    }
    if inputs.epsilon > inputs.gap || inputs.gap.is_nan() {
        return Err(Error::Precondition(format!(
            "epsilon {} exceeds the cluster gap {}; the bound's hypothesis fails",
            inputs.epsilon, inputs.gap
        )));
    }
    Ok(())
}

/// Real-valued threshold for the best-cluster gate:
/// `2 M R*^2 sigma_c^2 log(((M-2)(N_1+1) + N + M) / delta) / epsilon^2`.
/// Defined for `M >= 2`; with a single cluster the gate is vacuous.
pub fn sample_size_cluster_gate_raw(inputs: &BoundInputs) -> Result<f64> {
    check_cluster_inputs(inputs)?;
    if inputs.n_clusters < 2 {
        return Err(Error::invalid(
            "the cluster gate concerns competing clusters and needs at least two",
        ));
    }
    let m = inputs.n_clusters as f64;
    let n = inputs.n_targets as f64;
    let n1 = inputs.n1 as f64;
    let arg = ((m - 2.0) * (n1 + 1.0) + n + m) / inputs.delta;
    Ok(2.0 * m * inputs.r_star * inputs.r_star * inputs.sigma * inputs.sigma * arg.ln()
        / (inputs.epsilon * inputs.epsilon))
}

/// Samples sufficient for the selected policy to land in the best cluster
/// with probability 1 - delta, assuming equal per-cluster allocation.
pub fn sample_size_cluster_gate(inputs: &BoundInputs) -> Result<u64> {
    Ok(ceil_at_least_one(sample_size_cluster_gate_raw(inputs)?))
}

/// Real-valued threshold for clustered selection:
/// `2 M R*^2 sigma_c^2 log((2 + N + M + (M-1)(N_1+1)) / delta) / epsilon^2`.
pub fn sample_size_ckl_raw(inputs: &BoundInputs) -> Result<f64> {
    check_cluster_inputs(inputs)?;
    if inputs.n_clusters == 0 {
        return Err(Error::invalid("n_clusters must be positive"));
    }
    let m = inputs.n_clusters as f64;
    let n = inputs.n_targets as f64;
    let n1 = inputs.n1 as f64;
    let arg = (2.0 + n + m + (m - 1.0) * (n1 + 1.0)) / inputs.delta;
    Ok(2.0 * m * inputs.r_star * inputs.r_star * inputs.sigma * inputs.sigma * arg.ln()
        / (inputs.epsilon * inputs.epsilon))
}

/// Samples sufficient for regret below epsilon with probability 1 - delta
/// under the clustered design with equal allocation.
pub fn sample_size_ckl(inputs: &BoundInputs) -> Result<u64> {
    Ok(ceil_at_least_one(sample_size_ckl_raw(inputs)?))
}

/// Problem-independent expected-regret bound at total sample size `n`:
/// `(delta_max / sqrt(n)) (1 + M N_1 / N + 2 M / N)
///  + sqrt(2) M^(3/2) R* sigma_c sqrt(log(N sqrt(n)) / n)`.
pub fn expected_regret_bound(inputs: &BoundInputs, delta_max: f64, n: u64) -> Result<f64> {
    check_scale(inputs)?;
    if !(delta_max.is_finite() && delta_max > 0.0) {
        return Err(Error::invalid(format!("delta_max {delta_max}")));
    }
    if inputs.n_clusters == 0 || inputs.n1 == 0 {
        return Err(Error::invalid("n_clusters and n1 must be positive"));
    }
    if n < inputs.n_clusters as u64 {
        return Err(Error::invalid(format!(
            "n = {n} is below the cluster count {}",
            inputs.n_clusters
        )));
    }
    let nf = n as f64;
    let m = inputs.n_clusters as f64;
    let nt = inputs.n_targets as f64;
    let n1 = inputs.n1 as f64;
    let first = delta_max / nf.sqrt() * (1.0 + m * n1 / nt + 2.0 * m / nt);
    let second = std::f64::consts::SQRT_2
        * m.powf(1.5)
        * inputs.r_star
        * inputs.sigma
        * ((nt * nf.sqrt()).ln() / nf).sqrt();
    Ok(first + second)
}

/// The explicit two-arm construction on which a single barycenter behaves
/// poorly: one policy tilted toward the better arm, the other `N - 1`
/// identical policies tilted away.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundInstance {
    /// Two deterministic arms with rewards `r1 > r2 = (1 - lambda_r) r1`.
    pub model: BanditModel,
    /// `pi_1 = (1 - 1/N, 1/N)`, `pi_2 = ... = pi_N = (1/N, 1 - 1/N)`.
    pub policies: PolicySet,
    /// Maximal importance weight of the instance, `N / 2`.
    pub sigma_n: f64,
    /// Value gap between `pi_1` and the rest.
    pub gap: f64,
    /// Reward shrinkage `1/N - 1/(N(N-1))`.
    pub lambda_r: f64,
}

/// Builds the lower-bound instance for `n_policies >= 3` and top reward
/// `r1 > 0`. The gap `(1/N - 1/(N(N-1))) (1 - 2/N) r1` is positive and the
/// measured maximal weight against the barycenter equals `N / 2` exactly.
pub fn lower_bound_model(n_policies: usize, r1: f64) -> Result<LowerBoundInstance> {
    if n_policies < 3 {
        return Err(Error::invalid(format!(
            "the construction needs at least 3 policies, got {n_policies}"
        )));
    }
    if !(r1.is_finite() && r1 > 0.0) {
        return Err(Error::invalid(format!("r1 {r1}")));
    }
    let n = n_policies as f64;
    let lambda_r = 1.0 / n - 1.0 / (n * (n - 1.0));
    let r2 = (1.0 - lambda_r) * r1;
    let model = BanditModel::new(vec![
        RewardDistribution::Deterministic { r: r1 },
        RewardDistribution::Deterministic { r: r2 },
    ])?;
    let hi = 1.0 - 1.0 / n;
    let lo = 1.0 / n;
    // entries sum to one by construction; skip renormalization so measured
    // weight ratios stay exact
    let tilted = Policy::from_normalized(vec![hi, lo]);
    let away = Policy::from_normalized(vec![lo, hi]);
    let mut policies = Vec::with_capacity(n_policies);
    policies.push(tilted);
    policies.resize(n_policies, away);
    Ok(LowerBoundInstance {
        model,
        policies: PolicySet::new(policies)?,
        sigma_n: n / 2.0,
        gap: lambda_r * (1.0 - 2.0 / n) * r1,
        lambda_r,
    })
}

/// Misselection probability floor of the lower-bound instance:
/// `exp(-n / (2 sigma_N^2)) / sqrt(2 n)`.
pub fn lower_bound_prob(n: u64, sigma_n: f64) -> f64 {
    let nf = n as f64;
    (-nf / (2.0 * sigma_n * sigma_n)).exp() / (2.0 * nf).sqrt()
}

/// Draws `n_policies` softmax policies from iid uniform(0, 1) weights at
/// temperature `tau` and returns the largest deviation of their barycenter
/// from the uniform policy, `max_a |pi_KL(a) - 1/K|`. As the set grows the
/// barycenter flattens toward uniform.
pub fn uniform_limit_deviation(n_policies: usize, k: usize, tau: f64, rng: RngState) -> f64 {
    assert!(n_policies >= 1 && k >= 1, "need at least one policy and arm");
    let mut rng = rng.rng();
    let mut policies = Vec::with_capacity(n_policies);
    let mut weights = vec![0.0; k];
    for _ in 0..n_policies {
        for w in weights.iter_mut() {
            *w = rng.random::<f64>();
        }
        policies.push(
            Policy::softmax_from_weights(&weights, tau)
                .expect("uniform weights and positive tau are always valid"),
        );
    }
    let bary = PolicySet::new(policies)
        .and_then(|s| s.kl_barycenter())
        .expect("softmax policies are strictly positive");
    let target = 1.0 / k as f64;
    bary.probs()
        .iter()
        .map(|p| (p - target).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn random_positive_policy(k: usize, rng: &mut impl Rng) -> Policy {
        let w: Vec<f64> = (0..k).map(|_| rng.random_range(-2.0..2.0)).collect();
        Policy::softmax_from_weights(&w, 1.0).unwrap()
    }

    fn random_set(rng: &mut impl Rng) -> PolicySet {
        let k = rng.random_range(2..=8);
        let n = rng.random_range(2..=15);
        PolicySet::new((0..n).map(|_| random_positive_policy(k, rng)).collect()).unwrap()
    }

    #[test]
    fn klpe_sample_size_examples() {
        // deterministic rewards floor at one sample
        let det = BoundInputs {
            r_star: 0.0,
            sigma: 2.0,
            n_targets: 10,
            epsilon: 0.5,
            ..Default::default()
        };
        assert_eq!(sample_size_klpe(&det).unwrap(), 1);

        let base = BoundInputs {
            r_star: 1.0,
            sigma: 2.0,
            n_targets: 10,
            delta: 0.1,
            epsilon: 0.5,
            ..Default::default()
        };
        // independent oracle with a different association order
        let oracle = (2.0f64 * (2.0 / 0.5) * (2.0 / 0.5)) * 100.0f64.ln();
        assert_abs_diff_eq!(
            sample_size_klpe_raw(&base).unwrap(),
            oracle,
            epsilon = 1e-12 * oracle
        );
        assert_eq!(sample_size_klpe(&base).unwrap(), 148);
    }

    #[test]
    fn klpe_sample_size_scales_with_sigma_squared() {
        let narrow = BoundInputs {
            sigma: 1.0,
            n_targets: 3,
            ..Default::default()
        };
        let wide = BoundInputs {
            sigma: 198.0,
            ..narrow
        };
        let ratio =
            sample_size_klpe_raw(&wide).unwrap() / sample_size_klpe_raw(&narrow).unwrap();
        assert_abs_diff_eq!(ratio, 39_204.0, epsilon = 1e-6);
    }

    #[test]
    fn klpe_rejects_bad_ranges() {
        for bad in [
            BoundInputs {
                epsilon: 0.0,
                ..Default::default()
            },
            BoundInputs {
                delta: 1.0,
                ..Default::default()
            },
            BoundInputs {
                sigma: 0.5,
                ..Default::default()
            },
            BoundInputs {
                r_star: -1.0,
                ..Default::default()
            },
        ] {
            assert!(sample_size_klpe(&bad).is_err());
        }
    }

    #[test]
    fn eta_bound_edges() {
        let inputs = BoundInputs {
            n_targets: 7,
            eta: 0.0,
            ..Default::default()
        };
        assert_eq!(sigma_bound_from_eta(&inputs, 0.2).unwrap(), 1.0);
        let large = BoundInputs {
            eta: 1e6,
            ..inputs
        };
        assert_eq!(sigma_bound_from_eta(&large, 0.2).unwrap(), 7.0);
        assert!(sigma_bound_from_eta(&inputs, 0.0).is_err());
    }

    #[test]
    fn eta_bound_dominates_measured_weight() {
        let mut rng = RngState::new(30, 0).rng();
        for _ in 0..200 {
            let set = random_set(&mut rng);
            let bary = set.kl_barycenter().unwrap();
            let eta = set
                .iter()
                .map(|p| crate::policy::kl_divergence(p, &bary).unwrap())
                .fold(0.0, f64::max);
            let inputs = BoundInputs {
                n_targets: set.len(),
                eta,
                ..Default::default()
            };
            let bound = sigma_bound_from_eta(&inputs, bary.min_prob()).unwrap();
            let measured = set.max_importance_weight(&bary);
            assert!(
                measured <= bound + 1e-9,
                "measured {measured} above bound {bound}"
            );
        }
    }

    #[test]
    fn safe_bound_edges() {
        let inputs = BoundInputs {
            n_targets: 5,
            eta: 0.0,
            lambda: 0.5,
            k_arms: 4,
            ..Default::default()
        };
        // eta = 0: min(2N, 2) = 2
        assert_eq!(sigma_safe_bound(&inputs).unwrap(), 2.0);
        // lambda near one: the first branch diverges, the min stays finite
        let near_one = BoundInputs {
            lambda: 1.0 - 1e-12,
            eta: 0.1,
            ..inputs
        };
        let v = sigma_safe_bound(&near_one).unwrap();
        assert!(v.is_finite());
        for bad in [0.0, 1.0, -0.5] {
            assert!(sigma_safe_bound(&BoundInputs {
                lambda: bad,
                ..inputs
            })
            .is_err());
        }
    }

    #[test]
    fn safe_bound_dominates_measured_weight() {
        let mut rng = RngState::new(31, 0).rng();
        for _ in 0..200 {
            let set = random_set(&mut rng);
            let bary = set.kl_barycenter().unwrap();
            let eta = set
                .iter()
                .map(|p| crate::policy::kl_divergence(p, &bary).unwrap())
                .fold(0.0, f64::max);
            let lambda = rng.random_range(0.05..0.95);
            let safe = bary.safe_mix(lambda).unwrap();
            let measured = set.max_importance_weight(&safe);
            let inputs = BoundInputs {
                n_targets: set.len(),
                k_arms: set.num_actions(),
                eta,
                lambda,
                ..Default::default()
            };
            let bound = sigma_safe_bound(&inputs).unwrap();
            assert!(
                measured <= bound + 1e-9,
                "measured {measured} above bound {bound} at lambda {lambda}"
            );
        }
    }

    #[test]
    fn safe_bound_sqrt_eta_variant() {
        let inputs = BoundInputs {
            n_targets: 5,
            k_arms: 4,
            eta: 0.04,
            ..Default::default()
        };
        let via_lambda = sigma_safe_bound(&BoundInputs {
            lambda: 0.2,
            ..inputs
        })
        .unwrap();
        assert_abs_diff_eq!(
            sigma_safe_bound_sqrt_eta(&inputs).unwrap(),
            via_lambda,
            epsilon = 1e-12
        );
        assert!(sigma_safe_bound_sqrt_eta(&BoundInputs {
            eta: 0.0,
            ..inputs
        })
        .is_err());
        assert!(sigma_safe_bound_sqrt_eta(&BoundInputs {
            eta: 1.5,
            ..inputs
        })
        .is_err());
    }

    #[test]
    fn cluster_gate_example() {
        let inputs = BoundInputs {
            n_clusters: 2,
            n_targets: 4,
            n1: 2,
            delta: 0.1,
            r_star: 1.0,
            sigma: 1.0,
            epsilon: 0.1,
            ..Default::default()
        };
        // log argument (0*3 + 4 + 2) / 0.1 = 60
        let oracle = 2.0 * 2.0 * 60.0f64.ln() / 0.01;
        assert_abs_diff_eq!(
            sample_size_cluster_gate_raw(&inputs).unwrap(),
            oracle,
            epsilon = 1e-9
        );
        assert_eq!(sample_size_cluster_gate(&inputs).unwrap(), 1638);
    }

    #[test]
    fn cluster_gate_domain() {
        let inputs = BoundInputs {
            n_clusters: 1,
            n_targets: 4,
            ..Default::default()
        };
        assert!(sample_size_cluster_gate(&inputs).is_err());
        let eps_above_gap = BoundInputs {
            n_clusters: 2,
            gap: 0.05,
            epsilon: 0.1,
            ..inputs
        };
        assert!(matches!(
            sample_size_cluster_gate(&eps_above_gap),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn ckl_sample_size_example() {
        let inputs = BoundInputs {
            n_clusters: 2,
            n_targets: 4,
            n1: 2,
            delta: 0.1,
            epsilon: 0.1,
            ..Default::default()
        };
        // log argument (2 + 4 + 2 + 1*3) / 0.1 = 110
        let oracle = 2.0 * 2.0 * 110.0f64.ln() / 0.01;
        assert_abs_diff_eq!(
            sample_size_ckl_raw(&inputs).unwrap(),
            oracle,
            epsilon = 1e-9
        );
        assert_eq!(sample_size_ckl(&inputs).unwrap(), 1881);
    }

    #[test]
    fn ckl_monotone_in_clusters_and_sigma() {
        let base = BoundInputs {
            n_targets: 20,
            n1: 5,
            ..Default::default()
        };
        let mut prev = 0.0;
        for m in 1..=6 {
            let v = sample_size_ckl_raw(&BoundInputs {
                n_clusters: m,
                ..base
            })
            .unwrap();
            assert!(v > prev);
            prev = v;
        }
        let single = sample_size_ckl_raw(&base).unwrap();
        let doubled = sample_size_ckl_raw(&BoundInputs {
            sigma: 2.0,
            ..base
        })
        .unwrap();
        assert_abs_diff_eq!(doubled / single, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn ckl_at_one_cluster_matches_klpe_up_to_log_argument() {
        let inputs = BoundInputs {
            n_clusters: 1,
            n_targets: 12,
            n1: 12,
            sigma: 3.0,
            r_star: 1.5,
            delta: 0.05,
            epsilon: 0.2,
            ..Default::default()
        };
        let ckl = sample_size_ckl_raw(&inputs).unwrap();
        let klpe = sample_size_klpe_raw(&inputs).unwrap();
        let log_ratio = ((2.0 + 12.0 + 1.0) / 0.05f64).ln() / (12.0f64 / 0.05).ln();
        assert_abs_diff_eq!(ckl / klpe, log_ratio, epsilon = 1e-12);
    }

    #[test]
    fn expected_regret_bound_terms() {
        // isolating the first term
        let inputs = BoundInputs {
            r_star: 0.0,
            n_clusters: 1,
            n1: 1,
            n_targets: 1,
            ..Default::default()
        };
        let v = expected_regret_bound(&inputs, 1.0, 400).unwrap();
        assert_abs_diff_eq!(v, 4.0 / 20.0, epsilon = 1e-12);

        // decays toward zero
        let generic = BoundInputs {
            n_clusters: 2,
            n_targets: 10,
            n1: 3,
            sigma: 1.5,
            ..Default::default()
        };
        let coarse = expected_regret_bound(&generic, 1.0, 10_000).unwrap();
        let fine = expected_regret_bound(&generic, 1.0, 100_000_000).unwrap();
        assert!(coarse / fine > 50.0);

        // independent re-evaluation in expanded form
        let n = 10_000u64;
        let direct = expected_regret_bound(&generic, 1.0, n).unwrap();
        let nf = n as f64;
        let expanded = (1.0 / nf.sqrt()) + (2.0 * 3.0) / (10.0 * nf.sqrt())
            + (2.0 * 2.0) / (10.0 * nf.sqrt())
            + 2.0f64.sqrt() * 8.0f64.sqrt() * 1.5 * ((10.0 * nf.sqrt()).ln() / nf).sqrt();
        assert_abs_diff_eq!(direct, expanded, epsilon = 1e-12);

        assert!(expected_regret_bound(&generic, 1.0, 1).is_err());
        assert!(expected_regret_bound(&generic, 0.0, 100).is_err());
    }

    #[test]
    fn lower_bound_instance_n4() {
        let inst = lower_bound_model(4, 1.0).unwrap();
        assert_abs_diff_eq!(inst.lambda_r, 1.0 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            inst.model.mean_reward(1).unwrap(),
            5.0 / 6.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(inst.gap, 1.0 / 12.0, epsilon = 1e-15);
        assert_eq!(inst.sigma_n, 2.0);
        let bary = inst.policies.kl_barycenter().unwrap();
        assert_eq!(bary.probs(), &[3.0 / 8.0, 5.0 / 8.0]);
        // gap equals the exact value difference
        let v1 = inst.model.policy_value(inst.policies.get(0)).unwrap();
        let v2 = inst.model.policy_value(inst.policies.get(1)).unwrap();
        assert_abs_diff_eq!(v1 - v2, inst.gap, epsilon = 1e-15);
        assert!(v1 > v2);
    }

    #[test]
    fn lower_bound_instance_n3() {
        let inst = lower_bound_model(3, 1.0).unwrap();
        assert_abs_diff_eq!(inst.lambda_r, 1.0 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(inst.gap, 1.0 / 18.0, epsilon = 1e-15);
        assert!(lower_bound_model(2, 1.0).is_err());
        assert!(lower_bound_model(5, 0.0).is_err());
    }

    #[test]
    fn measured_weight_is_exactly_half_the_set_size() {
        for n in 3..=20 {
            let inst = lower_bound_model(n, 1.0).unwrap();
            let bary = inst.policies.kl_barycenter().unwrap();
            let measured = inst.policies.max_importance_weight(&bary);
            assert_eq!(
                measured,
                n as f64 / 2.0,
                "inexact weight for {n} policies"
            );
            assert_eq!(measured, inst.sigma_n);
        }
    }

    #[test]
    fn lower_bound_probability_values() {
        // exp term vanishes in the infinite-sigma limit
        assert_abs_diff_eq!(
            lower_bound_prob(2, f64::INFINITY),
            0.5,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            lower_bound_prob(8, 2.0),
            0.25 * (-1.0f64).exp(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(lower_bound_prob(8, 2.0), 0.09197, epsilon = 1e-5);
        let mut prev = f64::INFINITY;
        for n in [1u64, 2, 4, 8, 16, 32] {
            let v = lower_bound_prob(n, 3.0);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn uniform_limit_deviation_single_arm_is_zero() {
        assert_eq!(
            uniform_limit_deviation(5, 1, 1.0, RngState::new(0, 0)),
            0.0
        );
    }

    #[test]
    fn barycenter_flattens_as_the_set_grows() {
        let dev_small = uniform_limit_deviation(100, 5, 1.0, RngState::new(77, 0));
        let dev_large = uniform_limit_deviation(10_000, 5, 1.0, RngState::new(77, 0));
        assert!(dev_large < dev_small);
        assert!(dev_large < 0.02);
    }
}
