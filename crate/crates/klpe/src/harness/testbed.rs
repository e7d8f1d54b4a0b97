//! Testbed generation and its text serialization.

use crate::bandit::{BanditModel, RewardDistribution};
use crate::error::{Error, Result};
use crate::harness::config::ExperimentConfig;
use crate::policy::{Policy, PolicySet};
use crate::rng::RngState;
use rand::Rng;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

/// Generates the configured bandit model and target-policy set.
///
/// Arm `a` (0-based) is Gaussian with mean `top_mean - a * mean_decay` and a
/// variance drawn uniformly from `variance_range`. Policies are built per
/// group: uniform base weights per arm, extra weights on the group's
/// preferred arms (shared per group or drawn per policy, see
/// [`ExperimentConfig::shared_group_weight`]), then a softmax at the
/// configured temperature.
///
/// Draw order is fixed: arm variances first, then the shared extras (when
/// enabled) group by group, then per policy its base weights followed by its
/// own extras (when not shared).
pub fn generate_testbed(
    cfg: &ExperimentConfig,
    rng: RngState,
) -> Result<(BanditModel, PolicySet)> {
    cfg.validate()?;
    let mut rng = rng.rng();
    let k = cfg.k_arms;

    let mut arms = Vec::with_capacity(k);
    for a in 0..k {
        let mean = cfg.top_mean - a as f64 * cfg.mean_decay;
        let variance = rng.random_range(cfg.variance_range.0..cfg.variance_range.1);
        arms.push(RewardDistribution::Gaussian { mean, variance });
    }
    let model = BanditModel::new(arms)?;

    // preferred arms are written 1-based in configs
    let preferred: Vec<Vec<usize>> = cfg
        .preferred_arms
        .iter()
        .map(|arms| arms.iter().map(|&a| a - 1).collect())
        .collect();

    let shared_extras: Vec<Vec<f64>> = if cfg.shared_group_weight {
        preferred
            .iter()
            .map(|arms| {
                arms.iter()
                    .map(|_| rng.random_range(cfg.extra_weight_range.0..cfg.extra_weight_range.1))
                    .collect()
            })
            .collect()
    } else {
        Vec::new()
    };

    let mut policies = Vec::with_capacity(cfg.n_targets);
    let mut weights = vec![0.0f64; k];
    for (g, &size) in cfg.group_sizes.iter().enumerate() {
        for _ in 0..size {
            for w in weights.iter_mut() {
                *w = rng.random_range(cfg.base_weight_range.0..cfg.base_weight_range.1);
            }
            for (slot, &arm) in preferred[g].iter().enumerate() {
                let extra = if cfg.shared_group_weight {
                    shared_extras[g][slot]
                } else {
                    rng.random_range(cfg.extra_weight_range.0..cfg.extra_weight_range.1)
                };
                weights[arm] += extra;
            }
            policies.push(Policy::softmax_from_weights(&weights, cfg.temperature)?);
        }
    }
    Ok((model, PolicySet::new(policies)?))
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a testbed as text: one `arm <idx> <kind> <params...>` line per arm
/// followed by one `policy <idx> <p_0> ... <p_K-1>` line per policy, reals
/// with 17 significant digits.
pub fn write_testbed<W: Write>(
    model: &BanditModel,
    set: &PolicySet,
    w: &mut W,
) -> std::io::Result<()> {
    for (idx, arm) in model.arms().iter().enumerate() {
        match *arm {
            RewardDistribution::Gaussian { mean, variance } => {
                writeln!(w, "arm {idx} gaussian {} {}", fmt17(mean), fmt17(variance))?;
            }
            RewardDistribution::Bernoulli { p } => {
                writeln!(w, "arm {idx} bernoulli {}", fmt17(p))?;
            }
            RewardDistribution::Deterministic { r } => {
                writeln!(w, "arm {idx} deterministic {}", fmt17(r))?;
            }
        }
    }
    for (idx, policy) in set.iter().enumerate() {
        write!(w, "policy {idx}")?;
        for &p in policy.probs() {
            write!(w, " {}", fmt17(p))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn write_testbed_file(model: &BanditModel, set: &PolicySet, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io_err)?;
    let mut writer = std::io::BufWriter::new(file);
    write_testbed(model, set, &mut writer).map_err(io_err)?;
    writer.flush().map_err(io_err)
}

/// Parses a testbed previously written by [`write_testbed`]. Policy entries
/// are taken verbatim (no renormalization) so a round trip is exact.
pub fn read_testbed<R: std::io::Read>(reader: R) -> Result<(BanditModel, PolicySet)> {
    let mut arms = Vec::new();
    let mut policies = Vec::new();
    for (line_no, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|source| Error::Io {
            path: "<testbed>".into(),
            source,
        })?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let bad = |msg: &str| Error::invalid(format!("testbed line {}: {msg}", line_no + 1));
        let parse = |tok: Option<&str>, what: &str| -> Result<f64> {
            tok.ok_or_else(|| bad(&format!("missing {what}")))?
                .parse::<f64>()
                .map_err(|_| bad(&format!("bad {what}")))
        };
        match parts.next() {
            Some("arm") => {
                let _idx = parts.next();
                match parts.next() {
                    Some("gaussian") => {
                        let mean = parse(parts.next(), "mean")?;
                        let variance = parse(parts.next(), "variance")?;
                        arms.push(RewardDistribution::Gaussian { mean, variance });
                    }
                    Some("bernoulli") => {
                        let p = parse(parts.next(), "p")?;
                        arms.push(RewardDistribution::Bernoulli { p });
                    }
                    Some("deterministic") => {
                        let r = parse(parts.next(), "r")?;
                        arms.push(RewardDistribution::Deterministic { r });
                    }
                    other => return Err(bad(&format!("unknown arm kind {other:?}"))),
                }
            }
            Some("policy") => {
                let _idx = parts.next();
                let probs: Vec<f64> = parts
                    .map(|tok| tok.parse::<f64>().map_err(|_| bad("bad probability")))
                    .collect::<Result<_>>()?;
                if probs.is_empty() {
                    return Err(bad("policy line without probabilities"));
                }
                policies.push(Policy::from_normalized(probs));
            }
            other => return Err(bad(&format!("unknown record {other:?}"))),
        }
    }
    Ok((BanditModel::new(arms)?, PolicySet::new(policies)?))
}

pub fn read_testbed_file(path: &Path) -> Result<(BanditModel, PolicySet)> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_testbed(file)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            k_arms: 10,
            n_targets: 30,
            group_sizes: vec![10, 20],
            preferred_arms: vec![vec![2], vec![5, 7]],
            cluster_counts: vec![1, 2],
            sample_sizes: vec![100],
            replications: 2,
            ..Default::default()
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = small_config();
        let s = RngState::new(7, 0);
        let (m1, p1) = generate_testbed(&cfg, s).unwrap();
        let (m2, p2) = generate_testbed(&cfg, s).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(p1, p2);
    }

    #[test]
    fn generated_arms_follow_the_mean_schedule() {
        let cfg = small_config();
        let (model, set) = generate_testbed(&cfg, RngState::new(1, 0)).unwrap();
        assert_eq!(model.num_arms(), 10);
        assert_eq!(set.len(), 30);
        for a in 0..10 {
            assert_eq!(model.mean_reward(a).unwrap(), 3.0 - 0.05 * a as f64);
            match model.arms()[a] {
                RewardDistribution::Gaussian { variance, .. } => {
                    assert!((1.0..3.0).contains(&variance));
                }
                _ => panic!("expected gaussian arm"),
            }
        }
        assert!(set.iter().all(|p| p.is_strictly_positive()));
    }

    #[test]
    fn shared_extras_make_groups_tight() {
        let cfg = small_config();
        let independent = ExperimentConfig {
            shared_group_weight: false,
            ..cfg.clone()
        };
        let (_, shared_set) = generate_testbed(&cfg, RngState::new(3, 0)).unwrap();
        let (_, indep_set) = generate_testbed(&independent, RngState::new(3, 0)).unwrap();
        let spread = |set: &PolicySet, lo: usize, hi: usize| {
            let members = PolicySet::new(set.policies()[lo..hi].to_vec()).unwrap();
            let bary = members.kl_barycenter().unwrap();
            members.average_right_kl(&bary).unwrap()
        };
        // within-group KL spread is far smaller when the extra weight is shared
        assert!(spread(&shared_set, 0, 10) < spread(&indep_set, 0, 10) / 2.0);
    }

    #[test]
    fn exchangeable_policies_flatten_the_barycenter() {
        // one group, no preferred arms: the barycenter approaches uniform
        let cfg = ExperimentConfig {
            k_arms: 10,
            n_targets: 1000,
            group_sizes: vec![1000],
            preferred_arms: vec![vec![]],
            cluster_counts: vec![1],
            ..Default::default()
        };
        let (_, set) = generate_testbed(&cfg, RngState::new(5, 0)).unwrap();
        let bary = set.kl_barycenter().unwrap();
        for &p in bary.probs() {
            assert!((p - 0.1).abs() < 0.01, "barycenter entry {p}");
        }
    }

    #[test]
    fn serialization_round_trips_exactly() {
        let cfg = small_config();
        let (model, set) = generate_testbed(&cfg, RngState::new(9, 0)).unwrap();
        let mut buf = Vec::new();
        write_testbed(&model, &set, &mut buf).unwrap();
        let (model2, set2) = read_testbed(buf.as_slice()).unwrap();
        assert_eq!(model, model2);
        assert_eq!(set, set2);
    }
}
