//! Flat `key = value` experiment configuration.
//!
//! One key per line; `#` starts a comment. Lists are comma-separated and
//! nested lists semicolon-separated, e.g.
//! `preferred_arms = 2; 3,5; 22,24,34; 23,99; 99; 53`. Unknown keys are
//! rejected. Defaults reproduce the benchmark testbed.

use crate::error::{Error, Result};
use std::path::Path;

/// Full description of a testbed and sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub k_arms: usize,
    /// Mean reward of the first arm.
    pub top_mean: f64,
    /// Linear decrease of the mean per arm.
    pub mean_decay: f64,
    /// Per-arm reward variance is drawn uniformly from this range.
    pub variance_range: (f64, f64),
    pub n_targets: usize,
    /// Per-(policy, arm) base softmax weight range.
    pub base_weight_range: (f64, f64),
    /// Policy group sizes; must sum to `n_targets`.
    pub group_sizes: Vec<usize>,
    /// Preferred arms per group, 1-based as written in config files.
    pub preferred_arms: Vec<Vec<usize>>,
    /// Extra softmax weight range applied on preferred arms.
    pub extra_weight_range: (f64, f64),
    pub temperature: f64,
    /// When true (default), one extra weight is drawn per (group, preferred
    /// arm) and shared by all policies of the group, which is what gives the
    /// groups their tight structure. When false each policy draws its own
    /// extra weight per preferred arm.
    pub shared_group_weight: bool,
    /// Cluster counts to sweep (the M axis).
    pub cluster_counts: Vec<usize>,
    /// Total sample sizes to sweep (the n axis).
    pub sample_sizes: Vec<usize>,
    pub replications: usize,
    pub master_seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            k_arms: 100,
            top_mean: 3.0,
            mean_decay: 0.05,
            variance_range: (1.0, 3.0),
            n_targets: 1000,
            base_weight_range: (1.0, 2.0),
            group_sizes: vec![25, 50, 25, 825, 50, 25],
            preferred_arms: vec![
                vec![2],
                vec![3, 5],
                vec![22, 24, 34],
                vec![23, 99],
                vec![99],
                vec![53],
            ],
            extra_weight_range: (1.0, 10.0),
            temperature: 1.0,
            shared_group_weight: true,
            cluster_counts: vec![1, 2, 5, 10, 20, 50],
            sample_sizes: vec![10_000],
            replications: 1000,
            master_seed: 42,
        }
    }
}

impl ExperimentConfig {
    /// Parses a config source, starting from the defaults.
    pub fn parse(source: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (line_no, raw) in source.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::config(
                    format!("line {}", line_no + 1),
                    format!("expected `key = value`, got `{line}`"),
                ));
            };
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let source = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&source)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "k_arms" => self.k_arms = parse_scalar(key, value)?,
            "top_mean" => self.top_mean = parse_scalar(key, value)?,
            "mean_decay" => self.mean_decay = parse_scalar(key, value)?,
            "variance_range" => self.variance_range = parse_range(key, value)?,
            "n_targets" => self.n_targets = parse_scalar(key, value)?,
            "base_weight_range" => self.base_weight_range = parse_range(key, value)?,
            "group_sizes" => self.group_sizes = parse_list(key, value)?,
            "preferred_arms" => self.preferred_arms = parse_nested_list(key, value)?,
            "extra_weight_range" => self.extra_weight_range = parse_range(key, value)?,
            "temperature" => self.temperature = parse_scalar(key, value)?,
            "shared_group_weight" => self.shared_group_weight = parse_bool(key, value)?,
            "cluster_counts" => self.cluster_counts = parse_list(key, value)?,
            "sample_sizes" => self.sample_sizes = parse_list(key, value)?,
            "replications" => self.replications = parse_scalar(key, value)?,
            "master_seed" => self.master_seed = parse_scalar(key, value)?,
            other => {
                return Err(Error::config(other, "unknown key"));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_arms == 0 {
            return Err(Error::config("k_arms", "must be positive"));
        }
        if self.n_targets == 0 {
            return Err(Error::config("n_targets", "must be positive"));
        }
        if self.mean_decay < 0.0 {
            return Err(Error::config("mean_decay", "must be non-negative"));
        }
        for (field, (lo, hi)) in [
            ("variance_range", self.variance_range),
            ("base_weight_range", self.base_weight_range),
            ("extra_weight_range", self.extra_weight_range),
        ] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::config(
                    field,
                    format!("needs low < high, got ({lo}, {hi})"),
                ));
            }
        }
        if self.variance_range.0 <= 0.0 {
            return Err(Error::config("variance_range", "variances must be positive"));
        }
        if !(self.temperature.is_finite() && self.temperature > 0.0) {
            return Err(Error::config("temperature", "must be positive"));
        }
        let total: usize = self.group_sizes.iter().sum();
        if total != self.n_targets {
            return Err(Error::config(
                "group_sizes",
                format!("sum {total} does not match n_targets {}", self.n_targets),
            ));
        }
        if self.group_sizes.contains(&0) {
            return Err(Error::config("group_sizes", "group sizes must be positive"));
        }
        if self.preferred_arms.len() != self.group_sizes.len() {
            return Err(Error::config(
                "preferred_arms",
                format!(
                    "{} groups of preferred arms for {} group sizes",
                    self.preferred_arms.len(),
                    self.group_sizes.len()
                ),
            ));
        }
        for arms in &self.preferred_arms {
            for &a in arms {
                if a == 0 || a > self.k_arms {
                    return Err(Error::config(
                        "preferred_arms",
                        format!("arm {a} outside 1..={} (indices are 1-based)", self.k_arms),
                    ));
                }
            }
        }
        if self.cluster_counts.is_empty() {
            return Err(Error::config("cluster_counts", "must not be empty"));
        }
        for &m in &self.cluster_counts {
            if m == 0 || m > self.n_targets {
                return Err(Error::config(
                    "cluster_counts",
                    format!("M = {m} outside 1..={}", self.n_targets),
                ));
            }
        }
        if self.sample_sizes.is_empty() {
            return Err(Error::config("sample_sizes", "must not be empty"));
        }
        if self.sample_sizes.contains(&0) {
            return Err(Error::config("sample_sizes", "sample sizes must be positive"));
        }
        if self.replications == 0 {
            return Err(Error::config("replications", "must be positive"));
        }
        Ok(())
    }

    /// Renders the config in its own file format.
    pub fn to_config_string(&self) -> String {
        let range = |(lo, hi): (f64, f64)| format!("{lo},{hi}");
        let list = |v: &[usize]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let nested = self
            .preferred_arms
            .iter()
            .map(|arms| list(arms))
            .collect::<Vec<_>>()
            .join("; ");
        format!(
            "k_arms = {}\ntop_mean = {}\nmean_decay = {}\nvariance_range = {}\n\
             n_targets = {}\nbase_weight_range = {}\ngroup_sizes = {}\n\
             preferred_arms = {}\nextra_weight_range = {}\ntemperature = {}\n\
             shared_group_weight = {}\ncluster_counts = {}\nsample_sizes = {}\n\
             replications = {}\nmaster_seed = {}\n",
            self.k_arms,
            self.top_mean,
            self.mean_decay,
            range(self.variance_range),
            self.n_targets,
            range(self.base_weight_range),
            list(&self.group_sizes),
            nested,
            range(self.extra_weight_range),
            self.temperature,
            self.shared_group_weight,
            list(&self.cluster_counts),
            list(&self.sample_sizes),
            self.replications,
            self.master_seed
        )
    }
}

fn parse_scalar<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(key, format!("cannot parse `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(Error::config(key, format!("cannot parse `{other}` as bool"))),
    }
}

fn parse_range(key: &str, value: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Error::config(key, format!("expected `low,high`, got `{value}`")));
    }
    Ok((parse_scalar(key, parts[0])?, parse_scalar(key, parts[1])?))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<usize>> {
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|p| parse_scalar(key, p.trim()))
        .collect()
}

fn parse_nested_list(key: &str, value: &str) -> Result<Vec<Vec<usize>>> {
    value
        .split(';')
        .map(|seg| parse_list(key, seg.trim()))
        .collect()
}
