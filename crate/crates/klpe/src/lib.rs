//! Sample-efficient behavior policy design for best-policy selection in
//! stochastic multi-armed bandits.
//!
//! Given a set of target policies, the library builds behavior policies as
//! KL-barycenters -- either one for the whole set or one per
//! Hellinger-clustered group -- collects seeded (action, reward) data under
//! them, and selects the best target policy from importance-sampling
//! estimates. Closed-form sample-complexity and weight bounds quantify when
//! clustering pays off, and an experiment harness reproduces the benchmark
//! testbed with CSV output.
//!
//! Start with the runnable programs under `examples/`, one per capability.

pub mod bandit;
pub mod bounds;
pub mod cluster;
pub mod error;
pub mod estimator;
pub mod harness;
pub mod policy;
pub mod rng;

pub use bandit::{BanditModel, RewardDistribution};
pub use cluster::{cluster_barycenters, kmeans, sqrt_embed, ClusterAssignment, ClusteredDesign};
pub use error::{Error, Result};
pub use estimator::{
    allocate_samples, clustered_estimates, is_estimate, mc_estimate, regret, select_best,
    Dataset, EstimateTable, SelectionResult,
};
pub use policy::{entropy, hellinger_sq, kl_divergence, Policy, PolicySet};
pub use rng::RngState;
