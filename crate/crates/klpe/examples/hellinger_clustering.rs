//! Square-root embedding plus k-means turns a heterogeneous policy set into
//! clusters with small within-cluster importance weights.
//!
//! Run with `cargo run --example hellinger_clustering`.

use klpe::{cluster_barycenters, kmeans, sqrt_embed, Policy, PolicySet, RngState};
use rand::Rng;

fn main() {
    // three planted families of softmax policies, each slanted toward its
    // own block of actions
    let k = 12;
    let mut rng = RngState::new(31, 0).rng();
    let mut policies = Vec::new();
    for (family, block) in [(0usize, 0usize), (1, 4), (2, 8)] {
        for _ in 0..20 {
            let mut w: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..0.3)).collect();
            for offset in 0..4 {
                w[block + offset] += 2.0 + rng.random_range(0.0..0.2);
            }
            let _ = family;
            policies.push(Policy::softmax_from_weights(&w, 1.0).unwrap());
        }
    }
    let set = PolicySet::new(policies).unwrap();
    let bary = set.kl_barycenter().unwrap();
    let sigma_kl = set.max_importance_weight(&bary);
    println!(
        "N = {} policies over {k} actions; single-barycenter sigma = {sigma_kl:.3} (sigma^2 = {:.1})",
        set.len(),
        sigma_kl * sigma_kl
    );

    let points = sqrt_embed(&set);
    println!("\n       M    sigma_c    M*sigma_c^2   improvement   cluster sizes");
    for m in [1usize, 2, 3, 4, 6, 10] {
        let assignment = kmeans(&points, m, 100, RngState::new(31, 1 + m as u64)).unwrap();
        let design = cluster_barycenters(&set, &assignment).unwrap();
        println!(
            "    {m:4}    {:7.3}    {:11.2}   {:11}   {:?}",
            design.sigma_c(),
            design.m_sigma_c_sq(),
            design.improvement_holds(sigma_kl),
            assignment.cluster_sizes()
        );
    }

    // at M = 3 the planted families come back out
    let assignment = kmeans(&points, 3, 100, RngState::new(31, 4)).unwrap();
    let labels = assignment.labels();
    println!("\nlabels at M = 3 (planted families of 20):");
    for family in 0..3 {
        println!("  family {family}: {:?}", &labels[family * 20..(family + 1) * 20]);
    }
}
