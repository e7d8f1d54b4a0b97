//! Closed-form sample sizes and weight caps for a selection scenario.
//!
//! Run with `cargo run --example closed_form_bounds`.

use klpe::bounds::{
    expected_regret_bound, sample_size_cluster_gate, sample_size_ckl, sample_size_klpe,
    sigma_safe_bound, sigma_safe_bound_sqrt_eta, BoundInputs,
};

fn main() {
    // scenario: 200 targets, subgaussian scale 1, accuracy 0.1 at confidence 0.9
    let inputs = BoundInputs {
        epsilon: 0.1,
        delta: 0.1,
        r_star: 1.0,
        sigma: 8.0, // measured single-barycenter weight
        n_targets: 200,
        n_clusters: 1,
        n1: 200,
        eta: 0.05,
        lambda: 0.25,
        gap: 0.3,
        k_arms: 50,
    };

    println!("single barycenter (sigma = {}):", inputs.sigma);
    println!("  samples for selection: {}", sample_size_klpe(&inputs).unwrap());

    // clustering brings sigma down to 1.6 at M = 8 with the best cluster
    // holding 40 policies
    let clustered = BoundInputs {
        sigma: 1.6,
        n_clusters: 8,
        n1: 40,
        ..inputs
    };
    println!(
        "\nclustered design (M = {}, sigma_c = {}):",
        clustered.n_clusters, clustered.sigma
    );
    println!(
        "  samples for selection:      {}",
        sample_size_ckl(&clustered).unwrap()
    );
    println!(
        "  samples for the best-cluster gate: {}",
        sample_size_cluster_gate(&clustered).unwrap()
    );
    println!(
        "  improvement condition M sigma_c^2 < sigma^2: {:.1} < {:.1} -> {}",
        clustered.n_clusters as f64 * clustered.sigma * clustered.sigma,
        inputs.sigma * inputs.sigma,
        clustered.n_clusters as f64 * clustered.sigma * clustered.sigma
            < inputs.sigma * inputs.sigma
    );

    println!("\nexpected regret ceiling as samples accumulate (delta_max = 0.5):");
    for n in [1_000u64, 10_000, 100_000] {
        println!(
            "  n = {n:>7}: {:.4}",
            expected_regret_bound(&clustered, 0.5, n).unwrap()
        );
    }

    println!("\ndefensive-mixture weight caps (eta = {}):", inputs.eta);
    for lambda in [0.1, 0.25, 0.5] {
        let v = sigma_safe_bound(&BoundInputs { lambda, ..inputs }).unwrap();
        println!("  lambda = {lambda}: {v:.3}");
    }
    println!(
        "  lambda = sqrt(eta) coupling: {:.3}",
        sigma_safe_bound_sqrt_eta(&inputs).unwrap()
    );
}
