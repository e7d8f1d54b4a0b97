//! Simplex arithmetic: softmax policies, divergences, the KL-barycenter and
//! its weight guarantees, and defensive mixing.
//!
//! Run with `cargo run --example barycenter_basics`.

use klpe::bounds::{sigma_bound_from_eta, sigma_safe_bound, uniform_limit_deviation, BoundInputs};
use klpe::{entropy, hellinger_sq, kl_divergence, Policy, PolicySet, RngState};
use rand::Rng;

fn main() {
    // three softmax policies over four actions
    let policies = vec![
        Policy::softmax_from_weights(&[2.0, 0.0, 0.0, 0.0], 1.0).unwrap(),
        Policy::softmax_from_weights(&[1.5, 0.5, 0.0, 0.0], 1.0).unwrap(),
        Policy::softmax_from_weights(&[0.0, 0.0, 1.0, 1.0], 1.0).unwrap(),
    ];
    for (i, p) in policies.iter().enumerate() {
        println!(
            "pi_{i}: {:?}  entropy = {:.4}",
            p.probs().iter().map(|x| (x * 1e4).round() / 1e4).collect::<Vec<_>>(),
            entropy(p)
        );
    }
    let set = PolicySet::new(policies).unwrap();

    println!(
        "\nKL(pi_0 || pi_1) = {:.4}   KL(pi_1 || pi_0) = {:.4}   D_H^2(pi_0, pi_1) = {:.4}",
        kl_divergence(set.get(0), set.get(1)).unwrap(),
        kl_divergence(set.get(1), set.get(0)).unwrap(),
        hellinger_sq(set.get(0), set.get(1)).unwrap(),
    );

    // the arithmetic mean minimizes the average right KL divergence
    let bary = set.kl_barycenter().unwrap();
    let at_bary = set.average_right_kl(&bary).unwrap();
    println!("\nbarycenter: {:?}", bary.probs());
    println!("average right KL at the barycenter: {at_bary:.5}");
    let mut rng = RngState::new(7, 0).rng();
    for _ in 0..3 {
        let w: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        let challenger = Policy::softmax_from_weights(&w, 1.0).unwrap();
        println!(
            "  challenger {:?} -> {:.5}",
            challenger.probs().iter().map(|x| (x * 100.0).round() / 100.0).collect::<Vec<_>>(),
            set.average_right_kl(&challenger).unwrap()
        );
    }

    // importance weights against the barycenter never exceed the set size,
    // and the KL-proximity cap tightens that when the set is homogeneous
    let sigma = set.max_importance_weight(&bary);
    let eta = set
        .iter()
        .map(|p| kl_divergence(p, &bary).unwrap())
        .fold(0.0, f64::max);
    let inputs = BoundInputs {
        n_targets: set.len(),
        k_arms: set.num_actions(),
        eta,
        lambda: 0.2,
        ..Default::default()
    };
    println!(
        "\nsigma = {sigma:.4} (cap N = {}); eta = {eta:.4} gives cap {:.4}",
        set.len(),
        sigma_bound_from_eta(&inputs, bary.min_prob()).unwrap()
    );

    // defensive mixing floors the behavior policy away from zero
    let safe = bary.safe_mix(0.2).unwrap();
    println!(
        "safe mix (lambda = 0.2): min prob {:.4} -> {:.4}, measured weight {:.4} <= cap {:.4}",
        bary.min_prob(),
        safe.min_prob(),
        set.max_importance_weight(&safe),
        sigma_safe_bound(&inputs).unwrap()
    );

    // barycenters of large random softmax sets flatten toward uniform
    println!("\nbarycenter deviation from uniform (K = 5):");
    for n in [100usize, 1_000, 10_000] {
        let dev = uniform_limit_deviation(n, 5, 1.0, RngState::new(11, 0));
        println!("  N = {n:>6}: {dev:.5}");
    }
}
