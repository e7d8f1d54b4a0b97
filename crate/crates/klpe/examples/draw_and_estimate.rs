//! One behavior policy, many target policies: draw seeded data under the
//! KL-barycenter and pick the best target from importance-sampling
//! estimates.
//!
//! Run with `cargo run --example draw_and_estimate`.

use klpe::{
    is_estimate, mc_estimate, regret, select_best, BanditModel, EstimateTable, Policy,
    PolicySet, RewardDistribution, RngState,
};

fn main() {
    let model = BanditModel::new(vec![
        RewardDistribution::Gaussian { mean: 1.0, variance: 1.0 },
        RewardDistribution::Gaussian { mean: 0.6, variance: 1.5 },
        RewardDistribution::Bernoulli { p: 0.4 },
    ])
    .unwrap();

    let set = PolicySet::new(vec![
        Policy::softmax_from_weights(&[1.5, 0.0, 0.0], 1.0).unwrap(),
        Policy::softmax_from_weights(&[0.0, 1.5, 0.0], 1.0).unwrap(),
        Policy::softmax_from_weights(&[0.0, 0.0, 1.5], 1.0).unwrap(),
        Policy::uniform(3),
    ])
    .unwrap();

    println!("exact values:");
    for (i, p) in set.iter().enumerate() {
        println!("  v(pi_{i}) = {:.4}", model.policy_value(p).unwrap());
    }

    // one dataset drawn under the barycenter serves every target policy
    let behavior = set.kl_barycenter().unwrap();
    let n = 4_000;
    let data = model.draw(&behavior, n, RngState::new(2024, 0)).unwrap();
    println!("\n{n} samples under the barycenter {:?}", behavior.probs());

    let rewards: Vec<f64> = data.iter().map(|&(_, r)| r).collect();
    println!(
        "reward mean {:.4} vs v(behavior) = {:.4}",
        mc_estimate(&rewards).unwrap(),
        model.policy_value(&behavior).unwrap()
    );

    let values: Vec<f64> = set
        .iter()
        .map(|p| is_estimate(p, &behavior, &data).unwrap())
        .collect();
    println!("\nimportance-sampling estimates from the shared dataset:");
    for (i, v) in values.iter().enumerate() {
        println!(
            "  v_hat(pi_{i}) = {v:.4}  (error {:+.4})",
            v - model.policy_value(set.get(i)).unwrap()
        );
    }

    let table = EstimateTable {
        values,
        cluster_of: vec![0; set.len()],
    };
    let selection = select_best(&table).unwrap();
    let selection_regret = regret(&model, &set, selection.selected_index).unwrap();
    println!(
        "\nselected pi_{} with estimate {:.4}; exact regret {:.5}",
        selection.selected_index, selection.selected_estimate, selection_regret
    );
}
