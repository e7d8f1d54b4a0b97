//! The two-arm instance on which a single barycenter must fail: its maximal
//! weight grows like N/2 and the misselection probability stays above a
//! closed-form floor.
//!
//! Run with `cargo run --example lower_bound_replication`.

use klpe::bounds::{lower_bound_model, lower_bound_prob};
use klpe::{is_estimate, select_best, EstimateTable, RngState};

fn main() {
    let inst = lower_bound_model(10, 1.0).unwrap();
    let bary = inst.policies.kl_barycenter().unwrap();
    println!(
        "10 policies, rewards r1 = 1 and r2 = {:.6}; value gap {:.6}",
        inst.model.mean_reward(1).unwrap(),
        inst.gap
    );
    println!(
        "barycenter {:?}; measured maximal weight {} (= N/2)",
        bary.probs(),
        inst.policies.max_importance_weight(&bary)
    );

    let replications = 20_000;
    println!("\nmisselection frequency over {replications} replications:");
    println!("       n    empirical    closed-form floor");
    for n in [16usize, 32, 64, 128] {
        let mut misselections = 0usize;
        for rep in 0..replications {
            let data = inst
                .model
                .draw(&bary, n, RngState::new(5, 0).derive(&[n as u64, rep as u64]))
                .unwrap();
            let values: Vec<f64> = inst
                .policies
                .iter()
                .map(|p| is_estimate(p, &bary, &data).unwrap())
                .collect();
            let cluster_of = vec![0; values.len()];
            if select_best(&EstimateTable { values, cluster_of })
                .unwrap()
                .selected_index
                != 0
            {
                misselections += 1;
            }
        }
        println!(
            "    {n:4}    {:9.4}    {:17.4}",
            misselections as f64 / replications as f64,
            lower_bound_prob(n as u64, inst.sigma_n)
        );
    }
    println!("\nthe floor decays like exp(-n / (2 sigma^2)) / sqrt(2n), so pushing");
    println!("the misselection rate down costs on the order of sigma^2 samples");
}
