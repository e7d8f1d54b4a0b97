//! The benchmark sweep at reduced replication count: 1000 softmax policies
//! over 100 Gaussian arms, compared across cluster counts at a fixed sample
//! budget. Writes the records as CSV next to the summary it prints.
//!
//! Run with `cargo run --example paper_testbed_sweep [reps]` (default 100;
//! the benchmark uses 1000).

use klpe::harness::sweep::bootstrap_mean_ci;
use klpe::harness::{emit_csv, run_sweep, ExperimentConfig};
use klpe::RngState;

fn main() {
    let reps: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100);
    let cfg = ExperimentConfig {
        cluster_counts: vec![1, 2, 5, 10, 20, 50, 1000],
        sample_sizes: vec![10_000],
        replications: reps,
        master_seed: 3,
        ..Default::default()
    };

    let started = std::time::Instant::now();
    let records = run_sweep(&cfg).unwrap();
    println!(
        "{} records ({} cluster counts x {} sample sizes x {reps} replications) in {:?}\n",
        records.len(),
        cfg.cluster_counts.len(),
        cfg.sample_sizes.len(),
        started.elapsed()
    );

    println!(" method       M    M*sigma_c^2    mean regret    95% bootstrap ci");
    for &m in &cfg.cluster_counts {
        let cell: Vec<&klpe::harness::RunRecord> =
            records.iter().filter(|r| r.m == m).collect();
        let regrets: Vec<f64> = cell.iter().map(|r| r.regret).collect();
        let mean = regrets.iter().sum::<f64>() / regrets.len() as f64;
        let (lo, hi) = bootstrap_mean_ci(&regrets, 2000, 0.95, RngState::new(9, m as u64));
        println!(
            " {:6} {m:5}    {:11.1}    {mean:11.5}    ({lo:.5}, {hi:.5})",
            cell[0].method.as_str(),
            cell[0].m_sigma_c_sq
        );
    }

    let out = std::env::temp_dir().join("klpe_sweep.csv");
    emit_csv(&records, &out).unwrap();
    println!("\nwrote {}", out.display());
}
