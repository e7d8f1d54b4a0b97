//! Sweep execution: clustering designs, per-replication runs and CSV output.

use crate::bandit::BanditModel;
use crate::cluster::{cluster_barycenters, kmeans, sqrt_embed, ClusteredDesign};
use crate::error::{Error, Result};
use crate::estimator::{allocate_samples, clustered_estimates, regret, select_best, Dataset};
use crate::harness::config::ExperimentConfig;
use crate::harness::testbed::generate_testbed;
use crate::policy::PolicySet;
use crate::rng::RngState;
use rand::Rng;
use rayon::prelude::*;
use std::io::Write;
use std::path::Path;

/// Default Lloyd iteration cap. Label convergence is reached far earlier at
/// the problem sizes in scope.
pub const KMEANS_MAX_ITER: usize = 100;

// stream derivation tags; testbed, clustering and sampling never share a stream
const TAG_TESTBED: u64 = 0xB1;
const TAG_CLUSTER: u64 = 0xB2;
const TAG_DRAW: u64 = 0xB3;

/// Stream under which a sweep generates its testbed for a master seed.
pub fn testbed_stream(master_seed: u64) -> RngState {
    RngState::new(master_seed, 0).derive(&[TAG_TESTBED])
}

/// Stream under which a sweep clusters the testbed at a given M.
pub fn cluster_stream(master_seed: u64, m: usize) -> RngState {
    RngState::new(master_seed, 0).derive(&[TAG_CLUSTER, m as u64])
}

/// How a run's behavior policies were constructed: one barycenter, one per
/// cluster, or one per target policy (the Monte Carlo baseline).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Klpe,
    Cklpe,
    Mc,
}

impl Method {
    pub fn for_cluster_count(m: usize, n_targets: usize) -> Self {
        if m == 1 {
            Method::Klpe
        } else if m == n_targets {
            Method::Mc
        } else {
            Method::Cklpe
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Klpe => "KLPE",
            Method::Cklpe => "CKLPE",
            Method::Mc => "MC",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "KLPE" => Ok(Method::Klpe),
            "CKLPE" => Ok(Method::Cklpe),
            "MC" => Ok(Method::Mc),
            other => Err(Error::invalid(format!("unknown method `{other}`"))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One (method, M, n, replication) experiment outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub method: Method,
    pub m: usize,
    pub n: usize,
    pub replication: usize,
    pub sigma_c: f64,
    pub m_sigma_c_sq: f64,
    pub regret: f64,
    pub selected_index: usize,
    /// Stream id that drove this replication's sampling.
    pub seed: u64,
}

/// Clusters `set` into `m` groups by Hellinger k-means and builds the
/// per-cluster barycenter design.
pub fn design_for(set: &PolicySet, m: usize, rng: RngState) -> Result<ClusteredDesign> {
    let points = sqrt_embed(set);
    let assignment = kmeans(&points, m, KMEANS_MAX_ITER, rng)?;
    cluster_barycenters(set, &assignment)
}

/// Runs one evaluation under an existing design: allocates `n` samples
/// evenly over the clusters, draws each cluster's data under its barycenter
/// (cluster `j` uses the substream `rng.derive(&[j]))`, estimates every
/// target policy, selects, and scores the exact regret.
pub fn run_with_design(
    model: &BanditModel,
    set: &PolicySet,
    design: &ClusteredDesign,
    n: usize,
    rng: RngState,
) -> Result<RunRecord> {
    let m = design.num_clusters();
    let counts = allocate_samples(n, m)?;
    let mut per_cluster = Vec::with_capacity(m);
    for (j, &count) in counts.iter().enumerate() {
        per_cluster.push(model.draw(design.barycenter(j), count, rng.derive(&[j as u64]))?);
    }
    let data = Dataset::new(per_cluster);
    debug_assert_eq!(data.total(), n);
    let table = clustered_estimates(set, design, &data)?;
    let selection = select_best(&table)?;
    let run_regret = regret(model, set, selection.selected_index)?;
    Ok(RunRecord {
        method: Method::for_cluster_count(m, set.len()),
        m,
        n,
        replication: 0,
        sigma_c: design.sigma_c(),
        m_sigma_c_sq: design.m_sigma_c_sq(),
        regret: run_regret,
        selected_index: selection.selected_index,
        seed: rng.stream_id,
    })
}

/// Full single-run pipeline: cluster into `m` groups, build barycenters,
/// sample, estimate, select and score. Clustering and sampling use disjoint
/// substreams of `rng`.
pub fn run_single(
    model: &BanditModel,
    set: &PolicySet,
    m: usize,
    n: usize,
    rng: RngState,
) -> Result<RunRecord> {
    if m == 0 || m > set.len() {
        return Err(Error::invalid(format!(
            "cluster count {m} outside 1..={}",
            set.len()
        )));
    }
    if n < m {
        return Err(Error::invalid(format!(
            "sample size {n} is below the cluster count {m}"
        )));
    }
    let design = design_for(set, m, rng.derive(&[TAG_CLUSTER]))?;
    run_with_design(model, set, &design, n, rng.derive(&[TAG_DRAW]))
}

/// Stream used by [`run_single`] for its sampling phase; exposed so callers
/// can reproduce a run against the matching direct estimation path.
pub fn run_single_draw_stream(rng: RngState) -> RngState {
    rng.derive(&[TAG_DRAW])
}

/// Runs the full cross-product `cluster_counts x sample_sizes x
/// replications` on one shared testbed.
///
/// The testbed is generated once per master seed; each cluster count gets
/// one clustering design; replication `r` of cell `(m, n)` samples under the
/// stream derived from `(master_seed, m, n, r)`, so results do not depend on
/// sweep ordering and replications can run in parallel. Cells where the
/// total sample size cannot cover the clusters (`n < m`, which the Monte
/// Carlo baseline `m = N` hits first) are skipped. Records are sorted by
/// (method, m, n, replication) before being returned.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let root = RngState::new(cfg.master_seed, 0);
    let (model, set) = generate_testbed(cfg, testbed_stream(cfg.master_seed))?;

    let mut records = Vec::new();
    for &m in &cfg.cluster_counts {
        let design = design_for(&set, m, cluster_stream(cfg.master_seed, m))?;
        for &n in &cfg.sample_sizes {
            if n < m {
                continue;
            }
            let cell: Vec<RunRecord> = (0..cfg.replications)
                .into_par_iter()
                .map(|r| {
                    let rng = root.derive(&[TAG_DRAW, m as u64, n as u64, r as u64]);
                    run_with_design(&model, &set, &design, n, rng).map(|rec| RunRecord {
                        replication: r,
                        ..rec
                    })
                })
                .collect::<Result<_>>()?;
            records.extend(cell);
        }
    }
    records.sort_by(|a, b| {
        (a.method, a.m, a.n, a.replication).cmp(&(b.method, b.m, b.n, b.replication))
    });
    Ok(records)
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes records as CSV with the fixed header
/// `method,m,n,replication,sigma_c,m_sigma_c_sq,regret,selected_index,seed`;
/// reals carry 17 significant digits and every row is newline-terminated.
pub fn write_csv<W: Write>(records: &[RunRecord], w: &mut W) -> std::io::Result<()> {
    writeln!(
        w,
        "method,m,n,replication,sigma_c,m_sigma_c_sq,regret,selected_index,seed"
    )?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.method,
            r.m,
            r.n,
            r.replication,
            fmt17(r.sigma_c),
            fmt17(r.m_sigma_c_sq),
            fmt17(r.regret),
            r.selected_index,
            r.seed
        )?;
    }
    Ok(())
}

/// Writes records to a CSV file at `path`.
pub fn emit_csv(records: &[RunRecord], path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io_err)?;
    let mut writer = std::io::BufWriter::new(file);
    write_csv(records, &mut writer).map_err(io_err)?;
    writer.flush().map_err(io_err)
}

/// Parses CSV produced by [`write_csv`]; fields round-trip exactly.
pub fn parse_csv(source: &str) -> Result<Vec<RunRecord>> {
    let mut lines = source.lines();
    let header = lines.next().ok_or_else(|| Error::invalid("empty csv"))?;
    if header != "method,m,n,replication,sigma_c,m_sigma_c_sq,regret,selected_index,seed" {
        return Err(Error::invalid(format!("unexpected csv header `{header}`")));
    }
    let mut records = Vec::new();
    for (line_no, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(Error::invalid(format!(
                "csv line {}: expected 9 fields, got {}",
                line_no + 2,
                fields.len()
            )));
        }
        let bad = |what: &str| Error::invalid(format!("csv line {}: bad {what}", line_no + 2));
        records.push(RunRecord {
            method: Method::parse(fields[0])?,
            m: fields[1].parse().map_err(|_| bad("m"))?,
            n: fields[2].parse().map_err(|_| bad("n"))?,
            replication: fields[3].parse().map_err(|_| bad("replication"))?,
            sigma_c: fields[4].parse().map_err(|_| bad("sigma_c"))?,
            m_sigma_c_sq: fields[5].parse().map_err(|_| bad("m_sigma_c_sq"))?,
            regret: fields[6].parse().map_err(|_| bad("regret"))?,
            selected_index: fields[7].parse().map_err(|_| bad("selected_index"))?,
            seed: fields[8].parse().map_err(|_| bad("seed"))?,
        });
    }
    Ok(records)
}

/// Percentile bootstrap confidence interval for the mean of `values` at the
/// given confidence level (e.g. 0.95).
pub fn bootstrap_mean_ci(
    values: &[f64],
    resamples: usize,
    confidence: f64,
    rng: RngState,
) -> (f64, f64) {
    assert!(!values.is_empty() && resamples > 0);
    assert!(confidence > 0.0 && confidence < 1.0);
    let mut rng = rng.rng();
    let n = values.len();
    let mut means = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let mut sum = 0.0;
        for _ in 0..n {
            sum += values[rng.random_range(0..n)];
        }
        means.push(sum / n as f64);
    }
    means.sort_by(|a, b| a.partial_cmp(b).expect("bootstrap means are finite"));
    let tail = (1.0 - confidence) / 2.0;
    let lo = ((resamples as f64 * tail) as usize).min(resamples - 1);
    let hi = ((resamples as f64 * (1.0 - tail)) as usize).min(resamples - 1);
    (means[lo], means[hi])
}
