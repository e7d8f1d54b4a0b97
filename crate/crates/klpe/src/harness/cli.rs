//! Command-line front end over the library.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on runtime errors.

use crate::bounds::{
    expected_regret_bound, lower_bound_model, lower_bound_prob, sample_size_cluster_gate,
    sample_size_ckl, sample_size_klpe, sigma_bound_from_eta, sigma_safe_bound,
    sigma_safe_bound_sqrt_eta, BoundInputs,
};
use crate::error::Error;
use crate::estimator::{is_estimate, select_best, EstimateTable};
use crate::harness::config::ExperimentConfig;
use crate::harness::sweep::{
    cluster_stream, design_for, emit_csv, run_single, run_sweep, testbed_stream,
};
use crate::harness::testbed::{generate_testbed, write_testbed_file};
use crate::rng::RngState;
use clap::error::ErrorKind;
use clap::{ArgGroup, Args, Parser, Subcommand};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "klpe",
    version,
    about = "Behavior policy design for bandit best-policy selection via KL-barycenters"
)]
struct Cli {
    /// Experiment config file (flat `key = value`); defaults to the
    /// benchmark recipe when omitted
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override the config's master seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override whether group extra weights are shared (one draw per group
    /// and preferred arm) or drawn per policy
    #[arg(long, global = true, value_name = "BOOL")]
    shared_group_weight: Option<bool>,
    /// Output file
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate the configured testbed and write it to --out
    Gen,
    /// Cluster the testbed at each configured M and print per-cluster stats
    Cluster,
    /// Run one evaluation and print the selection and its regret
    Eval(EvalArgs),
    /// Run the full sweep and write records as CSV to --out
    Sweep,
    /// Evaluate a closed-form bound chosen by flag
    Bounds(BoundsArgs),
    /// Replicate selection on the two-arm lower-bound instance and compare
    /// the empirical misselection rate with the closed form
    Lowerbound(LowerboundArgs),
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Cluster count (default: first configured value)
    #[arg(long)]
    m: Option<usize>,
    /// Total sample size (default: first configured value)
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args, Debug)]
#[command(group(
    ArgGroup::new("which")
        .required(true)
        .args(["prop1", "prop3", "safe", "safe_sqrt_eta", "prop4", "thm1", "cor1"])
))]
struct BoundsArgs {
    /// Sample size for selection against a single barycenter
    #[arg(long)]
    prop1: bool,
    /// Weight cap from the KL proximity eta (needs --min-bary)
    #[arg(long)]
    prop3: bool,
    /// Weight cap against the defensive mixture
    #[arg(long)]
    safe: bool,
    /// Defensive-mixture weight cap at lambda = sqrt(eta)
    #[arg(long)]
    safe_sqrt_eta: bool,
    /// Sample size for the best-cluster gate
    #[arg(long)]
    prop4: bool,
    /// Sample size for clustered selection
    #[arg(long)]
    thm1: bool,
    /// Expected-regret bound (needs --delta-max and --n)
    #[arg(long)]
    cor1: bool,

    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 1.0)]
    rstar: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 1)]
    n_targets: usize,
    #[arg(long, default_value_t = 1)]
    n_clusters: usize,
    #[arg(long, default_value_t = 1)]
    n1: usize,
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    /// Cluster value gap (defaults to unconstrained)
    #[arg(long)]
    gap: Option<f64>,
    #[arg(long, default_value_t = 1)]
    k_arms: usize,
    /// Smallest barycenter entry, for --prop3
    #[arg(long)]
    min_bary: Option<f64>,
    /// Largest cluster value gap, for --cor1
    #[arg(long)]
    delta_max: Option<f64>,
    /// Total sample size, for --cor1
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Args, Debug)]
struct LowerboundArgs {
    /// Number of target policies N (>= 3)
    #[arg(long, default_value_t = 10)]
    n_policies: usize,
    /// Reward of the better arm
    #[arg(long, default_value_t = 1.0)]
    r1: f64,
    /// Samples per replication
    #[arg(long, default_value_t = 32)]
    n: usize,
    /// Number of replications
    #[arg(long, default_value_t = 20_000)]
    reps: usize,
}

enum CliError {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Runtime(e)
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// to the given streams. Returns the process exit status.
pub fn run_cli<I, T, O, E>(args: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let _ = write!(err, "{e}");
            return 1;
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "usage error: {msg}");
            1
        }
        Err(CliError::Runtime(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// [`run_cli`] wired to the process's stdout and stderr.
pub fn cli_dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli(args, &mut stdout.lock(), &mut stderr.lock())
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    if let Some(shared) = cli.shared_group_weight {
        cfg.shared_group_weight = shared;
    }
    Ok(cfg)
}

fn require_out(cli: &Cli, what: &str) -> Result<PathBuf, CliError> {
    cli.out
        .clone()
        .ok_or_else(|| CliError::Usage(format!("{what} needs --out <PATH>")))
}

fn run<O: Write>(cli: Cli, out: &mut O) -> Result<(), CliError> {
    let emit = |_: std::io::Error| CliError::Usage("failed to write output".into());
    match &cli.command {
        Command::Gen => {
            let cfg = load_config(&cli)?;
            let path = require_out(&cli, "gen")?;
            let (model, set) = generate_testbed(&cfg, testbed_stream(cfg.master_seed))?;
            write_testbed_file(&model, &set, &path)?;
            writeln!(
                out,
                "wrote testbed ({} arms, {} policies) to {}",
                model.num_arms(),
                set.len(),
                path.display()
            )
            .map_err(emit)?;
        }
        Command::Cluster => {
            let cfg = load_config(&cli)?;
            let (_, set) = generate_testbed(&cfg, testbed_stream(cfg.master_seed))?;
            let bary = set.kl_barycenter()?;
            let sigma_kl = set.max_importance_weight(&bary);
            writeln!(out, "sigma_kl = {sigma_kl} (sigma_kl^2 = {})", sigma_kl * sigma_kl)
                .map_err(emit)?;
            for &m in &cfg.cluster_counts {
                let design = design_for(&set, m, cluster_stream(cfg.master_seed, m))?;
                let sizes = design.assignment().cluster_sizes();
                writeln!(
                    out,
                    "M={m}: sigma_c = {} M_sigma_c_sq = {} improvement = {}",
                    design.sigma_c(),
                    design.m_sigma_c_sq(),
                    design.improvement_holds(sigma_kl)
                )
                .map_err(emit)?;
                for (j, (&size, &sigma)) in
                    sizes.iter().zip(design.sigma_per_cluster()).enumerate()
                {
                    writeln!(out, "  cluster {j}: size = {size} sigma = {sigma}")
                        .map_err(emit)?;
                }
            }
        }
        Command::Eval(args) => {
            let cfg = load_config(&cli)?;
            let m = args.m.unwrap_or(cfg.cluster_counts[0]);
            let n = args.n.unwrap_or(cfg.sample_sizes[0]);
            let (model, set) = generate_testbed(&cfg, testbed_stream(cfg.master_seed))?;
            let record = run_single(&model, &set, m, n, RngState::new(cfg.master_seed, 0))?;
            writeln!(
                out,
                "method = {} m = {} n = {}\nselected = {} regret = {}\nsigma_c = {} M_sigma_c_sq = {}",
                record.method,
                record.m,
                record.n,
                record.selected_index,
                record.regret,
                record.sigma_c,
                record.m_sigma_c_sq
            )
            .map_err(emit)?;
        }
        Command::Sweep => {
            let cfg = load_config(&cli)?;
            let path = require_out(&cli, "sweep")?;
            let records = run_sweep(&cfg)?;
            emit_csv(&records, &path)?;
            writeln!(out, "wrote {} records to {}", records.len(), path.display())
                .map_err(emit)?;
        }
        Command::Bounds(args) => {
            let value = eval_bound(args)?;
            writeln!(out, "{value}").map_err(emit)?;
        }
        Command::Lowerbound(args) => {
            run_lowerbound(args, cli.seed.unwrap_or(42), out).map_err(CliError::Runtime)?;
        }
    }
    Ok(())
}

enum BoundValue {
    Samples(u64),
    Real(f64),
}

impl std::fmt::Display for BoundValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundValue::Samples(n) => write!(f, "{n}"),
            BoundValue::Real(x) => write!(f, "{x}"),
        }
    }
}

fn eval_bound(args: &BoundsArgs) -> Result<BoundValue, CliError> {
    let inputs = BoundInputs {
        epsilon: args.epsilon,
        delta: args.delta,
        r_star: args.rstar,
        sigma: args.sigma,
        n_targets: args.n_targets,
        n_clusters: args.n_clusters,
        n1: args.n1,
        eta: args.eta,
        lambda: args.lambda,
        gap: args.gap.unwrap_or(f64::INFINITY),
        k_arms: args.k_arms,
    };
    if args.prop1 {
        Ok(BoundValue::Samples(sample_size_klpe(&inputs)?))
    } else if args.prop3 {
        let min_bary = args
            .min_bary
            .ok_or_else(|| CliError::Usage("--prop3 needs --min-bary".into()))?;
        Ok(BoundValue::Real(sigma_bound_from_eta(&inputs, min_bary)?))
    } else if args.safe {
        Ok(BoundValue::Real(sigma_safe_bound(&inputs)?))
    } else if args.safe_sqrt_eta {
        Ok(BoundValue::Real(sigma_safe_bound_sqrt_eta(&inputs)?))
    } else if args.prop4 {
        Ok(BoundValue::Samples(sample_size_cluster_gate(&inputs)?))
    } else if args.thm1 {
        Ok(BoundValue::Samples(sample_size_ckl(&inputs)?))
    } else if args.cor1 {
        let delta_max = args
            .delta_max
            .ok_or_else(|| CliError::Usage("--cor1 needs --delta-max".into()))?;
        let n = args
            .n
            .ok_or_else(|| CliError::Usage("--cor1 needs --n".into()))?;
        Ok(BoundValue::Real(expected_regret_bound(
            &inputs, delta_max, n,
        )?))
    } else {
        unreachable!("clap enforces exactly one bound flag")
    }
}

fn run_lowerbound<O: Write>(
    args: &LowerboundArgs,
    seed: u64,
    out: &mut O,
) -> Result<(), Error> {
    if args.reps == 0 || args.n == 0 {
        return Err(Error::invalid("reps and n must be positive"));
    }
    let inst = lower_bound_model(args.n_policies, args.r1)?;
    let bary = inst.policies.kl_barycenter()?;
    let root = RngState::new(seed, 0);
    let mut misselections = 0usize;
    for rep in 0..args.reps {
        let data = inst.model.draw(
            &bary,
            args.n,
            root.derive(&[0xC0, args.n as u64, rep as u64]),
        )?;
        let values: Vec<f64> = inst
            .policies
            .iter()
            .map(|p| is_estimate(p, &bary, &data))
            .collect::<Result<_, _>>()?;
        let cluster_of = vec![0; values.len()];
        let selection = select_best(&EstimateTable { values, cluster_of })?;
        if selection.selected_index != 0 {
            misselections += 1;
        }
    }
    let rate = misselections as f64 / args.reps as f64;
    let bound = lower_bound_prob(args.n as u64, inst.sigma_n);
    writeln!(
        out,
        "policies = {} sigma_n = {} gap = {} n = {} replications = {}",
        args.n_policies, inst.sigma_n, inst.gap, args.n, args.reps
    )
    .and_then(|()| writeln!(out, "empirical misselection rate: {rate}"))
    .and_then(|()| writeln!(out, "closed-form lower bound: {bound}"))
    .map_err(|source| Error::Io {
        path: "<stdout>".into(),
        source,
    })?;
    Ok(())
}
