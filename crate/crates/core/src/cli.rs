//! Command-line front end. The `skewchain` binary is a thin wrapper around
//! [`run`], which keeps every subcommand testable in-process.
//!
//! Exit codes: 0 success, 1 a verified property failed (`verify`, `example`,
//! `invariance` only), 2 bad input or configuration, 3 numerical failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::chain::{
    default_search, kraus_invariance_check, mixed_bound, optimize_permutations, sum_chain, verify_frames, BoundChain,
    FrameSet, SReading, SearchStrategy, VerifyOptions,
};
use crate::error::Error;
use crate::example::{
    default_figures, discrepancy_report, example_channels, format_sig12, rho_theta, sweep, Grid, GridOverrides,
    SweepRow,
};
use crate::io::{read_channel, read_state, write_atomic};
use crate::matrix::DEFAULT_TOL;
use crate::quantum::{random_channel, random_density, Convention, DensityMatrix, KrausChannel, RandomSeed};

#[derive(Debug, Parser)]
#[command(name = "skewchain", version, about = "Skew-information uncertainty bounds for pairs of quantum channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute every bound for one state and channel pair.
    Bounds(BoundsArgs),
    /// Check all inequalities on seeded random instances.
    Verify(VerifyArgs),
    /// Regenerate the worked-example tables and the closed-form comparison.
    Example(ExampleArgs),
    /// Measure how much the bounds move under random Kraus remixing.
    Invariance(InvarianceArgs),
    /// Write the bound chains of seeded random instances as CSV.
    RandomSuite(RandomSuiteArgs),
}

/// State and channel files. With none given, the worked example at
/// `θ = 1`, `p = q = ½` is used.
#[derive(Debug, Args)]
pub struct InputArgs {
    /// State JSON file.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// First channel JSON file.
    #[arg(long)]
    pub channel1: Option<PathBuf>,
    /// Second channel JSON file.
    #[arg(long)]
    pub channel2: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Relabelling search strategy; defaults to exhaustive up to d = 5.
    #[arg(long)]
    pub perm: Option<SearchStrategy>,
    /// Candidate budget of the relabelling search.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Lattice position `p,q` the search maximises.
    #[arg(long, value_delimiter = ',', default_value = "2,1")]
    pub pq: Vec<usize>,
}

/// Strategy with its budget, and the lattice target.
type SearchPlan = ((SearchStrategy, u64), (usize, usize));

impl SearchArgs {
    fn resolve(&self, dim: usize) -> Result<SearchPlan, CliError> {
        let strategy = self.perm.unwrap_or(default_search(dim).0);
        let budget = self.budget.unwrap_or(match strategy {
            SearchStrategy::Exhaustive => 14_400,
            SearchStrategy::Sampled => 10_000,
        });
        match self.pq.as_slice() {
            &[p, q] => Ok(((strategy, budget), (p, q))),
            other => Err(CliError::Config(format!("--pq expects two integers, got {other:?}"))),
        }
    }
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Key-value report path; a CSV row is written next to it with `.csv` appended.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Tolerance of the inequality checks.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Seed of the sampled relabelling search.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// S-lattice reading: pair-resolved, as-printed or product.
    #[arg(long, default_value = "pair-resolved")]
    pub s_reading: SReading,
    /// Mixing weights for the mixed bounds.
    #[arg(long, default_value = "0:1:5")]
    pub t: Grid,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Matrix dimensions to sample.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    pub dims: Vec<usize>,
    /// Instances per dimension.
    #[arg(long, default_value_t = 200)]
    pub instances: usize,
    /// Master seed; every instance seed is drawn from it.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Tolerance of the inequality checks.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// S-lattice reading used for the hard checks.
    #[arg(long, default_value = "pair-resolved")]
    pub s_reading: SReading,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Verdict file; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    /// Output directory for the CSV tables.
    #[arg(long, default_value = "example_out")]
    pub out: PathBuf,
    /// θ grid, `start:stop:count` or a single value.
    #[arg(long)]
    pub theta: Option<Grid>,
    /// p grid, `start:stop:count` or a single value.
    #[arg(long)]
    pub p: Option<Grid>,
    /// q grid, `start:stop:count` or a single value.
    #[arg(long)]
    pub q: Option<Grid>,
    /// Mixing weight grid, `start:stop:count` or a single value.
    #[arg(long)]
    pub t: Option<Grid>,
    /// S-lattice reading for the S columns.
    #[arg(long, default_value = "pair-resolved")]
    pub s_reading: SReading,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Seed of the sampled relabelling search.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct InvarianceArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Number of random remixing pairs.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Allowed absolute deviation; zero is accepted.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Seed of the mixing unitaries.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report path; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RandomSuiteArgs {
    /// Matrix dimensions to sample.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    pub dims: Vec<usize>,
    /// Instances per dimension.
    #[arg(long, default_value_t = 20)]
    pub instances: usize,
    /// Master seed; every instance seed is drawn from it.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// S-lattice reading for the S columns.
    #[arg(long, default_value = "pair-resolved")]
    pub s_reading: SReading,
    /// Output CSV path.
    #[arg(long, default_value = "random_suite.csv")]
    pub out: PathBuf,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ConvergenceFailure | Error::NotUnitary(_) => CliError::Numerical(e),
            other => CliError::Input(other),
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(passed) => i32::from(!passed),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs one subcommand. `Ok(false)` means a checked property failed.
pub fn execute(command: &Command) -> Result<bool, CliError> {
    match command {
        Command::Bounds(a) => cmd_bounds(a).map(|()| true),
        Command::Verify(a) => cmd_verify(a),
        Command::Example(a) => cmd_example(a),
        Command::Invariance(a) => cmd_invariance(a),
        Command::RandomSuite(a) => cmd_random_suite(a).map(|()| true),
    }
}

fn check_tol(tol: f64, allow_zero: bool) -> Result<(), CliError> {
    if tol.is_nan() || tol < 0.0 || (!allow_zero && tol == 0.0) {
        return Err(CliError::Config(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

fn load_inputs(input: &InputArgs, tol: f64) -> Result<(DensityMatrix, KrausChannel, KrausChannel, String), CliError> {
    match (&input.state, &input.channel1, &input.channel2) {
        (None, None, None) => {
            let (n1, n2) = example_channels(0.5, 0.5)?;
            Ok((rho_theta(1.0)?, n1, n2, "worked-example theta=1 p=0.5 q=0.5".to_owned()))
        }
        (Some(s), Some(c1), Some(c2)) => {
            let state = read_state(s, tol)?;
            let n1 = read_channel(c1, tol)?;
            let n2 = read_channel(c2, tol)?;
            Ok((state, n1, n2, s.display().to_string()))
        }
        _ => Err(CliError::Config("--state, --channel1 and --channel2 must be given together".to_owned())),
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes()).map_err(CliError::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn kv(out: &mut String, key: impl std::fmt::Display, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key}={value}");
}

fn kv_num(out: &mut String, key: impl std::fmt::Display, value: f64) {
    kv(out, key, format_sig12(value));
}

fn cmd_bounds(a: &BoundsArgs) -> Result<(), CliError> {
    check_tol(a.tol, false)?;
    let (state, n1, n2, source) = load_inputs(&a.input, a.tol)?;
    let frames = FrameSet::new(&state, &n1, &n2)?;
    let chain = BoundChain::from_frames(&frames, a.s_reading);
    let d = chain.dim;

    let mut r = String::new();
    kv(&mut r, "source", &source);
    kv(&mut r, "dim", d);
    kv(&mut r, "n_kraus_1", n1.len());
    kv(&mut r, "n_kraus_2", n2.len());
    kv(&mut r, "s_reading", a.s_reading);
    kv_num(&mut r, "skew_1", chain.skew_first);
    kv_num(&mut r, "skew_2", chain.skew_second);
    kv_num(&mut r, "product", chain.product);
    kv_num(&mut r, "sum", chain.sum);
    for (m, v) in chain.i_values.iter().enumerate() {
        kv_num(&mut r, format!("I{}", m + 1), *v);
    }
    kv_num(&mut r, "S_1_0", chain.s_values.s10);
    for e in &chain.s_values.entries {
        kv_num(&mut r, format!("S_{}_{}", e.p, e.q), e.value);
    }
    kv_num(&mut r, "lemma1", chain.lemma1);
    let sums = sum_chain(&chain);
    for (m, v) in sums.iter().take(d).enumerate() {
        kv_num(&mut r, format!("sum_bound_I{}", m + 1), *v);
    }

    let mut csv_header = vec!["dim", "product", "sum", "lemma1"].into_iter().map(String::from).collect::<Vec<_>>();
    let mut csv_row =
        vec![d.to_string(), format_sig12(chain.product), format_sig12(chain.sum), format_sig12(chain.lemma1)];
    for (m, v) in chain.i_values.iter().enumerate() {
        csv_header.push(format!("I{}", m + 1));
        csv_row.push(format_sig12(*v));
    }
    for e in &chain.s_values.entries {
        csv_header.push(format!("S{}_{}", e.p, e.q));
        csv_row.push(format_sig12(e.value));
    }

    let mut verdict_passed = true;
    if d >= 2 {
        let (search, (p, q)) = a.search.resolve(d)?;
        let best = optimize_permutations(&frames, p, q, search.0, search.1, RandomSeed(a.seed), a.s_reading)?;
        kv(&mut r, "perm_target", format!("{p},{q}"));
        kv(&mut r, "perm_strategy", best.strategy);
        kv(&mut r, "perm_evaluations", best.evaluations);
        kv(&mut r, "perm_sigma", &best.sigma);
        kv(&mut r, "perm_tau", &best.tau);
        kv_num(&mut r, "perm_identity", best.identity_value);
        kv_num(&mut r, "perm_opt", best.value);
        csv_header.push("perm_opt".into());
        csv_row.push(format_sig12(best.value));
        let ts = a.t.values();
        for &t in &ts {
            let m = mixed_bound(&chain, &best, t)?;
            kv_num(&mut r, format!("mixed_product[t={}]", format_sig12(t)), m.product);
            kv_num(&mut r, format!("mixed_sum[t={}]", format_sig12(t)), m.sum);
        }
        let opts = VerifyOptions {
            tol: a.tol,
            target: (p, q),
            search: Some(search),
            seed: RandomSeed(a.seed),
            t_grid: ts,
            reading: a.s_reading,
        };
        let verdict = verify_frames(&frames, &opts)?;
        verdict_passed = verdict.passed();
        kv(&mut r, "verdict_hard_failures", verdict.hard_failures().count());
        kv(&mut r, "verdict_soft_failures", verdict.soft_failures().count());
        for c in verdict.hard_failures() {
            kv(&mut r, format!("hard_failure.{}", c.name), &c.detail);
        }
    }
    kv(&mut r, "verdict_passed", verdict_passed);

    write_or_print(a.out.as_deref(), &r)?;
    if let Some(out) = &a.out {
        let mut path = out.as_os_str().to_owned();
        path.push(".csv");
        let csv = format!("{}\n{}\n", csv_header.join(","), csv_row.join(","));
        write_atomic(Path::new(&path), csv.as_bytes())?;
    }
    Ok(())
}

/// Seeds and sizes of one random instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InstancePlan {
    pub dim: usize,
    pub index: usize,
    pub rank: usize,
    pub n1: usize,
    pub n2: usize,
    pub state_seed: u64,
    pub channel1_seed: u64,
    pub channel2_seed: u64,
    pub mixing_seed: u64,
}

impl InstancePlan {
    pub fn build(&self) -> Result<(DensityMatrix, KrausChannel, KrausChannel), Error> {
        Ok((
            random_density(self.dim, self.rank, RandomSeed(self.state_seed))?,
            random_channel(self.dim, self.n1, Convention::ColumnSum, RandomSeed(self.channel1_seed))?,
            random_channel(self.dim, self.n2, Convention::ColumnSum, RandomSeed(self.channel2_seed))?,
        ))
    }
}

/// Draws `instances` plans per dimension from one master stream: rank
/// uniform in `1..=d`, Kraus counts uniform in `1..=min(4, d²)`.
pub fn plan_instances(dims: &[usize], instances: usize, seed: u64) -> Vec<InstancePlan> {
    let mut rng = RandomSeed(seed).rng();
    let mut plans = Vec::with_capacity(dims.len() * instances);
    for &dim in dims {
        let max_kraus = (dim * dim).min(4);
        for index in 0..instances {
            plans.push(InstancePlan {
                dim,
                index,
                rank: 1 + rng.below(dim),
                n1: 1 + rng.below(max_kraus),
                n2: 1 + rng.below(max_kraus),
                state_seed: rng.next_u64(),
                channel1_seed: rng.next_u64(),
                channel2_seed: rng.next_u64(),
                mixing_seed: rng.next_u64(),
            });
        }
    }
    plans
}

fn check_dims(dims: &[usize], instances: usize) -> Result<(), CliError> {
    if instances == 0 {
        return Err(CliError::Config("--instances must be at least 1".to_owned()));
    }
    if dims.is_empty() || dims.contains(&0) {
        return Err(CliError::Config(format!("--dims must list positive dimensions, got {dims:?}")));
    }
    Ok(())
}

#[derive(Default)]
struct CheckStats {
    hard: bool,
    pass: usize,
    fail: usize,
    max_dev: f64,
}

fn cmd_verify(a: &VerifyArgs) -> Result<bool, CliError> {
    check_dims(&a.dims, a.instances)?;
    check_tol(a.tol, false)?;
    let plans = plan_instances(&a.dims, a.instances, a.seed);

    let results: Vec<Result<_, CliError>> = plans
        .par_iter()
        .map(|plan| {
            let (state, n1, n2) = plan.build()?;
            let frames = FrameSet::new(&state, &n1, &n2)?;
            let (search, target) = a.search.resolve(plan.dim)?;
            let opts = VerifyOptions {
                tol: a.tol,
                target,
                search: Some(search),
                seed: RandomSeed(plan.mixing_seed),
                reading: a.s_reading,
                ..VerifyOptions::default()
            };
            let verdict = verify_frames(&frames, &opts)?;
            let invariance = kraus_invariance_check(&state, &n1, &n2, 1, RandomSeed(plan.mixing_seed), a.tol)?;
            Ok((verdict, invariance))
        })
        .collect();

    let mut stats: BTreeMap<String, CheckStats> = BTreeMap::new();
    let mut anchors: BTreeMap<String, f64> = BTreeMap::new();
    let mut invariance_dev: BTreeMap<String, f64> = BTreeMap::new();
    let mut hard_failures = 0usize;
    let mut first_failures: Vec<String> = Vec::new();

    for (plan, res) in plans.iter().zip(results) {
        let (verdict, invariance) = res?;
        for c in &verdict.checks {
            let s = stats.entry(c.name.clone()).or_default();
            s.hard = c.hard;
            s.max_dev = s.max_dev.max(c.deviation);
            if c.passed {
                s.pass += 1;
            } else {
                s.fail += 1;
                if c.hard {
                    hard_failures += 1;
                    if first_failures.len() < 10 {
                        first_failures.push(format!("d={} instance={} {} {}", plan.dim, plan.index, c.name, c.detail));
                    }
                }
            }
            if let Some(reading) = c.name.strip_prefix("S_anchor_").and_then(|r| r.split_once('[')) {
                let reading = reading.1.trim_end_matches(']');
                let key = match (reading, c.detail.as_str()) {
                    (_, "S2,1=I2") => Some("S21_I2"),
                    (_, "S3,2=I3") => Some("S32_I3"),
                    _ if c.name.starts_with("S_anchor_lemma1") => Some("Sdd1_lemma1"),
                    _ => None,
                };
                if let Some(key) = key {
                    let slot = anchors.entry(format!("{reading}.{key}")).or_insert(0.0);
                    *slot = slot.max(c.deviation);
                }
            }
        }
        let s = stats.entry("mixing_invariance".to_owned()).or_default();
        s.hard = true;
        s.max_dev = s.max_dev.max(invariance.max_deviation());
        if invariance.passed() {
            s.pass += 1;
        } else {
            s.fail += 1;
            hard_failures += 1;
            if first_failures.len() < 10 {
                first_failures.push(format!("d={} instance={} mixing_invariance", plan.dim, plan.index));
            }
        }
        for (name, dev) in &invariance.deviations {
            let slot = invariance_dev.entry(name.clone()).or_insert(0.0);
            *slot = slot.max(*dev);
        }
    }

    let passed = hard_failures == 0;
    let mut r = String::new();
    kv(&mut r, "command", "verify");
    kv(&mut r, "dims", a.dims.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
    kv(&mut r, "instances_per_dim", a.instances);
    kv(&mut r, "seed", a.seed);
    kv(&mut r, "tol", format_sig12(a.tol));
    kv(&mut r, "s_reading", a.s_reading);
    kv(&mut r, "total_instances", plans.len());
    kv(&mut r, "hard_failures", hard_failures);
    kv(&mut r, "passed", passed);
    for (name, s) in &stats {
        kv(&mut r, format!("check.{name}.hard"), s.hard);
        kv(&mut r, format!("check.{name}.pass"), s.pass);
        kv(&mut r, format!("check.{name}.fail"), s.fail);
        kv_num(&mut r, format!("check.{name}.max_dev"), s.max_dev);
    }
    for (name, dev) in &anchors {
        kv_num(&mut r, format!("anchor.{name}.max_dev"), *dev);
    }
    for (name, dev) in &invariance_dev {
        kv_num(&mut r, format!("invariance.{name}.max_dev"), *dev);
    }
    for (k, f) in first_failures.iter().enumerate() {
        kv(&mut r, format!("failure.{k}"), f);
    }
    write_or_print(a.out.as_deref(), &r)?;
    if !passed {
        eprintln!("verify: {hard_failures} hard check failures");
    }
    Ok(passed)
}

fn cmd_example(a: &ExampleArgs) -> Result<bool, CliError> {
    let overrides = GridOverrides { theta: a.theta, p: a.p, q: a.q, t: a.t };
    let figures = default_figures(&overrides);
    for f in &figures {
        f.spec.validate()?;
    }
    let (search, target) = a.search.resolve(4)?;
    std::fs::create_dir_all(&a.out).map_err(Error::from)?;

    let mut clean = true;
    let mut report_rows: Vec<SweepRow> = Vec::new();
    for mut fig in figures {
        fig.spec.reading = a.s_reading;
        fig.spec.search = search;
        fig.spec.target = target;
        fig.spec.seed = RandomSeed(a.seed);
        let table = sweep(&fig.spec)?;
        for (row, v) in table.violations() {
            clean = false;
            eprintln!(
                "{}: theta={} p={} q={} t={}: {v}",
                fig.name, row.params.theta, row.params.p, row.params.q, row.params.t
            );
        }
        write_atomic(&a.out.join(format!("{}.csv", fig.name)), table.to_csv().as_bytes())?;
        if fig.name != "figure2" && fig.name != "figure4" {
            report_rows.extend(table.rows);
        }
    }
    let report = discrepancy_report(&report_rows);
    write_atomic(&a.out.join("discrepancy_report.csv"), report.to_csv().as_bytes())?;
    write_atomic(&a.out.join("discrepancy_summary.csv"), report.summary_csv().as_bytes())?;
    Ok(clean)
}

fn cmd_invariance(a: &InvarianceArgs) -> Result<bool, CliError> {
    check_tol(a.tol, true)?;
    if a.trials == 0 {
        return Err(CliError::Config("--trials must be at least 1".to_owned()));
    }
    let (state, n1, n2, source) = load_inputs(&a.input, a.tol.max(DEFAULT_TOL))?;
    let report = kraus_invariance_check(&state, &n1, &n2, a.trials, RandomSeed(a.seed), a.tol)?;
    let mut r = String::new();
    kv(&mut r, "source", source);
    kv(&mut r, "trials", report.trials);
    kv(&mut r, "seed", a.seed);
    kv(&mut r, "tol", format_sig12(a.tol));
    for (name, dev) in &report.deviations {
        kv_num(&mut r, format!("max_dev.{name}"), *dev);
    }
    kv_num(&mut r, "max_deviation", report.max_deviation());
    kv(&mut r, "passed", report.passed());
    write_or_print(a.out.as_deref(), &r)?;
    Ok(report.passed())
}

fn cmd_random_suite(a: &RandomSuiteArgs) -> Result<(), CliError> {
    check_dims(&a.dims, a.instances)?;
    let plans = plan_instances(&a.dims, a.instances, a.seed);
    let dmax = *a.dims.iter().max().expect("non-empty");
    let rows: Vec<Result<String, CliError>> = plans
        .par_iter()
        .map(|plan| {
            let (state, n1, n2) = plan.build()?;
            let frames = FrameSet::new(&state, &n1, &n2)?;
            let chain = BoundChain::from_frames(&frames, a.s_reading);
            let perm = if plan.dim >= 2 {
                let (strategy, budget) = default_search(plan.dim);
                let best =
                    optimize_permutations(&frames, 2, 1, strategy, budget, RandomSeed(plan.mixing_seed), a.s_reading)?;
                format_sig12(best.value)
            } else {
                String::new()
            };
            let mut fields = vec![
                plan.dim.to_string(),
                plan.index.to_string(),
                plan.rank.to_string(),
                plan.n1.to_string(),
                plan.n2.to_string(),
                format_sig12(chain.product),
                format_sig12(chain.sum),
                format_sig12(chain.lemma1),
                perm,
            ];
            for m in 0..dmax {
                fields.push(chain.i_values.get(m).map(|v| format_sig12(*v)).unwrap_or_default());
            }
            for (p, q) in [(2, 1), (3, 1), (3, 2)] {
                fields.push(chain.s_values.get(p, q).filter(|_| p <= plan.dim).map(format_sig12).unwrap_or_default());
            }
            Ok(fields.join(","))
        })
        .collect();
    let mut header: Vec<String> =
        ["dim", "instance", "rank", "n1", "n2", "product", "sum", "lemma1", "perm_opt"].map(String::from).to_vec();
    header.extend((1..=dmax).map(|m| format!("I{m}")));
    header.extend(["S21", "S31", "S32"].map(String::from));
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row?);
        out.push('\n');
    }
    write_atomic(&a.out, out.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plans_are_deterministic_and_in_range() {
        let a = plan_instances(&[2, 3], 5, 7);
        assert_eq!(a, plan_instances(&[2, 3], 5, 7));
        assert_eq!(a.len(), 10);
        for p in &a {
            assert!((1..=p.dim).contains(&p.rank));
            assert!((1..=4).contains(&p.n1) && (1..=4).contains(&p.n2));
        }
    }

    #[test]
    fn cli_parses_flags() {
        let cli =
            Cli::try_parse_from(["skewchain", "verify", "--dims", "2,4", "--instances", "3", "--s-reading", "product"])
                .unwrap();
        match cli.command {
            Command::Verify(v) => {
                assert_eq!(v.dims, vec![2, 4]);
                assert_eq!(v.s_reading, SReading::ProductReading);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(Cli::try_parse_from(["skewchain", "example", "--theta", "0:1"]).is_err());
    }
}
