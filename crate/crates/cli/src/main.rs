//! Experiment runner for hypergrid monotonicity testing.
//!
//! Subcommands bind the library's engines to named fixtures with seeded,
//! reproducible trials. Per-trial rows stream to the output as CSV or JSON
//! lines (flushed per row, so a crash leaves a prefix of the full run);
//! each run ends with a one-line JSON summary. The same config and seed
//! produce byte-identical output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use monogrid::exec::Exec;
use monogrid::fixtures::{self, Fixture, FixtureKind, FixtureSpec};
use monogrid::grid::{restrict, BoolFunction, GridDomain, GridRestriction};
use monogrid::linesample::{
    line_sampling_exhaustive, line_sampling_experiment, LineSampleReport, LineWeights,
};
use monogrid::matching::{distance_to_monotonicity, max_violation_matching, ViolationMatching};
use monogrid::reduction::{estimate_expected_distance, frac_to_f64, sample_restriction_continuous, ProductMeasure};
use monogrid::stacks::{lex_improve, line_decomposition, stack_bound_check, stack_profile, LineId};
use monogrid::tester::{
    levin_tester_continuous, levin_tester_grid, PairTester, TesterConfig, Verdict,
};
use monogrid::{trial_rng, Frac};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "monogrid", version, about = "Monotonicity testing experiments on hypergrids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact distance to monotonicity of a fixture.
    Distance(DistanceArgs),
    /// Random sub-grid reduction trials: distance of the restriction.
    Reduce(ReduceArgs),
    /// Stack profile of a maximum matching and the per-lambda mass bound.
    Stacks(StacksArgs),
    /// Line sampling experiment: expected matched mass under index sampling.
    Linesample(LinesampleArgs),
    /// Run the one-sided tester over many seeds and report reject frequency.
    Test(TestArgs),
    /// Centrist lower-bound experiment: how often small restrictions stay monotone.
    Lowerbound(LowerboundArgs),
    /// Variance of random 2-per-dimension restrictions.
    Variance(VarianceArgs),
    /// Run the acceptance suite.
    Accept(AcceptArgs),
}

#[derive(Args, Clone)]
struct FixtureArgs {
    /// Fixture name: anti_majority, figure_one, centrist_discrete,
    /// centrist_continuous, random_order_ideal, random_function, file.
    #[arg(long)]
    fixture: String,
    /// Side length (fixtures on [n]^d).
    #[arg(long)]
    n: Option<usize>,
    /// Dimension count.
    #[arg(long)]
    d: Option<usize>,
    /// Centrist band width multiplier (n = m * d).
    #[arg(long)]
    m: Option<usize>,
    /// Seed for randomized fixtures.
    #[arg(long)]
    fixture_seed: Option<u64>,
    /// Path for the `file` fixture (text table format).
    #[arg(long)]
    path: Option<PathBuf>,
}

impl FixtureArgs {
    fn spec(&self) -> anyhow::Result<FixtureSpec> {
        Ok(FixtureSpec {
            kind: FixtureKind::parse(&self.fixture)?,
            n: self.n,
            d: self.d,
            m: self.m,
            seed: self.fixture_seed,
            path: self.path.clone(),
        })
    }

    fn build(&self) -> anyhow::Result<Fixture> {
        Ok(self.spec()?.build()?)
    }

    fn build_grid(&self) -> anyhow::Result<BoolFunction> {
        match self.build()? {
            Fixture::Grid(f) => Ok(f),
            Fixture::Continuous { .. } => {
                bail!("fixture {:?} is continuous; this command needs a grid fixture", self.fixture)
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Write records here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record format for per-trial rows.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct DistanceArgs {
    #[command(flatten)]
    fixture: FixtureArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    fixture: FixtureArgs,
    /// Samples per dimension of each random restriction.
    #[arg(long, default_value_t = 8)]
    k: usize,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Use the identity restriction (every coordinate once) instead of
    /// sampling; yields the exact distance in a single trial.
    #[arg(long)]
    exhaustive: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct StacksArgs {
    #[command(flatten)]
    fixture: FixtureArgs,
    /// Which matching to profile: the engine's maximum matching, or the
    /// anti-majority reference matchings r / b.
    #[arg(long, default_value = "max")]
    matching: String,
    /// Skip the lexicographic balancing pass.
    #[arg(long)]
    raw: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct LinesampleArgs {
    #[command(flatten)]
    fixture: FixtureArgs,
    /// Line to sample, as comma-separated non-axis coordinates
    /// (default: the line with the largest sub-matching).
    #[arg(long)]
    line: Option<String>,
    #[arg(long, default_value_t = 4)]
    k: u64,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Enumerate all n^k samples exactly instead of Monte Carlo.
    #[arg(long)]
    exhaustive: bool,
    /// Skip the lexicographic balancing pass on the matching.
    #[arg(long)]
    raw: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TestArgs {
    #[command(flatten)]
    fixture: FixtureArgs,
    #[arg(long, default_value_t = 0.2)]
    epsilon: f64,
    /// Samples per dimension (default: the clamped `(2d/eps)^7` formula).
    #[arg(long)]
    k: Option<usize>,
    /// Inner tester behind the restriction loop.
    #[arg(long, value_enum, default_value_t = Inner::Pair)]
    inner: Inner,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    runs: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Inner {
    Pair,
}

#[derive(Args)]
struct LowerboundArgs {
    #[arg(long, default_value_t = 64)]
    d: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Also compute the exact distance of the discrete centrist with this
    /// band multiplier (n = m * d); requires a small domain.
    #[arg(long)]
    m: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VarianceArgs {
    /// Fixture name, or `all_functions` to sweep every function on [n]^d.
    #[arg(long)]
    fixture: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    fixture_seed: Option<u64>,
    #[arg(long)]
    path: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Trials for Monte Carlo mode.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    MonteCarlo,
}

#[derive(Args)]
struct AcceptArgs {
    /// Run only criteria whose name contains this substring.
    #[arg(long)]
    filter: Option<String>,
    /// Force the sequential execution path.
    #[arg(long)]
    sequential: bool,
}

/// Incremental record writer: every row is flushed as written, so partial
/// output is always a prefix of the full run's output.
struct Sink {
    out: Box<dyn Write>,
}

impl Sink {
    fn new(path: &Option<PathBuf>) -> anyhow::Result<Sink> {
        let out: Box<dyn Write> = match path {
            Some(p) => {
                Box::new(BufWriter::new(File::create(p).context("creating output file")?))
            }
            None => Box::new(std::io::stdout()),
        };
        Ok(Sink { out })
    }

    fn row(&mut self, line: &str) -> anyhow::Result<()> {
        writeln!(self.out, "{line}")?;
        self.out.flush()?;
        Ok(())
    }
}

fn frac_str(x: Frac) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn main() {
    let cli = Cli::parse();
    init_thread_pool();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            2
        }
    };
    std::process::exit(code);
}

/// Honors MONOGRID_THREADS when the parallel feature is enabled.
fn init_thread_pool() {
    if let Ok(v) = std::env::var("MONOGRID_THREADS") {
        if let Ok(threads) = v.parse::<usize>() {
            monogrid::exec::set_threads(threads);
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Distance(args) => cmd_distance(args),
        Command::Reduce(args) => cmd_reduce(args),
        Command::Stacks(args) => cmd_stacks(args),
        Command::Linesample(args) => cmd_linesample(args),
        Command::Test(args) => cmd_test(args),
        Command::Lowerbound(args) => cmd_lowerbound(args),
        Command::Variance(args) => cmd_variance(args),
        Command::Accept(args) => cmd_accept(args),
    }
}

fn cmd_distance(args: DistanceArgs) -> anyhow::Result<i32> {
    let f = args.fixture.build_grid()?;
    let dense = f.to_dense()?;
    let m = max_violation_matching(&dense)?;
    let eps = Frac::new(m.len() as u64, dense.domain().len() as u64);
    let mut sink = Sink::new(&args.output.out)?;
    sink.row(&json!({
        "schema_version": SCHEMA_VERSION,
        "eps": frac_str(eps),
        "eps_float": frac_to_f64(eps),
        "matching_size": m.len(),
        "domain_size": dense.domain().len(),
    })
    .to_string())?;
    Ok(0)
}

fn cmd_reduce(args: ReduceArgs) -> anyhow::Result<i32> {
    let f = args.fixture.build_grid()?;
    let mut sink = Sink::new(&args.output.out)?;

    let eps_f = exact_distance_if_cheap(&f)?;

    if args.exhaustive {
        let spec = GridRestriction::identity(f.domain());
        let dense = restrict(&f, &spec)?.to_dense()?;
        let m = max_violation_matching(&dense)?;
        let eps = Frac::new(m.len() as u64, dense.domain().len() as u64);
        emit_reduce_rows(&mut sink, args.output.format, &[(0, eps)], f.domain().dims()[0])?;
        sink.row(&reduce_summary(f.domain().dims()[0], 1, eps, 0.0, eps_f))?;
        return Ok(0);
    }

    let est = estimate_expected_distance(&f, args.k, args.trials, args.seed, Exec::Auto)?;
    let rows: Vec<(u64, Frac)> =
        est.per_trial.iter().enumerate().map(|(i, &e)| (i as u64, e)).collect();
    emit_reduce_rows(&mut sink, args.output.format, &rows, args.k)?;
    sink.row(&reduce_summary(args.k, args.trials, est.mean, est.ci95, eps_f))?;
    Ok(0)
}

// matching is quadratic in the point count; beyond this the summary
// reports eps_f as null rather than stalling the run
const EXACT_DISTANCE_CAP: usize = 20_000;

fn exact_distance_if_cheap(f: &BoolFunction) -> anyhow::Result<Option<Frac>> {
    match f.domain().point_count() {
        Some(total) if total <= EXACT_DISTANCE_CAP => {
            let dense = f.to_dense()?;
            Ok(Some(distance_to_monotonicity(&dense)?))
        }
        _ => Ok(None),
    }
}

fn emit_reduce_rows(
    sink: &mut Sink,
    format: Format,
    rows: &[(u64, Frac)],
    k: impl std::fmt::Display,
) -> anyhow::Result<()> {
    if format == Format::Csv {
        sink.row(&format!("# schema_version={SCHEMA_VERSION}"))?;
        sink.row("k,trial,eps_restricted")?;
    }
    for &(trial, eps) in rows {
        match format {
            Format::Csv => sink.row(&format!("{k},{trial},{}", frac_to_f64(eps)))?,
            Format::Json => sink.row(
                &json!({"k": k.to_string(), "trial": trial, "eps_restricted": frac_to_f64(eps)})
                    .to_string(),
            )?,
        }
    }
    Ok(())
}

fn reduce_summary(k: usize, trials: u64, mean: Frac, ci95: f64, eps_f: Option<Frac>) -> String {
    json!({
        "schema_version": SCHEMA_VERSION,
        "k": k,
        "trials": trials,
        "mean_eps": frac_str(mean),
        "mean_eps_float": frac_to_f64(mean),
        "ci95": ci95,
        "eps_f": eps_f.map(frac_str),
        "eps_f_float": eps_f.map(frac_to_f64),
    })
    .to_string()
}

fn pick_matching(args: &StacksArgs, f: &BoolFunction) -> anyhow::Result<ViolationMatching> {
    match args.matching.as_str() {
        "max" => Ok(max_violation_matching(f)?),
        "r" | "b" => {
            let n = args
                .fixture
                .n
                .ok_or_else(|| anyhow!("reference matchings need --n"))?;
            if FixtureKind::parse(&args.fixture.fixture)? != FixtureKind::AntiMajority {
                bail!("reference matchings r/b exist only for --fixture anti_majority");
            }
            Ok(if args.matching == "r" {
                fixtures::anti_majority_matching_r(n)
            } else {
                fixtures::anti_majority_matching_b(n)
            })
        }
        other => bail!("unknown matching {other:?}; use max, r, or b"),
    }
}

fn cmd_stacks(args: StacksArgs) -> anyhow::Result<i32> {
    let f = args.fixture.build_grid()?.to_dense()?;
    let m = pick_matching(&args, &f)?;
    let m = if args.raw { m } else { lex_improve(&f, &m, 0) };
    let profile = stack_profile(&m, 0);
    let mut sink = Sink::new(&args.output.out)?;
    for row in stack_bound_check(&profile, f.domain().len()) {
        sink.row(&json!({
            "lambda": row.lambda,
            "mass_at_least_lambda": row.mass,
            "bound": row.bound,
            "ok": row.ok,
        })
        .to_string())?;
    }
    sink.row(&json!({
        "schema_version": SCHEMA_VERSION,
        "matching_size": m.len(),
        "domain_size": f.domain().len(),
        "max_stack": profile.max_stack(),
        "lambda_vector": profile.lambda_vector(),
        "improved": !args.raw,
    })
    .to_string())?;
    Ok(0)
}

fn cmd_linesample(args: LinesampleArgs) -> anyhow::Result<i32> {
    let f = args.fixture.build_grid()?.to_dense()?;
    let m = max_violation_matching(&f)?;
    let m = if args.raw { m } else { lex_improve(&f, &m, 0) };
    let decomposition = line_decomposition(&m, 0);
    let line = match &args.line {
        Some(spec) => {
            let coords: Vec<usize> = spec
                .split(',')
                .map(|t| t.trim().parse::<usize>().context("parsing --line"))
                .collect::<anyhow::Result<_>>()?;
            LineId(coords)
        }
        None => decomposition
            .iter()
            .max_by_key(|(_, pairs)| pairs.len())
            .map(|(line, _)| line.clone())
            .ok_or_else(|| anyhow!("the matching is empty; no line to sample"))?,
    };
    let w = LineWeights::from_matching_line(&m, &line, 0)?;
    let report: LineSampleReport = if args.exhaustive {
        line_sampling_exhaustive(&w, args.k)?
    } else {
        line_sampling_experiment(&w, args.k, args.trials, args.seed, Exec::Auto)
    };
    let mut sink = Sink::new(&args.output.out)?;
    sink.row(&json!({
        "schema_version": SCHEMA_VERSION,
        "line": line.0,
        "line_matching_size": w.total_minus(),
        "lambda_cap": w.lambda_cap(),
        "k": report.k,
        "samples": report.samples,
        "mean_nu": report.mean_nu,
        "ci95": report.ci95,
        "bound": report.bound,
        "tail_freq": report.tail_freq,
        "exhaustive": report.exhaustive,
    })
    .to_string())?;
    Ok(0)
}

fn cmd_test(args: TestArgs) -> anyhow::Result<i32> {
    let fixture = args.fixture.build()?;
    let d = match &fixture {
        Fixture::Grid(f) => f.domain().dimension(),
        Fixture::Continuous { f, .. } => f.dimension(),
    };
    let base = TesterConfig::new(args.epsilon, d, args.seed)?;
    let config = match args.k {
        Some(k) => base.with_k(k)?,
        None => base,
    };
    let Inner::Pair = args.inner;
    let inner = PairTester::default();

    let outcomes: Vec<(Verdict, u64)> =
        monogrid::exec::map_indexed(Exec::Auto, args.runs as usize, |i| {
            let run_config = config.clone().with_seed(monogrid::derive_seed(args.seed, i as u64));
            let verdict = match &fixture {
                Fixture::Grid(f) => levin_tester_grid(f, &run_config, &inner),
                Fixture::Continuous { f, measure } => {
                    levin_tester_continuous(f, measure, &run_config, &inner)
                }
            }
            .expect("tester config validated");
            (verdict.verdict, verdict.queries)
        });

    let mut sink = Sink::new(&args.output.out)?;
    if args.output.format == Format::Csv {
        sink.row(&format!("# schema_version={SCHEMA_VERSION}"))?;
        sink.row("run,verdict,queries")?;
    }
    for (i, (verdict, queries)) in outcomes.iter().enumerate() {
        let verdict = if *verdict == Verdict::Reject { "reject" } else { "accept" };
        match args.output.format {
            Format::Csv => sink.row(&format!("{i},{verdict},{queries}"))?,
            Format::Json => sink.row(
                &json!({"run": i, "verdict": verdict, "queries": queries}).to_string(),
            )?,
        }
    }
    let rejects = outcomes.iter().filter(|(v, _)| *v == Verdict::Reject).count();
    let mean_queries =
        outcomes.iter().map(|&(_, q)| q as f64).sum::<f64>() / outcomes.len().max(1) as f64;
    sink.row(&json!({
        "schema_version": SCHEMA_VERSION,
        "runs": args.runs,
        "epsilon": args.epsilon,
        "k": config.k,
        // a clamped k weakens the distance-preservation guarantee of the
        // restriction step; surfaced so runs are interpretable
        "k_clamped": config.k_clamped,
        "inner": "pair",
        "reject_freq": rejects as f64 / args.runs.max(1) as f64,
        "mean_queries": mean_queries,
    })
    .to_string())?;
    Ok(0)
}

fn cmd_lowerbound(args: LowerboundArgs) -> anyhow::Result<i32> {
    if args.d < 2 {
        bail!("centrist needs --d >= 2");
    }
    let d = args.d;
    let k = args.k;
    let non_monotone: u64 = monogrid::exec::map_indexed(Exec::Auto, args.trials as usize, |i| {
        let mut rng = trial_rng(args.seed, i as u64);
        let spec = sample_restriction_continuous(&ProductMeasure::uniform(d), k, &mut rng)
            .expect("uniform quantile is monotone");
        let labels: Vec<Vec<fixtures::VoterLabel>> = spec
            .samples()
            .iter()
            .map(|dim| dim.iter().map(|&u| fixtures::centrist_label_real(u, d)).collect())
            .collect();
        (!fixtures::centrist_restriction_monotone(&labels)) as u64
    })
    .into_iter()
    .sum();
    let frac = non_monotone as f64 / args.trials as f64;
    let bound = (4.0 * (k * k) as f64 / d as f64).min(1.0);
    let margin = 3.0 * (bound * (1.0 - bound) / args.trials as f64).sqrt();

    let exact = match args.m {
        Some(m) => {
            let f = fixtures::centrist_discrete(d, m)?.to_dense()?;
            Some(distance_to_monotonicity(&f)?)
        }
        None => None,
    };

    let mut sink = Sink::new(&args.output.out)?;
    sink.row(&json!({
        "schema_version": SCHEMA_VERSION,
        "d": d,
        "k": k,
        "trials": args.trials,
        "frac_nonmonotone": frac,
        "bound_4k2_over_d": bound,
        "margin_3sigma": margin,
        "ok": frac <= bound + margin,
        "exact_eps_discrete": exact.map(frac_str),
    })
    .to_string())?;
    Ok(0)
}

fn cmd_variance(args: VarianceArgs) -> anyhow::Result<i32> {
    let mut sink = Sink::new(&args.output.out)?;
    if args.fixture == "all_functions" {
        let n = args.n.ok_or_else(|| anyhow!("all_functions needs --n"))?;
        let d = args.d.ok_or_else(|| anyhow!("all_functions needs --d"))?;
        let domain = GridDomain::cube(n, d)?;
        let points = domain.len();
        if points > 20 {
            bail!("all_functions sweep needs n^d <= 20, got {points}");
        }
        if args.mode != Mode::Exact {
            bail!("all_functions sweep runs in exact mode");
        }
        let total = 1u64 << points;
        let violations: u64 = monogrid::exec::map_indexed(Exec::Auto, total as usize, |code| {
            let values: Vec<u8> = (0..points).map(|i| (code >> i & 1) as u8).collect();
            let f = BoolFunction::from_table(domain.clone(), values).unwrap();
            let report = fixtures::variance_experiment_exact(&f).unwrap();
            (!report.holds()) as u64
        })
        .into_iter()
        .sum();
        sink.row(&json!({
            "schema_version": SCHEMA_VERSION,
            "functions": total,
            "violations": violations,
            "mode": "exact",
        })
        .to_string())?;
        return Ok(if violations == 0 { 0 } else { 1 });
    }

    let fixture = FixtureArgs {
        fixture: args.fixture.clone(),
        n: args.n,
        d: args.d,
        m: args.m,
        fixture_seed: args.fixture_seed,
        path: args.path.clone(),
    };
    let f = fixture.build_grid()?.to_dense()?;
    match args.mode {
        Mode::Exact => {
            let report = fixtures::variance_experiment_exact(&f)?;
            sink.row(&json!({
                "schema_version": SCHEMA_VERSION,
                "mode": "exact",
                "var": frac_str(report.var),
                "var_float": frac_to_f64(report.var),
                "expected_restricted_var": frac_str(report.expected_restricted),
                "expected_restricted_var_float": frac_to_f64(report.expected_restricted),
                "combos": report.combos,
                "holds": report.holds(),
                "slack": report.slack(),
            })
            .to_string())?;
        }
        Mode::MonteCarlo => {
            let mut rng = trial_rng(args.seed, 0);
            let (var, expected) =
                fixtures::variance_experiment_monte_carlo(&f, args.trials, &mut rng)?;
            sink.row(&json!({
                "schema_version": SCHEMA_VERSION,
                "mode": "monte_carlo",
                "trials": args.trials,
                "var": var,
                "expected_restricted_var": expected,
                "holds": expected >= var / 2.0,
            })
            .to_string())?;
        }
    }
    Ok(0)
}

fn cmd_accept(args: AcceptArgs) -> anyhow::Result<i32> {
    let exec = if args.sequential { Exec::Sequential } else { Exec::Auto };
    let outcomes = monogrid::acceptance::run_suite(args.filter.as_deref(), exec);
    if outcomes.is_empty() {
        bail!("no criterion matches filter {:?}", args.filter);
    }
    let mut failed = Vec::new();
    for outcome in &outcomes {
        println!("{}", outcome.line());
        if !outcome.passed {
            failed.push(outcome.name);
        }
    }
    if failed.is_empty() {
        println!("all {} criteria passed", outcomes.len());
        Ok(0)
    } else {
        println!("failed criteria: {}", failed.join(", "));
        Ok(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_parses_reduce_invocation() {
        let cli = Cli::try_parse_from([
            "monogrid",
            "reduce",
            "--fixture",
            "anti_majority",
            "--n",
            "20",
            "--k",
            "4",
            "--trials",
            "10",
            "--seed",
            "7",
        ])
        .unwrap();
        match cli.command {
            Command::Reduce(args) => {
                assert_eq!(args.k, 4);
                assert_eq!(args.trials, 10);
                assert_eq!(args.seed, 7);
                assert_eq!(args.fixture.n, Some(20));
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn unknown_fixture_is_rejected() {
        let args = FixtureArgs {
            fixture: "mystery".into(),
            n: None,
            d: None,
            m: None,
            fixture_seed: None,
            path: None,
        };
        assert!(args.build().is_err());
    }
}
