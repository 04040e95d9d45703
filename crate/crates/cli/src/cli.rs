//! Command-line frontend.
//!
//! Exit codes: 0 success, 1 internal error, 2 input error, 3 solver
//! disagreement, 4 oracle enumeration cap exceeded, 5 gamble unsupported by
//! the simulator.

use crate::bench::{self, BenchConfig, DensitySetting};
use crate::instance::{read_instance, Instance};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cop_gambler_core::oracle::{evaluate_stationary_strategy, oracle_optimal, OracleError, DEFAULT_CAP};
use cop_gambler_core::sim::{simulate_chase, SimError, DEFAULT_ROUND_CAP};
use cop_gambler_core::solver::{
    chase_path, max_distance, solve_iterative, solve_priority, Algorithm, Solution, Strategy,
    AGREEMENT_TOLERANCE,
};
use cop_gambler_core::{ChaseTime, GambleMode};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;
pub const EXIT_ORACLE_CAP: i32 = 4;
pub const EXIT_UNSUPPORTED: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "cop-gambler", version, about = "Optimal cop strategies against a known gambler")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance and print chase times, moves and chase paths.
    Solve(SolveArgs),
    /// Cross-check both solvers against brute-force strategy enumeration.
    Check(CheckArgs),
    /// Monte Carlo estimate of the capture time from one start vertex.
    Simulate(SimulateArgs),
    /// Time both solvers over a sweep of random instances and write CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgorithmChoice {
    Iterative,
    Priority,
    Both,
}

impl AlgorithmChoice {
    fn algorithms(self) -> Vec<Algorithm> {
        match self {
            AlgorithmChoice::Iterative => vec![Algorithm::Iterative],
            AlgorithmChoice::Priority => vec![Algorithm::Priority],
            AlgorithmChoice::Both => vec![Algorithm::Iterative, Algorithm::Priority],
        }
    }

    fn name(self) -> &'static str {
        match self {
            AlgorithmChoice::Iterative => "iterative",
            AlgorithmChoice::Priority => "priority",
            AlgorithmChoice::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategySource {
    Solved,
    Stay,
}

#[derive(Debug, Args)]
struct InstanceArgs {
    /// Instance file (JSON or edge list).
    instance: PathBuf,
    /// Accept gambles summing to less than 1.
    #[arg(long)]
    permissive: bool,
}

impl InstanceArgs {
    fn mode(&self) -> GambleMode {
        if self.permissive {
            GambleMode::Permissive
        } else {
            GambleMode::Strict
        }
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InstanceArgs,
    #[arg(long, value_enum, default_value = "both")]
    algorithm: AlgorithmChoice,
    #[arg(long, value_enum, default_value = "table")]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    input: InstanceArgs,
    /// Maximum number of strategies to enumerate.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u128,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    input: InstanceArgs,
    /// Label of the cop's starting vertex.
    #[arg(long)]
    start: String,
    #[arg(long, default_value_t = 200_000)]
    trials: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value = "solved")]
    strategy: StrategySource,
    /// Trials still running after this many rounds are reported as truncated.
    #[arg(long, default_value_t = DEFAULT_ROUND_CAP)]
    round_cap: u64,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// JSON sweep configuration; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV destination (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    algorithm: Option<AlgorithmChoice>,
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Sparse density: target edge count per vertex.
    #[arg(long)]
    sparse_degree: Option<f64>,
    /// Dense density: independent edge probability.
    #[arg(long)]
    dense_p: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    gamble_modes: Option<Vec<String>>,
    #[arg(long)]
    repetitions: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a, out, err),
        Command::Check(a) => cmd_check(&a, out),
        Command::Simulate(a) => cmd_simulate(&a, out),
        Command::Bench(a) => cmd_bench(&a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl ToString) -> Failure {
    Failure {
        code,
        message: message.to_string(),
    }
}

fn io_fail(e: std::io::Error) -> Failure {
    fail(EXIT_INTERNAL, format!("write failed: {e}"))
}

fn load(input: &InstanceArgs) -> Result<Instance, Failure> {
    read_instance(&input.instance, input.mode()).map_err(|e| fail(EXIT_INPUT, e))
}

/// `inf` for infinite times, shortest round-trip decimal otherwise.
fn time_json(t: ChaseTime) -> Value {
    if t.is_infinite() {
        Value::from("inf")
    } else {
        Value::from(t.value())
    }
}

fn float_json(x: f64) -> Value {
    if x.is_infinite() {
        Value::from("inf")
    } else {
        Value::from(x)
    }
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let inst = load(&args.input)?;
    let (g, p) = (&inst.graph, &inst.gamble);
    let solutions: Vec<Solution> = args
        .algorithm
        .algorithms()
        .into_iter()
        .map(|alg| match alg {
            Algorithm::Iterative => solve_iterative(g, p),
            Algorithm::Priority => solve_priority(g, p),
        })
        .collect();
    let primary = &solutions[0];
    let agreement = (solutions.len() == 2).then(|| {
        max_distance(&solutions[0].times, &solutions[1].times) <= AGREEMENT_TOLERANCE
    });
    let max_residual = solutions.iter().map(|s| s.max_residual).fold(0.0, f64::max);

    let n = g.vertex_count();
    let mut paths = Vec::with_capacity(n);
    for v in 0..n {
        let path = chase_path(g, primary, v).map_err(|e| fail(EXIT_INTERNAL, e))?;
        paths.push(path.into_iter().map(|u| inst.label(u)).collect::<Vec<_>>());
    }

    match args.format {
        OutputFormat::Json => {
            let records: Vec<Value> = (0..n)
                .map(|v| {
                    json!({
                        "label": inst.label(v),
                        "p": p.p(v),
                        "time": time_json(primary.times[v]),
                        "next": inst.label(primary.strategy.next(v)),
                        "chase_path": paths[v],
                    })
                })
                .collect();
            let doc = json!({
                "algorithm": args.algorithm.name(),
                "iterations": primary.iterations,
                "max_residual": float_json(max_residual),
                "agreement": agreement,
                "times": primary.times.iter().map(|&t| time_json(t)).collect::<Vec<_>>(),
                "strategy": (0..n).map(|v| inst.label(primary.strategy.next(v))).collect::<Vec<_>>(),
                "vertices": records,
            });
            writeln!(out, "{doc}").map_err(io_fail)?;
        }
        OutputFormat::Table => {
            let agree = match agreement {
                Some(true) => " (solvers agree)",
                Some(false) => " (SOLVERS DISAGREE)",
                None => "",
            };
            writeln!(out, "algorithm: {}{agree}", args.algorithm.name()).map_err(io_fail)?;
            writeln!(
                out,
                "iterations: {}  max_residual: {max_residual}",
                primary.iterations
            )
            .map_err(io_fail)?;
            let rows: Vec<[String; 5]> = (0..n)
                .map(|v| {
                    [
                        inst.label(v),
                        p.p(v).to_string(),
                        primary.times[v].to_string(),
                        inst.label(primary.strategy.next(v)),
                        paths[v].join(" -> "),
                    ]
                })
                .collect();
            let header = ["label", "p", "T", "next", "chase_path"].map(String::from);
            let mut widths = [0usize; 5];
            for row in std::iter::once(&header).chain(&rows) {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.len());
                }
            }
            for row in std::iter::once(&header).chain(&rows) {
                let line: Vec<String> = row
                    .iter()
                    .zip(widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect();
                writeln!(out, "{}", line.join("  ").trim_end()).map_err(io_fail)?;
            }
        }
    }
    if agreement == Some(false) {
        let _ = writeln!(
            err,
            "error: iterative and priority solvers disagree by {}",
            max_distance(&solutions[0].times, &solutions[1].times)
        );
        return Ok(EXIT_DISAGREEMENT);
    }
    Ok(EXIT_OK)
}

fn cmd_check(args: &CheckArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let inst = load(&args.input)?;
    let (g, p) = (&inst.graph, &inst.gamble);
    let oracle = match oracle_optimal(g, p, args.cap) {
        Ok(r) => r,
        Err(e @ OracleError::TooLarge { .. }) => return Err(fail(EXIT_ORACLE_CAP, e)),
        Err(e) => return Err(fail(EXIT_INTERNAL, e)),
    };
    let it = solve_iterative(g, p);
    let pr = solve_priority(g, p);
    let comparisons = [
        ("iterative vs oracle", max_distance(&it.times, &oracle.times)),
        ("priority vs oracle", max_distance(&pr.times, &oracle.times)),
        ("iterative vs priority", max_distance(&it.times, &pr.times)),
    ];
    writeln!(out, "strategies enumerated: {}", oracle.strategies_evaluated).map_err(io_fail)?;
    for (name, d) in comparisons {
        writeln!(out, "{name}: max difference {d}").map_err(io_fail)?;
    }
    let pass = comparisons.iter().all(|(_, d)| *d <= AGREEMENT_TOLERANCE);
    writeln!(out, "{}", if pass { "PASS" } else { "FAIL" }).map_err(io_fail)?;
    Ok(if pass { EXIT_OK } else { EXIT_DISAGREEMENT })
}

fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let inst = load(&args.input)?;
    let (g, p) = (&inst.graph, &inst.gamble);
    let start = inst
        .find(&args.start)
        .ok_or_else(|| fail(EXIT_INPUT, format!("unknown start vertex '{}'", args.start)))?;
    let (strategy, expected) = match args.strategy {
        StrategySource::Solved => {
            let sol = solve_iterative(g, p);
            let t = sol.times[start];
            (sol.strategy, t)
        }
        StrategySource::Stay => {
            let s = Strategy::stay(g.vertex_count());
            let eval = evaluate_stationary_strategy(g, p, &s).map_err(|e| fail(EXIT_INTERNAL, e))?;
            (s, eval.times[start])
        }
    };
    let report = simulate_chase(g, p, &strategy, start, args.trials, args.seed, args.round_cap)
        .map_err(|e| match e {
            SimError::NotADistribution { .. } => fail(EXIT_UNSUPPORTED, e),
            SimError::ZeroTrials | SimError::ZeroRoundCap => fail(EXIT_INPUT, e),
            other => fail(EXIT_INTERNAL, other),
        })?;
    let z = if expected.is_infinite() || report.completed() == 0 {
        f64::NAN
    } else if report.std_error > 0.0 {
        (report.mean - expected.value()) / report.std_error
    } else if report.mean == expected.value() {
        0.0
    } else {
        f64::INFINITY
    };
    let strategy_name = match args.strategy {
        StrategySource::Solved => "solved",
        StrategySource::Stay => "stay",
    };
    let lines = [
        format!("start: {}", inst.label(start)),
        format!("strategy: {strategy_name}"),
        format!("trials: {}", report.trials),
        format!("seed: {}", report.seed),
        format!("sampler: {}", report.sampler),
        format!("mean: {}", report.mean),
        format!("std_error: {}", report.std_error),
        format!("truncated: {}", report.truncated),
        format!("expected: {expected}"),
        format!("z: {z}"),
    ];
    for line in lines {
        writeln!(out, "{line}").map_err(io_fail)?;
    }
    Ok(EXIT_OK)
}

fn bench_config(args: &BenchArgs) -> Result<BenchConfig, Failure> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| fail(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))?;
            BenchConfig::from_json(&text).map_err(|e| fail(EXIT_INPUT, e))?
        }
        None => BenchConfig::default(),
    };
    if let Some(a) = args.algorithm {
        config.algorithms = a.algorithms();
    }
    if let Some(sizes) = &args.sizes {
        config.sizes = sizes.clone();
    }
    if args.sparse_degree.is_some() || args.dense_p.is_some() {
        config.densities = args
            .sparse_degree
            .map(DensitySetting::EdgesPerVertex)
            .into_iter()
            .chain(args.dense_p.map(DensitySetting::Probability))
            .collect();
    }
    if let Some(modes) = &args.gamble_modes {
        config.gamble_modes = modes
            .iter()
            .map(|m| bench::parse_gamble_kind(m))
            .collect::<Result<_, _>>()
            .map_err(|e| fail(EXIT_INPUT, e))?;
    }
    if let Some(r) = args.repetitions {
        config.repetitions = r;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    config.validate().map_err(|e| fail(EXIT_INPUT, e))?;
    Ok(config)
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let config = bench_config(args)?;
    let report = bench::run_benchmark(&config).map_err(|e| fail(EXIT_INPUT, e))?;
    match &args.out {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| fail(EXIT_INPUT, format!("cannot create {}: {e}", path.display())))?;
            report
                .write_csv(std::io::BufWriter::new(file))
                .map_err(|e| fail(EXIT_INTERNAL, e))?;
            for line in report.summary() {
                writeln!(out, "{line}").map_err(io_fail)?;
            }
        }
        None => {
            report.write_csv(&mut *out).map_err(|e| fail(EXIT_INTERNAL, e))?;
            for line in report.summary() {
                writeln!(err, "{line}").map_err(io_fail)?;
            }
        }
    }
    for m in &report.mismatches {
        let _ = writeln!(err, "MISMATCH: {m}");
    }
    Ok(if report.all_agree() {
        EXIT_OK
    } else {
        EXIT_DISAGREEMENT
    })
}
