//! `mints`: verify, search, and decode ApSimon's Mints weighing schemes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mints_core::decoder::{decode_with_table, Observations};
use mints_core::search::{DEFAULT_CHECKPOINT_INTERVAL, SEARCH_MAX_MINTS};
use mints_core::{
    bounds, capacity_max_mints, ratio_table, search_known_eps, search_optimal, simulate_weighings,
    verify_injective, verify_scheme, Budget, Checkpoint, CheckpointSettings, CostKind,
    DecodeOutcome, FeasibilityReport, KnownEpsConfig, MintsError, Rational, Scheme, SearchConfig,
    SearchResult, SubsetMask,
};

#[derive(Parser)]
#[command(
    name = "mints",
    version,
    about = "Exact solver for ApSimon's Mints weighing puzzles"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Cost {
    TotalMax,
    GrandSum,
    MaxEntry,
}

impl From<Cost> for CostKind {
    fn from(c: Cost) -> Self {
        match c {
            Cost::TotalMax => CostKind::TotalMax,
            Cost::GrandSum => CostKind::GrandSum,
            Cost::MaxEntry => CostKind::MaxEntry,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check whether a scheme identifies every set of fake mints.
    Verify {
        #[arg(long)]
        scheme: PathBuf,
    },
    /// Find a minimum-cost scheme.
    Search(SearchArgs),
    /// Largest number of mints testable with at most C coins per weighing.
    Capacity {
        #[arg(long)]
        cap: u64,
        #[command(flatten)]
        limits: Limits,
    },
    /// Optimal costs for 1..=N mints.
    Table {
        #[arg(long)]
        max_mints: usize,
        #[arg(long, value_enum, default_value_t = Cost::TotalMax)]
        cost: Cost,
        #[command(flatten)]
        limits: Limits,
    },
    /// Lower and upper bounds on the optimal coin count.
    Bounds {
        #[arg(long)]
        mints: usize,
        /// A feasible scheme with entries at most C is known for M mints.
        #[arg(long, value_name = "C,M")]
        capacity_witness: Option<String>,
    },
    /// Weighing totals for a given set of fake mints.
    Simulate {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        genuine_weight: String,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: String,
        /// Comma-separated 1-based mint numbers; empty for none.
        #[arg(long, default_value = "")]
        fake: String,
    },
    /// Recover the fake mints from observed weighing totals.
    Decode {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        genuine_weight: String,
        /// Comma-separated totals, e.g. `4,2` or `10/3,8/3`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "observations")]
        observed: Option<String>,
        /// JSON file of the form {"weighings": ["4", "2"]}.
        #[arg(long)]
        observations: Option<PathBuf>,
    },
    /// The variant in which the fake deviation is known.
    #[command(subcommand)]
    KnownEps(KnownEpsCommand),
}

#[derive(Subcommand)]
enum KnownEpsCommand {
    /// Check that all subset sums differ.
    Verify {
        #[arg(long)]
        scheme: PathBuf,
    },
    /// Find a minimum-cost injective scheme with K weighings.
    Search {
        #[arg(long)]
        mints: usize,
        #[arg(long, default_value_t = 2)]
        weighings: usize,
        #[command(flatten)]
        limits: Limits,
        #[command(flatten)]
        checkpoints: CheckpointArgs,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    mints: usize,
    #[arg(long, value_enum, default_value_t = Cost::TotalMax)]
    cost: Cost,
    /// At most this many coins per mint in any weighing.
    #[arg(long)]
    cap: Option<u64>,
    /// Only consider schemes costing at most this much.
    #[arg(long)]
    upper_bound: Option<u64>,
    #[command(flatten)]
    limits: Limits,
    #[command(flatten)]
    checkpoints: CheckpointArgs,
}

#[derive(Args)]
struct Limits {
    /// Stop after this many node expansions.
    #[arg(long)]
    node_limit: Option<u64>,
    /// Stop after this many seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Worker threads (1 runs single-threaded).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct CheckpointArgs {
    /// Write periodic checkpoints to this file.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Seconds between checkpoint writes.
    #[arg(long, default_value_t = DEFAULT_CHECKPOINT_INTERVAL.as_secs_f64())]
    checkpoint_interval: f64,
    /// Continue from a checkpoint file.
    #[arg(long)]
    resume: Option<PathBuf>,
}

/// Error with the process exit code it maps to.
struct Failure {
    code: u8,
    message: String,
    /// Printed on standard output before failing.
    output: Option<String>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
            output: None,
        }
    }

    fn domain(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
            output: None,
        }
    }
}

impl From<MintsError> for Failure {
    fn from(e: MintsError) -> Self {
        match e {
            MintsError::Parse(_) | MintsError::Config(_) | MintsError::Checkpoint(_) => {
                Failure::usage(e.to_string())
            }
            _ => Failure::domain(e.to_string()),
        }
    }
}

type CliResult<T = String> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            if let Some(out) = f.output {
                println!("{out}");
            }
            eprintln!("mints: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CliResult {
    let table = cli.format == Format::Table;
    match &cli.command {
        Command::Verify { scheme } => {
            let scheme = read_scheme(scheme)?;
            let report = verify_scheme(&scheme)?;
            Ok(render_report(&report, table))
        }
        Command::Search(args) => {
            let result = search_optimal(&search_config(args)?)?;
            Ok(render_search(&result, table))
        }
        Command::Capacity { cap, limits } => {
            let result = capacity_max_mints(*cap, budget(limits)?, limits.threads)?;
            if table {
                let mut s = format!(
                    "cap {}: at most {} mints ({})",
                    result.cap,
                    result.max_mints,
                    if result.proven { "proven" } else { "unproven" }
                );
                if let Some(w) = &result.witness {
                    let _ = write!(s, "\nwitness {w}");
                }
                Ok(s)
            } else {
                Ok(to_json(&result))
            }
        }
        Command::Table {
            max_mints,
            cost,
            limits,
        } => cost_table(*max_mints, (*cost).into(), limits, table),
        Command::Bounds {
            mints,
            capacity_witness,
        } => {
            let witness = capacity_witness.as_deref().map(parse_witness).transpose()?;
            let (lower, upper) = bounds(*mints, witness)?;
            Ok(if table {
                format!("{mints} mints: {lower} <= optimal coins <= {upper}")
            } else {
                json!({"mints": mints, "lower": lower, "upper": upper}).to_string()
            })
        }
        Command::Simulate {
            scheme,
            genuine_weight,
            epsilon,
            fake,
        } => {
            let scheme = read_scheme(scheme)?;
            let fake = parse_fake(fake)?;
            let totals =
                simulate_weighings(&scheme, genuine_weight.parse()?, epsilon.parse()?, fake)?;
            Ok(if table {
                totals
                    .iter()
                    .enumerate()
                    .map(|(j, t)| format!("weighing {}: {t}", j + 1))
                    .collect::<Vec<_>>()
                    .join("\n")
            } else {
                to_json(&Observations { weighings: totals })
            })
        }
        Command::Decode {
            scheme,
            genuine_weight,
            observed,
            observations,
        } => {
            let scheme = read_scheme(scheme)?;
            let observed = match (observed, observations) {
                (Some(list), None) => list
                    .split(',')
                    .map(str::parse)
                    .collect::<Result<Vec<Rational>, _>>()?,
                (None, Some(path)) => {
                    let text = read_file(path)?;
                    serde_json::from_str::<Observations>(&text)
                        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?
                        .weighings
                }
                _ => return Err(Failure::usage("give either --observed or --observations")),
            };
            let tbl = ratio_table(&scheme)?;
            let outcome = decode_with_table(&scheme, &tbl, genuine_weight.parse()?, &observed)?;
            render_decode(&outcome, table)
        }
        Command::KnownEps(KnownEpsCommand::Verify { scheme }) => {
            let scheme = read_scheme(scheme)?;
            Ok(render_report(&verify_injective(&scheme)?, table))
        }
        Command::KnownEps(KnownEpsCommand::Search {
            mints,
            weighings,
            limits,
            checkpoints,
        }) => {
            let config = KnownEpsConfig {
                budget: budget(limits)?,
                threads: limits.threads,
                checkpoint: checkpoint_settings(checkpoints)?,
                resume: resume(checkpoints)?,
                ..KnownEpsConfig::new(*mints, *weighings)
            };
            Ok(render_search(&search_known_eps(&config)?, table))
        }
    }
}

fn read_file(path: &Path) -> CliResult {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn read_scheme(path: &Path) -> CliResult<Scheme> {
    let text = read_file(path)?;
    Scheme::from_json(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("JSON serialization cannot fail")
}

fn budget(limits: &Limits) -> CliResult<Budget> {
    let time_limit = match limits.time_limit {
        None => None,
        Some(t) if t > 0.0 && t.is_finite() => Some(Duration::from_secs_f64(t)),
        Some(_) => {
            return Err(Failure::usage(
                "--time-limit must be a positive number of seconds",
            ))
        }
    };
    Ok(Budget {
        node_limit: limits.node_limit,
        time_limit,
    })
}

fn checkpoint_settings(args: &CheckpointArgs) -> CliResult<Option<CheckpointSettings>> {
    if !(args.checkpoint_interval > 0.0 && args.checkpoint_interval.is_finite()) {
        return Err(Failure::usage("--checkpoint-interval must be positive"));
    }
    Ok(args.checkpoint.clone().map(|path| CheckpointSettings {
        path,
        interval: Duration::from_secs_f64(args.checkpoint_interval),
    }))
}

fn resume(args: &CheckpointArgs) -> CliResult<Option<Checkpoint>> {
    args.resume
        .as_deref()
        .map(Checkpoint::load)
        .transpose()
        .map_err(Failure::from)
}

fn search_config(args: &SearchArgs) -> CliResult<SearchConfig> {
    Ok(SearchConfig {
        cap: args.cap,
        budget: budget(&args.limits)?,
        initial_upper_bound: args.upper_bound,
        threads: args.limits.threads,
        checkpoint: checkpoint_settings(&args.checkpoints)?,
        resume: resume(&args.checkpoints)?,
        ..SearchConfig::new(args.mints, args.cost.into())
    })
}

fn parse_witness(s: &str) -> CliResult<(u64, usize)> {
    let bad = || Failure::usage(format!("--capacity-witness expects C,M, got {s:?}"));
    let (c, m) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        c.trim().parse().map_err(|_| bad())?,
        m.trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_fake(s: &str) -> CliResult<SubsetMask> {
    let s = s.trim();
    if s.is_empty() || s == "none" {
        return Ok(SubsetMask::EMPTY);
    }
    let mints = s
        .split(',')
        .map(|m| {
            m.trim()
                .parse::<usize>()
                .map_err(|_| Failure::usage(format!("--fake expects mint numbers, got {m:?}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(SubsetMask::from_mints(&mints)?)
}

fn mask_json(m: SubsetMask) -> Value {
    json!(m.mints())
}

fn render_report(report: &FeasibilityReport, table: bool) -> String {
    match (report.witness, table) {
        (None, false) => json!({"feasible": true}).to_string(),
        (Some((a, b)), false) => {
            json!({"feasible": false, "witness": [mask_json(a), mask_json(b)]}).to_string()
        }
        (None, true) => "feasible".to_string(),
        (Some((a, b)), true) => format!("infeasible: fake sets {a} and {b} cannot be told apart"),
    }
}

fn render_search(result: &SearchResult, table: bool) -> String {
    if !table {
        return result.to_json();
    }
    let mut s = format!("status: {:?}", result.status);
    if let Some(c) = result.best_cost {
        let _ = write!(s, "\nbest cost: {c}");
    }
    if let Some(scheme) = &result.best_scheme {
        let _ = write!(s, "\nscheme: {scheme}");
    }
    let _ = write!(
        s,
        "\nnodes: {}  elapsed: {} ms",
        result.stats.nodes, result.stats.elapsed_ms
    );
    s
}

fn render_decode(outcome: &DecodeOutcome, table: bool) -> CliResult {
    let (value, text) = match outcome {
        DecodeOutcome::AllGenuine => (
            json!({"outcome": "all_genuine"}),
            "all mints are genuine".to_string(),
        ),
        DecodeOutcome::FakeSet(m) => (
            json!({"outcome": "fake_set", "fake": mask_json(*m)}),
            format!("fake mints: {m}"),
        ),
        DecodeOutcome::Inconsistent(reason) => {
            let out = if table {
                format!("inconsistent: {reason}")
            } else {
                json!({"outcome": "inconsistent", "reason": reason}).to_string()
            };
            return Err(Failure {
                output: Some(out),
                ..Failure::domain(format!("inconsistent observations: {reason}"))
            });
        }
    };
    Ok(if table { text } else { value.to_string() })
}

fn cost_table(max_mints: usize, kind: CostKind, limits: &Limits, table: bool) -> CliResult {
    if max_mints == 0 || max_mints > SEARCH_MAX_MINTS {
        return Err(Failure::usage(format!(
            "--max-mints must be between 1 and {SEARCH_MAX_MINTS}"
        )));
    }
    let mut rows = Vec::new();
    let mut costs = Vec::new();
    let mut text = format!(
        "{:>5}  {:>10}  {:<10}  scheme",
        "mints",
        kind.name(),
        "status"
    );
    for n in 1..=max_mints {
        let config = SearchConfig {
            budget: budget(limits)?,
            threads: limits.threads,
            ..SearchConfig::new(n, kind)
        };
        let r = search_optimal(&config)?;
        costs.push(r.best_cost);
        let _ = write!(
            text,
            "\n{:>5}  {:>10}  {:<10}  {}",
            n,
            r.best_cost.map_or("-".into(), |c| c.to_string()),
            format!("{:?}", r.status),
            r.best_scheme
                .as_ref()
                .map_or(String::new(), ToString::to_string)
        );
        rows.push(json!({
            "mints": n,
            "status": r.status,
            "best_cost": r.best_cost,
            "scheme": r.best_scheme,
        }));
    }
    Ok(if table {
        text
    } else {
        json!({"cost": kind.name(), "costs": costs, "rows": rows}).to_string()
    })
}
