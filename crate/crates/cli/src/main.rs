//! `pdsearch`: simulate the partial-diffusion search, reproduce its
//! performance table and probability curves, and cross-validate the
//! simulator against the closed-form model.
//!
//! Exit codes: 0 on success, 1 when a numerical check fails, 2 on usage
//! errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pdsearch_core::experiments::{
    self, Algorithm, CrossValidateOptions, CurvePoint, IterationPolicy, SweepGrid,
};
use pdsearch_core::{analytic, operators, MarkedSet, SearchParams};

const SIMULATE_TOLERANCE: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "pdsearch",
    version,
    about = "Quantum search via partial diffusion: simulator, closed forms, and reproduction experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the state-vector simulation and compare it with the closed-form
    /// prediction.
    Simulate(SimulateArgs),
    /// Emit the first-iteration performance table (max/min/avg success over
    /// the match count).
    Table1(TableArgs),
    /// Sweep analytic success probabilities over the match ratio.
    Sweep(SweepArgs),
    /// Cross-validate simulator, recurrence, and closed forms.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DataFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Args)]
#[command(group(ArgGroup::new("marking").required(true).args(["marked", "num_marked"])))]
struct SimulateArgs {
    /// Number of index qubits (list size N = 2^n).
    #[arg(short = 'n', long = "index-qubits", value_name = "N")]
    index_qubits: usize,

    /// Explicit comma-separated marked indices, e.g. `--marked 0,5,9`.
    #[arg(long, value_name = "LIST")]
    marked: Option<String>,

    /// Number of marked indices to sample without replacement (uses --seed).
    #[arg(long, value_name = "M")]
    num_marked: Option<usize>,

    /// Iteration count, or `auto` for floor(pi/(2 sqrt 2) sqrt(N/M)).
    #[arg(short = 'q', long = "iterations", value_name = "Q|auto")]
    iterations: String,

    /// Seed for marked-set sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, value_enum, default_value = "csv")]
    format: DataFormat,

    /// Write output here instead of stdout.
    #[arg(short = 'o', long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, default_value_t = 2)]
    n_min: u32,

    #[arg(long, default_value_t = 6)]
    n_max: u32,

    #[arg(long, value_enum, default_value = "csv")]
    format: DataFormat,

    #[arg(short = 'o', long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("policy").args(["fixed_q", "paper_q", "grover_q"])))]
struct SweepArgs {
    /// Comma-separated algorithms: pd|partial_diffusion, grover, classical.
    #[arg(long, default_value = "pd,grover,classical", value_name = "LIST")]
    algos: String,

    /// Number of ratio grid points over (0, 1].
    #[arg(long, default_value_t = 1000)]
    points: usize,

    /// Run every algorithm for exactly K iterations.
    #[arg(long, value_name = "K")]
    fixed_q: Option<u64>,

    /// Give each algorithm its own published iteration count.
    #[arg(long)]
    paper_q: bool,

    /// Budget every algorithm with Grover's iteration count.
    #[arg(long)]
    grover_q: bool,

    /// Use a logarithmic ratio grid from --min-ratio up to 1.
    #[arg(long)]
    log: bool,

    /// Smallest ratio of the logarithmic grid.
    #[arg(long, default_value_t = 1e-6, value_name = "R")]
    min_ratio: f64,

    #[arg(long, value_enum, default_value = "csv")]
    format: DataFormat,

    #[arg(short = 'o', long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Largest register compared (analytic cap 12, simulator cap 10).
    #[arg(long, default_value_t = 8)]
    n_max: usize,

    /// Iterations compared per instance.
    #[arg(long, default_value_t = 50)]
    q_max: u64,

    /// Comparison budget; exhausting it truncates the grid.
    #[arg(long, default_value_t = 4_000_000)]
    budget: usize,

    /// Seed for match-count sampling.
    #[arg(long, default_value_t = 7)]
    seed: u64,

    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,

    #[arg(short = 'o', long, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Negative control: corrupt the diffusion operator's workspace sign so
    /// validation must fail.
    #[arg(long, hide = true)]
    inject_diffusion_sign_fault: bool,
}

/// Everything `simulate` reports: the simulated run, the closed-form
/// prediction, and their difference.
#[derive(Serialize)]
struct SimulateReport {
    index_qubits: usize,
    items: u64,
    matches: u64,
    marked: Vec<usize>,
    iterations: u64,
    p_simulated: f64,
    p_closed_form: f64,
    abs_diff: f64,
    pass: bool,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Usage problems come back as `Err`; numerical-check failures as exit 1.
fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Table1(args) => cmd_table1(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Validate(args) => cmd_validate(args),
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, String> {
    let n = args.index_qubits;
    let marked = resolve_marked_set(n, args.marked.as_deref(), args.num_marked, args.seed)?;
    let params = SearchParams::from_marked(&marked);
    let iterations = match args.iterations.trim() {
        "auto" => analytic::required_iterations(&params),
        text => text.parse::<u64>().map_err(|_| {
            format!("iterations must be an unsigned integer or `auto`, got `{text}`")
        })?,
    };

    let state = operators::run_search(n, &marked, iterations).map_err(|e| e.to_string())?;
    let p_simulated = state
        .probability_of_index_set(&marked)
        .map_err(|e| e.to_string())?;
    let p_closed_form = analytic::success_probability(&params, iterations);
    let abs_diff = (p_simulated - p_closed_form).abs();
    let report = SimulateReport {
        index_qubits: n,
        items: params.items(),
        matches: params.matches(),
        marked: marked.members().to_vec(),
        iterations,
        p_simulated,
        p_closed_form,
        abs_diff,
        pass: abs_diff < SIMULATE_TOLERANCE,
    };

    let payload = match args.format {
        DataFormat::Csv => simulate_report_csv(&report),
        DataFormat::Json => to_json(&report),
    };
    emit(args.output.as_deref(), &payload)?;
    Ok(exit_for(report.pass))
}

fn simulate_report_csv(report: &SimulateReport) -> String {
    let marked = report
        .marked
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(";");
    let mut out =
        String::from("n,items,matches,marked,iterations,p_simulated,p_closed_form,abs_diff,pass\n");
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{},{}",
        report.index_qubits,
        report.items,
        report.matches,
        marked,
        report.iterations,
        experiments::format_float(report.p_simulated),
        experiments::format_float(report.p_closed_form),
        experiments::format_float(report.abs_diff),
        report.pass
    );
    out
}

fn cmd_table1(args: TableArgs) -> Result<ExitCode, String> {
    let rows =
        experiments::table_first_iteration(args.n_min, args.n_max).map_err(|e| e.to_string())?;
    let payload = match args.format {
        DataFormat::Csv => experiments::table_to_csv(&rows),
        DataFormat::Json => to_json(&rows),
    };
    emit(args.output.as_deref(), &payload)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, String> {
    let algorithms = parse_algorithms(&args.algos)?;
    let policy = if let Some(q) = args.fixed_q {
        IterationPolicy::Fixed(q)
    } else if args.paper_q {
        IterationPolicy::PaperFormula
    } else if args.grover_q {
        IterationPolicy::GroverFormula
    } else {
        IterationPolicy::Fixed(1)
    };
    let grid = if args.log {
        SweepGrid::logarithmic(args.points, args.min_ratio, policy, algorithms)
    } else {
        SweepGrid::uniform(args.points, policy, algorithms)
    }
    .map_err(|e| e.to_string())?;

    let points = experiments::sweep_curves(&grid);
    let payload = match args.format {
        DataFormat::Csv => experiments::curves_to_csv(&points),
        DataFormat::Json => to_json(&points),
    };
    emit(args.output.as_deref(), &payload)?;

    if matches!(policy, IterationPolicy::PaperFormula) {
        for line in minimum_summary(&points) {
            eprintln!("{line}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Per-algorithm minimum over the emitted grid, printed to stderr so the
/// data stream stays clean.
fn minimum_summary(points: &[CurvePoint]) -> Vec<String> {
    let mut lines = Vec::new();
    let mut current: Option<(Algorithm, f64, f64)> = None;
    for point in points {
        match current {
            Some((algorithm, p_min, _)) if algorithm == point.algorithm => {
                if point.p_success < p_min {
                    current = Some((algorithm, point.p_success, point.ratio));
                }
            }
            Some((algorithm, p_min, ratio)) => {
                lines.push(format_minimum(algorithm, p_min, ratio));
                current = Some((point.algorithm, point.p_success, point.ratio));
            }
            None => current = Some((point.algorithm, point.p_success, point.ratio)),
        }
    }
    if let Some((algorithm, p_min, ratio)) = current {
        lines.push(format_minimum(algorithm, p_min, ratio));
    }
    lines
}

fn format_minimum(algorithm: Algorithm, p_min: f64, ratio: f64) -> String {
    format!(
        "# minimum {}: p_success={} at ratio={}",
        algorithm,
        experiments::format_float(p_min),
        experiments::format_float(ratio)
    )
}

fn cmd_validate(args: ValidateArgs) -> Result<ExitCode, String> {
    let report = experiments::cross_validate(&CrossValidateOptions {
        max_index_qubits: args.n_max,
        max_iterations: args.q_max,
        sample_budget: args.budget,
        seed: args.seed,
        flip_diffusion_sign: args.inject_diffusion_sign_fault,
    })
    .map_err(|e| e.to_string())?;

    let payload = match args.format {
        ReportFormat::Text => report.to_text(),
        ReportFormat::Json => {
            let mut json = report.to_json();
            json.push('\n');
            json
        }
    };
    emit(args.output.as_deref(), &payload)?;
    Ok(exit_for(report.pass))
}

fn resolve_marked_set(
    n: usize,
    marked: Option<&str>,
    num_marked: Option<usize>,
    seed: u64,
) -> Result<MarkedSet, String> {
    if let Some(list) = marked {
        let indices = list
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("invalid marked index `{tok}`"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        return MarkedSet::new(n, indices).map_err(|e| e.to_string());
    }
    let count = num_marked.expect("clap guarantees one marking source");
    MarkedSet::sample(n, count, seed).map_err(|e| e.to_string())
}

fn parse_algorithms(list: &str) -> Result<Vec<Algorithm>, String> {
    list.split(',')
        .map(|tok| match tok.trim() {
            "pd" | "partial_diffusion" | "partial-diffusion" => Ok(Algorithm::PartialDiffusion),
            "grover" => Ok(Algorithm::Grover),
            "classical" => Ok(Algorithm::Classical),
            other => Err(format!("unknown algorithm `{other}`")),
        })
        .collect()
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut json = serde_json::to_string_pretty(value).expect("report serialization cannot fail");
    json.push('\n');
    json
}

fn emit(path: Option<&std::path::Path>, payload: &str) -> Result<(), String> {
    match path {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn exit_for(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
