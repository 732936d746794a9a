//! The `qubokit` command-line surface.
//!
//! Subcommands: `generate` (seeded instances to native JSON), `encode`
//! (instance to QUBO, native or bqp), `solve` (the annealer), `oracle`
//! (exact reference), `reduce` (selective-coloring size reduction), and the
//! CSV-emitting harnesses `bench`, `sweep`, and `ordering`.
//!
//! Exit codes: 0 on success, 1 on any error, 2 when `--require-feasible`
//! was set and the result decoded infeasible.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qubokit_core::anneal::{anneal_threads, AnnealConfig, Mode};
use qubokit_core::gen::{gen_pure_qubo, gen_qcpp, gen_selcol, PureQuboSpec, QcppSpec, SelColSpec};
use qubokit_core::metrics::{norm_diff, ordering_experiment, pct_gap, summarize, RunRecord, Summary};
use qubokit_core::oracle::{brute_qap, brute_qcpp, brute_qubo, brute_selcol};
use qubokit_core::problems::{
    decode_qap, decode_qcpp, decode_selcol, qap_objective, qcpp_objective, Decoded,
    ProblemInstance,
};
use qubokit_core::reduce::reduce;
use qubokit_core::{BinaryState, QuboModel};

use crate::formats::native::{read_native, write_instance, write_model, NativeDoc};
use crate::formats::{bqp, qaplib};
use crate::output::{
    effective_time, print_report, rows_to_csv, thread_count, CsvRow, RunReport,
};

#[derive(Parser)]
#[command(
    name = "qubokit",
    version,
    about = "QUBO encoders, a digital-annealer-style solver, exact oracles, and benchmark harnesses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random instance as native JSON
    Generate(GenerateArgs),
    /// Encode a constrained instance into one flat QUBO
    Encode(EncodeArgs),
    /// Run the annealer and report the decoded result as JSON
    Solve(SolveArgs),
    /// Solve exactly by brute force (desk-scale sizes only)
    Oracle(OracleArgs),
    /// Two-phase size reduction for selective-coloring instances
    Reduce(ReduceArgs),
    /// Run instances against solvers and emit per-run CSV plus a summary
    Bench(BenchArgs),
    /// Re-encode and solve across penalty coefficients, emitting CSV
    Sweep(SweepArgs),
    /// Solve under random variable orderings, emitting CSV
    Ordering(OrderingArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    PureQubo,
    Qcpp,
    Selcol,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Normal,
    Parallel,
}

impl ModeArg {
    fn core(self) -> Mode {
        match self {
            ModeArg::Normal => Mode::Normal,
            ModeArg::Parallel => Mode::Parallel,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ModeArg::Normal => "normal",
            ModeArg::Parallel => "parallel",
        }
    }

    fn solver_id(self) -> &'static str {
        match self {
            ModeArg::Normal => "da-normal",
            ModeArg::Parallel => "da-parallel",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    /// Native JSON document
    Native,
    /// OR-Library-style sparse QUBO text
    Bqp,
    /// QAPLIB whitespace matrices
    Qaplib,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Variable or vertex count
    #[arg(short = 'n', long)]
    size: usize,
    /// Term/arc/edge probability (pure-qubo defaults to 0.1)
    #[arg(long)]
    density: Option<f64>,
    #[arg(long, default_value_t = -100, allow_hyphen_values = true)]
    coeff_low: i64,
    #[arg(long, default_value_t = 100)]
    coeff_high: i64,
    #[arg(long)]
    cluster_low: Option<usize>,
    #[arg(long)]
    cluster_high: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelFormat {
    Native,
    Bqp,
}

#[derive(Args)]
struct EncodeArgs {
    /// Penalty coefficient; defaults to the family's benchmark value
    /// (16000 for qap, 1000 for qcpp, 5·budget for selcol)
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModelFormat::Native)]
    format: ModelFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    input_format: Option<InputFormat>,
    input: PathBuf,
}

#[derive(Args)]
struct AnnealArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Normal)]
    mode: ModeArg,
    #[arg(long, default_value_t = 100_000)]
    iters: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the coefficient-scaled default
    #[arg(long)]
    beta_start: Option<f64>,
    #[arg(long)]
    beta_end: Option<f64>,
    #[arg(long)]
    offset_increment: Option<f64>,
    #[arg(long, default_value_t = 4)]
    replicas: usize,
    #[arg(long, default_value_t = 100)]
    exchange_interval: u64,
}

impl AnnealArgs {
    fn config(&self, model: &QuboModel) -> AnnealConfig {
        let mut cfg = AnnealConfig::for_model(model, self.mode.core(), self.iters, self.seed);
        if let Some(b) = self.beta_start {
            cfg.beta_start = b;
        }
        if let Some(b) = self.beta_end {
            cfg.beta_end = b;
        }
        if let Some(o) = self.offset_increment {
            cfg.offset_increment = o;
        }
        cfg.replicas = self.replicas;
        cfg.exchange_interval = self.exchange_interval;
        cfg
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    anneal: AnnealArgs,
    /// Penalty coefficient for instance inputs (family default when omitted)
    #[arg(long)]
    lambda: Option<f64>,
    /// Exit with code 2 unless the result decodes feasible
    #[arg(long)]
    require_feasible: bool,
    /// Treat a bqp input as a maximization problem (negate in, un-negate out)
    #[arg(long)]
    maximize: bool,
    #[arg(long, value_enum)]
    input_format: Option<InputFormat>,
    input: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    require_feasible: bool,
    #[arg(long)]
    maximize: bool,
    #[arg(long, value_enum)]
    input_format: Option<InputFormat>,
    input: PathBuf,
}

#[derive(Args)]
struct ReduceArgs {
    /// Where to write the reduced instance
    #[arg(long)]
    out: Option<PathBuf>,
    input: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 10_000)]
    iters: u64,
    /// Seeds per (instance, mode): the run seeds are seed, seed+1, …
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [ModeArg::Normal, ModeArg::Parallel])]
    modes: Vec<ModeArg>,
    /// Also run the brute-force oracle per instance (certifies bounds)
    #[arg(long)]
    oracle: bool,
    /// Solver whose best ub anchors the normalized differences
    /// (default: oracle when enabled, else da-normal)
    #[arg(long)]
    ref_solver: Option<String>,
    #[arg(long, default_value_t = 4)]
    replicas: usize,
    #[arg(long, default_value_t = 100)]
    exchange_interval: u64,
    /// Runs CSV path; stdout when omitted (summary then goes to stderr)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    input_format: Option<InputFormat>,
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    lambdas: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    iters: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    replicas: usize,
    #[arg(long, default_value_t = 100)]
    exchange_interval: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    input_format: Option<InputFormat>,
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
}

#[derive(Args)]
struct OrderingArgs {
    #[arg(long, default_value_t = 10)]
    perms: usize,
    #[command(flatten)]
    anneal: AnnealArgs,
    /// Penalty coefficient for instance inputs (family default when omitted)
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    input_format: Option<InputFormat>,
    input: PathBuf,
}

/// Parses `argv` and runs one subcommand, returning the process exit code.
pub fn run<I, T>(argv: I) -> Result<i32>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Encode(args) => cmd_encode(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Reduce(args) => cmd_reduce(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Ordering(args) => cmd_ordering(args),
    }
}

/// What an input file held.
enum Loaded {
    Model(QuboModel),
    Instance(ProblemInstance),
}

fn sniff_format(path: &Path) -> Option<InputFormat> {
    match path.extension()?.to_str()? {
        "json" => Some(InputFormat::Native),
        "bqp" | "sparse" => Some(InputFormat::Bqp),
        "dat" | "qap" => Some(InputFormat::Qaplib),
        _ => None,
    }
}

fn stem_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn load_input(path: &Path, format: Option<InputFormat>, negate: bool) -> Result<Loaded> {
    let format = format
        .or_else(|| sniff_format(path))
        .ok_or_else(|| anyhow!("cannot infer format of '{}'; pass --input-format", path.display()))?;
    if negate && format != InputFormat::Bqp {
        bail!("--maximize applies only to bqp inputs");
    }
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading '{}'", path.display()))?;
    let loaded = match format {
        InputFormat::Native => match read_native(&text)
            .with_context(|| format!("parsing '{}'", path.display()))?
        {
            NativeDoc::Model(m) => Loaded::Model(m),
            NativeDoc::Instance(i) => Loaded::Instance(i),
        },
        InputFormat::Bqp => Loaded::Model(
            bqp::read_bqp(&text, negate)
                .with_context(|| format!("parsing '{}'", path.display()))?,
        ),
        InputFormat::Qaplib => Loaded::Instance(ProblemInstance::Qap(
            qaplib::read_qaplib(&text)
                .with_context(|| format!("parsing '{}'", path.display()))?,
        )),
    };
    Ok(loaded)
}

/// Model to anneal, the λ used (instances only), and the instance itself.
fn prepare_model(
    loaded: &Loaded,
    lambda: Option<f64>,
) -> Result<(QuboModel, Option<f64>, Option<&ProblemInstance>)> {
    match loaded {
        Loaded::Model(m) => {
            if lambda.is_some() {
                bail!("--lambda applies only to instance inputs; this file is already a QUBO");
            }
            Ok((m.clone(), None, None))
        }
        Loaded::Instance(inst) => {
            let lambda = lambda.unwrap_or_else(|| inst.bench_lambda());
            if lambda <= 0.0 {
                bail!("penalty coefficient must be positive, got {lambda}");
            }
            Ok((inst.encode(lambda), Some(lambda), Some(inst)))
        }
    }
}

fn warn_var_cap(model: &QuboModel) {
    if model.exceeds_var_cap() {
        eprintln!(
            "note: model has {} variables, beyond the {}-variable hardware cap",
            model.n(),
            qubokit_core::qubo::DEFAULT_VAR_CAP
        );
    }
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing '{}'", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<i32> {
    let text = match args.family {
        FamilyArg::PureQubo => {
            let spec = PureQuboSpec {
                n: args.size,
                density: args.density.unwrap_or(0.1),
                coeff_low: args.coeff_low,
                coeff_high: args.coeff_high,
                seed: args.seed,
            };
            write_model(&gen_pure_qubo(&spec)?)
        }
        FamilyArg::Qcpp => {
            let spec = QcppSpec {
                n_vertices: args.size,
                density: args.density.context("--density is required for qcpp")?,
                seed: args.seed,
            };
            write_instance(&ProblemInstance::Qcpp(gen_qcpp(&spec)?))
        }
        FamilyArg::Selcol => {
            let spec = SelColSpec {
                n_vertices: args.size,
                density: args.density.context("--density is required for selcol")?,
                cluster_size_low: args.cluster_low.context("--cluster-low is required for selcol")?,
                cluster_size_high: args
                    .cluster_high
                    .context("--cluster-high is required for selcol")?,
                seed: args.seed,
            };
            write_instance(&ProblemInstance::SelCol(gen_selcol(&spec)?))
        }
    };
    write_or_print(&args.out, &text)?;
    Ok(0)
}

fn cmd_encode(args: EncodeArgs) -> Result<i32> {
    let loaded = load_input(&args.input, args.input_format, false)?;
    let Loaded::Instance(inst) = loaded else {
        bail!("'{}' is already a QUBO model", args.input.display());
    };
    let lambda = args.lambda.unwrap_or_else(|| inst.bench_lambda());
    if lambda <= 0.0 {
        bail!("penalty coefficient must be positive, got {lambda}");
    }
    let model = inst.encode(lambda);
    warn_var_cap(&model);
    let text = match args.format {
        ModelFormat::Native => write_model(&model),
        ModelFormat::Bqp => {
            let (text, constant) = bqp::write_bqp(&model);
            if constant != 0.0 {
                eprintln!(
                    "note: bqp has no constant slot; add {constant} to energies of this file"
                );
            }
            text
        }
    };
    write_or_print(&args.out, &text)?;
    Ok(0)
}

/// Feasibility, human-readable violations, solution payload, and
/// problem-space objective for a decoded state.
fn decode_state(
    inst: &ProblemInstance,
    state: &BinaryState,
) -> (bool, Vec<String>, serde_json::Value, Option<f64>) {
    fn strings<V: std::fmt::Display>(vs: &[V]) -> Vec<String> {
        vs.iter().map(|v| v.to_string()).collect()
    }
    match inst {
        ProblemInstance::Qap(i) => match decode_qap(i, state) {
            Decoded::Feasible(a) => {
                let obj = qap_objective(i, &a);
                (
                    true,
                    Vec::new(),
                    serde_json::json!({ "assignment": a.perm() }),
                    Some(obj),
                )
            }
            Decoded::Infeasible(vs) => (false, strings(&vs), serde_json::Value::Null, None),
        },
        ProblemInstance::Qcpp(i) => match decode_qcpp(i, state) {
            Decoded::Feasible(s) => {
                let obj = qcpp_objective(i, &s);
                let arcs: Vec<(usize, usize)> =
                    s.selected.iter().map(|&a| i.arcs()[a]).collect();
                (
                    true,
                    Vec::new(),
                    serde_json::json!({ "arcs": arcs, "cycles": s.cycles }),
                    Some(obj),
                )
            }
            Decoded::Infeasible(vs) => (false, strings(&vs), serde_json::Value::Null, None),
        },
        ProblemInstance::SelCol(i) => match decode_selcol(i, state) {
            Decoded::Feasible(s) => {
                let coloring: Vec<(usize, usize)> =
                    s.coloring.iter().map(|(&v, &c)| (v, c)).collect();
                (
                    true,
                    Vec::new(),
                    serde_json::json!({
                        "selection": s.selection,
                        "coloring": coloring,
                        "colors_used": s.colors_used,
                        "y_active": s.y_active,
                    }),
                    Some(s.colors_used as f64),
                )
            }
            Decoded::Infeasible(vs) => (false, strings(&vs), serde_json::Value::Null, None),
        },
    }
}

fn cmd_solve(args: SolveArgs) -> Result<i32> {
    let loaded = load_input(&args.input, args.input_format, args.maximize)?;
    let (model, lambda, inst) = prepare_model(&loaded, args.lambda)?;
    warn_var_cap(&model);
    let config = args.anneal.config(&model);
    let result = anneal_threads(&model, &config, thread_count());
    let (feasible, violations, solution, objective) = match inst {
        Some(inst) => decode_state(inst, &result.best_state),
        None => {
            let obj = if args.maximize {
                -result.best_energy
            } else {
                result.best_energy
            };
            (
                true,
                Vec::new(),
                serde_json::json!({ "state": result.best_state.to_string() }),
                Some(obj),
            )
        }
    };
    let report = RunReport {
        command: "solve",
        instance: stem_of(&args.input),
        solver_id: "da".into(),
        mode: Some(args.anneal.mode.name()),
        lambda,
        seed: Some(config.seed),
        iterations: Some(config.iterations),
        objective_sense: if args.maximize { "max" } else { "min" },
        best_energy: Some(result.best_energy),
        objective,
        feasible,
        violations,
        solution,
        flips_accepted: Some(result.flips_accepted),
        time_sec: effective_time(result.wall_time),
    };
    print_report(&report);
    Ok(if args.require_feasible && !feasible { 2 } else { 0 })
}

fn cmd_oracle(args: OracleArgs) -> Result<i32> {
    let loaded = load_input(&args.input, args.input_format, args.maximize)?;
    let started = Instant::now();
    let (best_energy, objective, feasible, violations, solution) = match &loaded {
        Loaded::Model(m) => {
            let (energy, state) = brute_qubo(m)?;
            let obj = if args.maximize { -energy } else { energy };
            (
                Some(energy),
                Some(obj),
                true,
                Vec::new(),
                serde_json::json!({ "state": state.to_string() }),
            )
        }
        Loaded::Instance(ProblemInstance::Qap(i)) => {
            let (cost, a) = brute_qap(i)?;
            (
                Some(cost),
                Some(cost),
                true,
                Vec::new(),
                serde_json::json!({ "assignment": a.perm() }),
            )
        }
        Loaded::Instance(ProblemInstance::Qcpp(i)) => match brute_qcpp(i)? {
            Some((cost, s)) => {
                let arcs: Vec<(usize, usize)> = s.selected.iter().map(|&a| i.arcs()[a]).collect();
                (
                    Some(cost),
                    Some(cost),
                    true,
                    Vec::new(),
                    serde_json::json!({ "arcs": arcs, "cycles": s.cycles }),
                )
            }
            None => (
                None,
                None,
                false,
                vec!["no cycle partition exists".into()],
                serde_json::Value::Null,
            ),
        },
        Loaded::Instance(ProblemInstance::SelCol(i)) => match brute_selcol(i)? {
            Some((k, s)) => {
                let coloring: Vec<(usize, usize)> =
                    s.coloring.iter().map(|(&v, &c)| (v, c)).collect();
                (
                    Some(k as f64),
                    Some(k as f64),
                    true,
                    Vec::new(),
                    serde_json::json!({
                        "selection": s.selection,
                        "coloring": coloring,
                        "colors_used": s.colors_used,
                    }),
                )
            }
            None => (
                None,
                None,
                false,
                vec!["no selection is colorable within the color budget".into()],
                serde_json::Value::Null,
            ),
        },
    };
    let report = RunReport {
        command: "oracle",
        instance: stem_of(&args.input),
        solver_id: "oracle".into(),
        mode: None,
        lambda: None,
        seed: None,
        iterations: None,
        objective_sense: if args.maximize { "max" } else { "min" },
        best_energy,
        objective,
        feasible,
        violations,
        solution,
        flips_accepted: None,
        time_sec: effective_time(started.elapsed().as_secs_f64()),
    };
    print_report(&report);
    Ok(if args.require_feasible && !feasible { 2 } else { 0 })
}

fn cmd_reduce(args: ReduceArgs) -> Result<i32> {
    let loaded = load_input(&args.input, None, false)?;
    let Loaded::Instance(ProblemInstance::SelCol(inst)) = loaded else {
        bail!("reduce expects a selective-coloring instance");
    };
    let (reduced, report) = reduce(&inst);
    if let Some(out) = &args.out {
        let text = write_instance(&ProblemInstance::SelCol(reduced));
        fs::write(out, text).with_context(|| format!("writing '{}'", out.display()))?;
    }
    let coloring: Vec<(usize, usize)> = report.coloring.iter().map(|(&v, &c)| (v, c)).collect();
    println!(
        "{}",
        serde_json::to_string_pretty(&serde_json::json!({
            "selection": report.selection,
            "coloring": coloring,
            "greedy_colors": report.greedy_colors,
            "vars_before": report.vars_before,
            "vars_after": report.vars_after,
            "pct_reduction": report.pct_reduction,
        }))?
    );
    Ok(0)
}

/// One benchmark observation before the reference columns are filled in.
struct Draft {
    instance_id: String,
    solver_id: String,
    mode: String,
    lambda: Option<f64>,
    seed: Option<u64>,
    ub: Option<f64>,
    lb: Option<f64>,
    feasible: bool,
    time_sec: f64,
}

fn cmd_bench(args: BenchArgs) -> Result<i32> {
    let threads = thread_count();
    let mut drafts: Vec<Draft> = Vec::new();
    for input in &args.inputs {
        let instance_id = stem_of(input);
        let loaded = load_input(input, args.input_format, false)?;
        let (model, lambda, inst) = prepare_model(&loaded, args.lambda)?;
        warn_var_cap(&model);

        if args.oracle {
            let started = Instant::now();
            let (ub, feasible) = match &loaded {
                Loaded::Model(m) => {
                    let (energy, _) = brute_qubo(m)
                        .with_context(|| format!("oracle on '{instance_id}'"))?;
                    (Some(energy), true)
                }
                Loaded::Instance(ProblemInstance::Qap(i)) => {
                    let (cost, _) = brute_qap(i)
                        .with_context(|| format!("oracle on '{instance_id}'"))?;
                    (Some(cost), true)
                }
                Loaded::Instance(ProblemInstance::Qcpp(i)) => {
                    match brute_qcpp(i).with_context(|| format!("oracle on '{instance_id}'"))? {
                        Some((cost, _)) => (Some(cost), true),
                        None => (None, false),
                    }
                }
                Loaded::Instance(ProblemInstance::SelCol(i)) => {
                    match brute_selcol(i).with_context(|| format!("oracle on '{instance_id}'"))? {
                        Some((k, _)) => (Some(k as f64), true),
                        None => (None, false),
                    }
                }
            };
            drafts.push(Draft {
                instance_id: instance_id.clone(),
                solver_id: "oracle".into(),
                mode: "exact".into(),
                lambda: None,
                seed: None,
                ub,
                lb: ub,
                feasible,
                time_sec: started.elapsed().as_secs_f64(),
            });
        }

        for &mode in &args.modes {
            for s in 0..args.seeds {
                let mut cfg =
                    AnnealConfig::for_model(&model, mode.core(), args.iters, args.seed + s);
                cfg.replicas = args.replicas;
                cfg.exchange_interval = args.exchange_interval;
                let result = anneal_threads(&model, &cfg, threads);
                let (ub, feasible) = match inst {
                    Some(inst) => {
                        let obj = inst.decode_objective(&result.best_state);
                        (obj, obj.is_some())
                    }
                    None => (Some(result.best_energy), true),
                };
                drafts.push(Draft {
                    instance_id: instance_id.clone(),
                    solver_id: mode.solver_id().into(),
                    mode: mode.name().into(),
                    lambda,
                    seed: Some(cfg.seed),
                    ub,
                    lb: None,
                    feasible,
                    time_sec: result.wall_time,
                });
            }
        }
    }

    let ref_solver = args
        .ref_solver
        .clone()
        .unwrap_or_else(|| if args.oracle { "oracle".into() } else { "da-normal".into() });

    // best reference ub and best certified lb per instance
    let mut ref_ub: Vec<(String, f64)> = Vec::new();
    let mut lb_best: Vec<(String, f64)> = Vec::new();
    for d in &drafts {
        if d.solver_id == ref_solver {
            if let Some(ub) = d.ub {
                match ref_ub.iter_mut().find(|(id, _)| *id == d.instance_id) {
                    Some((_, best)) => *best = best.min(ub),
                    None => ref_ub.push((d.instance_id.clone(), ub)),
                }
            }
        }
        if let Some(lb) = d.lb {
            match lb_best.iter_mut().find(|(id, _)| *id == d.instance_id) {
                Some((_, best)) => *best = best.max(lb),
                None => lb_best.push((d.instance_id.clone(), lb)),
            }
        }
    }
    let lookup = |table: &[(String, f64)], id: &str| -> Option<f64> {
        table.iter().find(|(i, _)| i == id).map(|&(_, v)| v)
    };

    let rows: Vec<CsvRow> = drafts
        .iter()
        .map(|d| CsvRow {
            instance_id: d.instance_id.clone(),
            solver_id: d.solver_id.clone(),
            mode: d.mode.clone(),
            lambda: d.lambda,
            seed: d.seed,
            ub: d.ub,
            feasible: d.feasible,
            time_sec: d.time_sec,
            norm_diff: d.ub.and_then(|ub| {
                lookup(&ref_ub, &d.instance_id).and_then(|r| norm_diff(ub, r).ok())
            }),
            pct_gap: d.ub.and_then(|ub| {
                lookup(&lb_best, &d.instance_id).and_then(|lb| pct_gap(ub, lb).ok())
            }),
        })
        .collect();
    let records: Vec<RunRecord> = drafts
        .iter()
        .map(|d| RunRecord {
            instance_id: d.instance_id.clone(),
            solver_id: d.solver_id.clone(),
            ub: d.ub,
            lb: d.lb,
            feasible: d.feasible,
            time: effective_time(d.time_sec),
            seed: d.seed.unwrap_or(0),
        })
        .collect();

    let csv = rows_to_csv(&rows);
    let summary = render_summary(&summarize(&records, &ref_solver)?);
    match &args.out {
        Some(path) => {
            fs::write(path, &csv).with_context(|| format!("writing '{}'", path.display()))?;
            print!("{summary}");
        }
        None => {
            print!("{csv}");
            eprint!("{summary}");
        }
    }
    Ok(0)
}

fn render_summary(summary: &Summary) -> String {
    let mut out = String::from(
        "solver_id,records,avg_ub,avg_norm_diff,avg_time_sec,pct_feasible,excluded_norm_diff\n",
    );
    for row in &summary.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.solver_id,
            row.records,
            row.avg_ub.map(|v| format!("{v}")).unwrap_or_default(),
            row.avg_norm_diff.map(|v| format!("{v}")).unwrap_or_default(),
            row.avg_time,
            row.pct_feasible,
            row.excluded_norm_diff,
        ));
    }
    out
}

fn cmd_sweep(args: SweepArgs) -> Result<i32> {
    if args.lambdas.iter().any(|&l| l <= 0.0) {
        bail!("penalty coefficients must be positive");
    }
    let threads = thread_count();
    let mut instances = Vec::new();
    for input in &args.inputs {
        let loaded = load_input(input, args.input_format, false)?;
        let Loaded::Instance(inst) = loaded else {
            bail!(
                "'{}' is already a QUBO model; the sweep re-encodes instances",
                input.display()
            );
        };
        instances.push((stem_of(input), inst));
    }
    // annealing parameters are fixed across λ (scaled at the family default),
    // so the sweep isolates the penalty effect
    let base_cfg = {
        let (_, first) = &instances[0];
        let model = first.encode(first.bench_lambda());
        AnnealConfig::for_model(&model, Mode::Normal, args.iters, args.seed)
    };

    let mut rows: Vec<CsvRow> = Vec::new();
    #[derive(Default)]
    struct Cell {
        objectives: Vec<f64>,
        infeasible: usize,
    }
    let mut cells: Vec<((String, String), Cell)> = Vec::new();
    for (stem, inst) in &instances {
        for &lambda in &args.lambdas {
            let model = inst.encode(lambda);
            for mode in [ModeArg::Normal, ModeArg::Parallel] {
                let mut cfg = base_cfg.clone();
                cfg.mode = mode.core();
                cfg.replicas = args.replicas;
                cfg.exchange_interval = args.exchange_interval;
                let result = anneal_threads(&model, &cfg, threads);
                let ub = inst.decode_objective(&result.best_state);
                rows.push(CsvRow {
                    instance_id: stem.clone(),
                    solver_id: mode.solver_id().into(),
                    mode: mode.name().into(),
                    lambda: Some(lambda),
                    seed: Some(cfg.seed),
                    ub,
                    feasible: ub.is_some(),
                    time_sec: result.wall_time,
                    norm_diff: None,
                    pct_gap: None,
                });
                let key = (format!("{lambda}"), mode.solver_id().to_string());
                let cell = match cells.iter_mut().find(|(k, _)| *k == key) {
                    Some((_, c)) => c,
                    None => {
                        cells.push((key, Cell::default()));
                        &mut cells.last_mut().unwrap().1
                    }
                };
                match ub {
                    Some(v) => cell.objectives.push(v),
                    None => cell.infeasible += 1,
                }
            }
        }
    }

    let mut aggregate =
        String::from("lambda,solver_id,feasible_runs,infeasible_runs,avg_objective\n");
    for ((lambda, solver), cell) in &cells {
        let avg = if cell.objectives.is_empty() {
            String::new()
        } else {
            let mut sorted = cell.objectives.clone();
            sorted.sort_by(|a, b| a.total_cmp(b));
            format!("{}", sorted.iter().sum::<f64>() / sorted.len() as f64)
        };
        aggregate.push_str(&format!(
            "{lambda},{solver},{},{},{avg}\n",
            cell.objectives.len(),
            cell.infeasible
        ));
    }

    let csv = rows_to_csv(&rows);
    match &args.out {
        Some(path) => {
            fs::write(path, &csv).with_context(|| format!("writing '{}'", path.display()))?;
            print!("{aggregate}");
        }
        None => {
            print!("{csv}");
            eprint!("{aggregate}");
        }
    }
    Ok(0)
}

fn cmd_ordering(args: OrderingArgs) -> Result<i32> {
    let loaded = load_input(&args.input, args.input_format, false)?;
    let (model, lambda, _) = prepare_model(&loaded, args.lambda)?;
    let config = args.anneal.config(&model);
    let outcome = ordering_experiment(&model, args.perms, &config);
    let stem = stem_of(&args.input);
    let rows: Vec<CsvRow> = outcome
        .best_energies
        .iter()
        .zip(&outcome.wall_times)
        .enumerate()
        .map(|(k, (&energy, &time))| CsvRow {
            instance_id: format!("{stem}#p{k:03}"),
            solver_id: args.anneal.mode.solver_id().into(),
            mode: args.anneal.mode.name().into(),
            lambda,
            seed: Some(config.seed),
            ub: Some(energy),
            feasible: true,
            time_sec: time,
            norm_diff: None,
            pct_gap: None,
        })
        .collect();
    let csv = rows_to_csv(&rows);
    let spread = match outcome.pct_spread {
        Some(v) => format!("pct_spread,{v}\n"),
        None => "pct_spread,\n".into(),
    };
    match &args.out {
        Some(path) => {
            fs::write(path, &csv).with_context(|| format!("writing '{}'", path.display()))?;
            print!("{spread}");
        }
        None => {
            print!("{csv}");
            eprint!("{spread}");
        }
    }
    Ok(0)
}
