//! Argument parsing and subcommand pipelines.
//!
//! Each subcommand produces an optional payload (JSON or CSV) and a one-line
//! summary. Payloads go to `--out` when given, otherwise to stdout; the
//! binary prints summaries on stderr.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hoq_core::encode::{self, PairStrategy, Scheme};
use hoq_core::gadget;
use hoq_core::qaoa::{QaoaParams, QaoaProblem};
use hoq_core::{Coeff, ColoringProblem, SpinAssignment};
use serde::Serialize;

use crate::error::Result;
use crate::formats::{self, CircuitJson, ProblemJson, ProgramJson};
use crate::search::{self, ExperimentConfig, OptimizerConfig};
use crate::svg;

pub const BUILTIN_PROBLEMS: &[&str] = &["four-corners"];

pub fn builtin_problem(name: &str) -> Option<ColoringProblem> {
    match name {
        "four-corners" => Some(ColoringProblem::four_corners()),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSource {
    Builtin(String),
    File(PathBuf),
}

impl ProblemSource {
    pub fn load(&self) -> Result<ColoringProblem> {
        match self {
            ProblemSource::Builtin(name) => Ok(builtin_problem(name).expect("validated at parse time")),
            ProblemSource::File(path) => formats::read_json::<ProblemJson>(path)?.to_problem(),
        }
    }
}

fn parse_problem(s: &str) -> std::result::Result<ProblemSource, String> {
    if builtin_problem(s).is_some() {
        return Ok(ProblemSource::Builtin(s.to_owned()));
    }
    let path = PathBuf::from(s);
    if path.is_file() {
        Ok(ProblemSource::File(path))
    } else {
        Err(format!(
            "no built-in problem or file named {s:?} (built-ins: {})",
            BUILTIN_PROBLEMS.join(", ")
        ))
    }
}

fn parse_existing_file(s: &str) -> std::result::Result<PathBuf, String> {
    let path = PathBuf::from(s);
    if path.is_file() {
        Ok(path)
    } else {
        Err(format!("no such file: {s}"))
    }
}

fn parse_lambda(s: &str) -> std::result::Result<Coeff, String> {
    let c = formats::parse_coeff(s).map_err(|e| e.to_string())?;
    if *c.numer() > 0 {
        Ok(c)
    } else {
        Err(format!("lambda must be positive, got {s}"))
    }
}

fn parse_resolution(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(r) if r >= 2 => Ok(r),
        _ => Err(format!("resolution must be an integer ≥ 2, got {s}")),
    }
}

fn parse_positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(r) if r >= 1 => Ok(r),
        _ => Err(format!("expected a positive integer, got {s}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Binary,
    Reduced,
    Unary,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Binary => Scheme::Binary,
            SchemeArg::Reduced => Scheme::Reduced,
            SchemeArg::Unary => Scheme::Unary,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hoq", version, about = "Higher-order QAOA encodings of graph coloring")]
pub struct Cli {
    /// Worker threads for grid and experiment runs (0 = one per core).
    #[arg(long, env = "HOQ_THREADS", default_value_t = 0, global = true)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an Ising program and print it as JSON.
    Encode(EncodeArgs),
    /// Lower a program to CX/Rz gates.
    Compile(CompileArgs),
    /// Run QAOA at fixed angles.
    Simulate(SimulateArgs),
    /// Scan the p=1 landscape on a uniform grid.
    Gridsearch(GridArgs),
    /// Seeded optimizer runs over schemes and depths.
    Experiment(ExperimentArgs),
    /// Quadratize the binary encoding and report the certificate.
    Reduce(ReduceArgs),
    /// Brute-force coloring counts and ground states.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// Built-in problem name or path to a problem JSON file.
    #[arg(long, default_value = "four-corners", value_parser = parse_problem)]
    pub problem: ProblemSource,
}

#[derive(Debug, Clone, Args)]
pub struct EncodingArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,

    #[arg(long, value_enum, default_value_t = SchemeArg::Binary)]
    pub scheme: SchemeArg,

    /// Constraint weight for the reduced scheme, as an integer or p/q.
    #[arg(long, default_value = "3", value_parser = parse_lambda, allow_negative_numbers = true)]
    pub lambda: Coeff,
}

impl EncodingArgs {
    pub fn program(&self) -> Result<hoq_core::IsingProgram> {
        Ok(encode::encode(&self.problem.problem.load()?, self.scheme.into(), self.lambda)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub encoding: EncodingArgs,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    /// Lexicographic term order.
    Natural,
    /// Pair-sharing order that exposes CX cancellations.
    Greedy,
}

#[derive(Debug, Clone, Args)]
pub struct CompileArgs {
    #[command(flatten)]
    pub encoding: EncodingArgs,

    /// Compile a program JSON written by `encode` instead.
    #[arg(long, value_parser = parse_existing_file)]
    pub program: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = OrderArg::Greedy)]
    pub order: OrderArg,

    /// Emit the circuit before cancellation.
    #[arg(long)]
    pub no_cancel: bool,

    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Also write OpenQASM text at the angle given by --gamma.
    #[arg(long)]
    pub qasm: Option<PathBuf>,

    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub gamma: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub encoding: EncodingArgs,

    /// Layer count; inferred from the angle lists when omitted.
    #[arg(long)]
    pub p: Option<usize>,

    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub betas: Vec<f64>,

    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub gammas: Vec<f64>,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub encoding: EncodingArgs,

    #[arg(long, default_value_t = search::DEFAULT_RESOLUTION, value_parser = parse_resolution)]
    pub resolution: usize,

    /// Surface CSV destination.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Heatmap SVG destination.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,

    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [SchemeArg::Binary, SchemeArg::Reduced, SchemeArg::Unary])]
    pub schemes: Vec<SchemeArg>,

    #[arg(long, default_value_t = 5, value_parser = parse_positive)]
    pub pmax: usize,

    #[arg(long, default_value_t = 10, value_parser = parse_positive)]
    pub samples: usize,

    #[arg(long, default_value_t = search::DEFAULT_SEED)]
    pub seed: u64,

    /// Objective evaluations per optimizer run.
    #[arg(long, default_value_t = search::DEFAULT_BUDGET, value_parser = parse_positive)]
    pub budget: usize,

    #[arg(long, default_value = "3", value_parser = parse_lambda, allow_negative_numbers = true)]
    pub lambda: Coeff,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,

    #[arg(long, default_value = "3", value_parser = parse_lambda, allow_negative_numbers = true)]
    pub lambda: Coeff,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,

    /// Restrict to these schemes (default: all).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub schemes: Vec<SchemeArg>,

    #[arg(long, default_value = "3", value_parser = parse_lambda, allow_negative_numbers = true)]
    pub lambda: Coeff,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What a subcommand produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// Payload not already written to a file.
    pub stdout: Option<String>,
    pub summary: String,
}

fn emit(payload: String, out: Option<&Path>, summary: String) -> Result<Outcome> {
    match out {
        Some(path) => {
            formats::write_atomic(path, payload.as_bytes())?;
            Ok(Outcome { stdout: None, summary })
        }
        None => Ok(Outcome {
            stdout: Some(payload),
            summary,
        }),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Sizes rayon's global pool. A pool that already exists is left alone.
pub fn configure_threads(threads: usize) {
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Encode(a) => encode_cmd(a),
        Command::Compile(a) => compile_cmd(a),
        Command::Simulate(a) => simulate_cmd(a),
        Command::Gridsearch(a) => grid_cmd(a),
        Command::Experiment(a) => experiment_cmd(a),
        Command::Reduce(a) => reduce_cmd(a),
        Command::Oracle(a) => oracle_cmd(a),
    }
}

fn encode_cmd(a: &EncodeArgs) -> Result<Outcome> {
    let prog = a.encoding.program()?;
    let summary = format!("{} cx={}", encode::describe(&prog), gadget::ladder_cx_total(&prog.poly));
    emit(to_json(&ProgramJson::from_program(&prog))?, a.out.as_deref(), summary)
}

fn compile_cmd(a: &CompileArgs) -> Result<Outcome> {
    let prog = match &a.program {
        Some(path) => formats::read_json::<ProgramJson>(path)?.to_program()?,
        None => a.encoding.program()?,
    };
    let order = match a.order {
        OrderArg::Natural => gadget::natural_order(&prog.poly),
        OrderArg::Greedy => gadget::order_terms(&prog.poly),
    };
    let raw = gadget::compile(&prog.poly, &order)?;
    let cancelled = gadget::cancel_pass(&raw);
    let circ = if a.no_cancel { &raw } else { &cancelled };
    if let Some(path) = &a.qasm {
        formats::write_atomic(path, formats::to_qasm(circ, a.gamma).as_bytes())?;
    }
    let summary = format!(
        "terms={} cx={} cx_after_cancel={} rz={}",
        prog.poly.non_constant_terms().count(),
        raw.cx_count(),
        cancelled.cx_count(),
        circ.rz_count()
    );
    emit(to_json(&CircuitJson::from_circuit(circ))?, a.out.as_deref(), summary)
}

#[derive(Debug, Serialize)]
struct SimulateJson {
    scheme: String,
    qubits: usize,
    p: usize,
    betas: Vec<f64>,
    gammas: Vec<f64>,
    expectation: f64,
    relative_error: f64,
    success_probability: f64,
    evaluations: usize,
    emin: f64,
    emax: f64,
    ground_states: usize,
}

fn simulate_cmd(a: &SimulateArgs) -> Result<Outcome> {
    let p = a.p.unwrap_or(a.betas.len());
    let (betas, gammas) = if p == 0 && a.betas.is_empty() && a.gammas.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        (a.betas.clone(), a.gammas.clone())
    };
    if betas.len() != p || gammas.len() != p {
        return Err(hoq_core::Error::ParamLength {
            layers: p,
            betas: betas.len(),
            gammas: gammas.len(),
        }
        .into());
    }
    let prog = a.encoding.program()?;
    let problem = QaoaProblem::new(&prog.poly.energy_table()?)?;
    let run = problem.run(&QaoaParams::new(betas, gammas)?)?;
    let summary = format!(
        "scheme={} p={p} expectation={} relative_error={} success_probability={}",
        prog.scheme, run.expectation, run.relative_error, run.success_probability
    );
    let json = SimulateJson {
        scheme: prog.scheme.name().to_owned(),
        qubits: prog.num_qubits(),
        p,
        betas: run.params.betas().to_vec(),
        gammas: run.params.gammas().to_vec(),
        expectation: run.expectation,
        relative_error: run.relative_error,
        success_probability: run.success_probability,
        evaluations: run.evaluations,
        emin: problem.emin(),
        emax: problem.emax(),
        ground_states: problem.ground_set().len(),
    };
    emit(to_json(&json)?, a.out.as_deref(), summary)
}

fn grid_cmd(a: &GridArgs) -> Result<Outcome> {
    let prog = a.encoding.program()?;
    let problem = QaoaProblem::new(&prog.poly.energy_table()?)?;
    let grid = search::grid_search(&problem, a.resolution, search::BETA_RANGE, search::GAMMA_RANGE)?;
    if let Some(path) = &a.svg {
        formats::write_atomic(path, svg::heatmap(&grid).as_bytes())?;
    }
    let b = &grid.best;
    let summary = format!(
        "scheme={} resolution={} best_beta={} best_gamma={} relative_error={} success_probability={}",
        prog.scheme, grid.resolution, b.beta, b.gamma, b.relative_error, b.success_probability
    );
    emit(formats::surface_csv(&grid)?, a.out.as_deref(), summary)
}

fn experiment_cmd(a: &ExperimentArgs) -> Result<Outcome> {
    let problem = a.problem.problem.load()?;
    let config = ExperimentConfig {
        schemes: a.schemes.iter().map(|&s| s.into()).collect(),
        p_max: a.pmax,
        samples: a.samples,
        seed: a.seed,
        lambda: a.lambda,
        optimizer: OptimizerConfig {
            budget: a.budget,
            ..Default::default()
        },
    };
    let result = search::experiment(&problem, &config)?;
    let opt = &config.optimizer;
    let summary = format!(
        "records={} filtered={} seed={} optimizer=cobyla budget={} rhobeg={}*range xtol={}",
        result.records.len(),
        result.filtered.iter().filter(|f| **f).count(),
        config.seed,
        opt.budget,
        opt.rho_fraction,
        opt.xtol
    );
    emit(formats::results_csv(&result)?, a.out.as_deref(), summary)
}

#[derive(Debug, Serialize)]
struct SubstitutionJson {
    left: usize,
    right: usize,
    aux: usize,
}

#[derive(Debug, Serialize)]
struct ReduceJson {
    lambda: String,
    safe_lambda: Option<i64>,
    original_qubits: usize,
    qubits: usize,
    quadratic_terms: usize,
    cx: usize,
    substitutions: Vec<SubstitutionJson>,
    program: ProgramJson,
}

fn reduce_cmd(a: &ReduceArgs) -> Result<Outcome> {
    let binary = encode::encode_binary(&a.problem.problem.load()?)?;
    let (mut prog, cert) = encode::reduce_order(&binary, a.lambda, &PairStrategy::MostFrequent)?;
    prog.scheme = Scheme::Reduced;
    prog.lambda = Some(a.lambda);
    let json = ReduceJson {
        lambda: formats::coeff_to_string(a.lambda),
        safe_lambda: cert.safe_lambda,
        original_qubits: cert.original_qubits,
        qubits: prog.num_qubits(),
        quadratic_terms: prog.poly.count_terms_of_degree(2),
        cx: gadget::ladder_cx_total(&prog.poly),
        substitutions: cert
            .substitutions
            .iter()
            .map(|s| SubstitutionJson {
                left: s.left,
                right: s.right,
                aux: s.aux,
            })
            .collect(),
        program: ProgramJson::from_program(&prog),
    };
    let safe = cert.safe_lambda.map_or_else(|| "unknown".to_owned(), |s| s.to_string());
    let summary = format!(
        "substitutions={} qubits={} quadratic_terms={} cx={} safe_lambda={safe}",
        json.substitutions.len(),
        json.qubits,
        json.quadratic_terms,
        json.cx
    );
    emit(to_json(&json)?, a.out.as_deref(), summary)
}

#[derive(Debug, Serialize)]
struct SchemeOracleJson {
    scheme: String,
    qubits: usize,
    emin: String,
    emax: String,
    ground_states: usize,
    /// Ground states that decode to proper colorings.
    proper_ground_states: usize,
}

#[derive(Debug, Serialize)]
struct OracleJson {
    problem: ProblemJson,
    proper_colorings: u64,
    schemes: Vec<SchemeOracleJson>,
}

fn oracle_cmd(a: &OracleArgs) -> Result<Outcome> {
    let problem = a.problem.problem.load()?;
    let schemes: Vec<Scheme> = if a.schemes.is_empty() {
        Scheme::ALL.to_vec()
    } else {
        a.schemes.iter().map(|&s| s.into()).collect()
    };
    let proper = problem.count_proper()?;
    let mut rows = Vec::new();
    for scheme in schemes {
        let prog = encode::encode(&problem, scheme, a.lambda)?;
        let table = prog.poly.energy_table()?;
        let ground = table.ground_states();
        let mut proper_ground = 0;
        for &g in &ground {
            let assignment = SpinAssignment::from_index(prog.num_qubits(), g);
            if let Some(col) = prog.decode(&assignment)? {
                if problem.is_proper(&col)? {
                    proper_ground += 1;
                }
            }
        }
        rows.push(SchemeOracleJson {
            scheme: scheme.name().to_owned(),
            qubits: prog.num_qubits(),
            emin: formats::coeff_to_string(table.min()),
            emax: formats::coeff_to_string(table.max()),
            ground_states: ground.len(),
            proper_ground_states: proper_ground,
        });
    }
    let mut summary = format!("proper_colorings={proper}");
    for r in &rows {
        summary.push_str(&format!(" {}_ground_states={}", r.scheme, r.ground_states));
    }
    let json = OracleJson {
        problem: ProblemJson::from_problem(&problem),
        proper_colorings: proper,
        schemes: rows,
    };
    emit(to_json(&json)?, a.out.as_deref(), summary)
}
