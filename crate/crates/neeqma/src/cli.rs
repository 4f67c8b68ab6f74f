//! Batch front end: ingest Hamiltonian and phase-angle files, run sweeps,
//! fit, predict, select minimal convergence parameters and emit plot-ready
//! CSV/JSON artifacts.
//!
//! Same config plus same seed gives byte-identical output files.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitting::{select_min_parameter, FitResult, SweepRow, SweepSeries, MAX_PARAM_DEFAULT};
use crate::oracle::{dense_operator, eigen_hermitian, eigen_overlaps, oracle_trotter_constants};
use crate::pauli::{parse_hamiltonian, PauliSum};
use crate::qsp::{
    delta_from_shift, fit_qsp, parse_phase_angles, qsp_err_model, sweep_qsp, PhaseAngleSet,
    QspErrorModel,
};
use crate::sim::{Shots, StateVector};
use crate::trotter::{fit_trotter, sweep_trotter, ObservableKind, TrotterErrorModel};

#[derive(Parser)]
#[command(
    name = "neeqma",
    about = "Extract convergence-law constants of iterative quantum-gate approximations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep an observable over the convergence parameter and write a CSV.
    Sweep(SweepArgs),
    /// Fit an equation-to-fit to a sweep and write the constants as JSON.
    Fit(FitArgs),
    /// Evaluate a fitted error model over a parameter range (CSV).
    Predict(PredictArgs),
    /// Print the smallest parameter meeting an error budget.
    Minparam(MinparamArgs),
    /// Dense-matrix ground truth: eigen-overlaps or error constants (JSON).
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Trotter,
    Qsp,
}

#[derive(Args, Debug)]
struct ProblemArgs {
    /// Hamiltonian file: `<coefficient> <pauli word>` per line
    #[arg(long)]
    ham: PathBuf,

    /// Initial basis state, e.g. 111000111000
    #[arg(long)]
    state: String,

    /// Simulation time
    #[arg(long)]
    time: Option<f64>,

    /// Readout-style time spec: t = 2 pi / (2 |lambda_max|) * 2^K
    #[arg(long, value_name = "K", conflicts_with = "time")]
    time_qpe: Option<u32>,

    /// Normalization |lambda_max| override (otherwise computed by the oracle)
    #[arg(long)]
    norm: Option<f64>,

    /// Shot budget: a count or `exact`
    #[arg(long)]
    shots: Option<Shots>,

    /// Base RNG seed; sweep points draw from per-point substreams
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum)]
    mode: Mode,

    #[command(flatten)]
    problem: ProblemArgs,

    /// Observable (trotter mode): real|imag|phase2|fidelity[:j]|energy
    #[arg(long, default_value = "real")]
    obs: String,

    /// Comma-separated, strictly increasing Trotter numbers
    #[arg(long)]
    grid: Option<String>,

    /// Phase-angle file (qsp mode)
    #[arg(long)]
    angles: Option<PathBuf>,

    /// Normalized eigenvalue shift (qsp mode)
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    shift: f64,

    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[arg(long, value_enum)]
    mode: Mode,

    /// Fit a previously swept CSV instead of sweeping in-process
    #[arg(long)]
    series: Option<PathBuf>,

    #[command(flatten)]
    problem: FitProblemArgs,

    /// Observable to sweep and fit (trotter): real|imag|phase2|fidelity[:j]|energy|both
    #[arg(long, default_value = "both")]
    obs: String,

    #[arg(long)]
    grid: Option<String>,

    /// Phase-angle file (qsp mode)
    #[arg(long)]
    angles: Option<PathBuf>,

    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    shift: f64,

    /// Number of spectral pairs in the qsp model
    #[arg(long, default_value_t = 3)]
    m: usize,

    /// Extra seeded optimizer restarts (qsp / nonlinear fits)
    #[arg(long, default_value_t = 8)]
    restarts: usize,

    #[arg(long)]
    out: PathBuf,
}

/// Like [`ProblemArgs`] but everything optional: a fit can run from a CSV
/// without touching the simulator.
#[derive(Args, Debug)]
struct FitProblemArgs {
    #[arg(long)]
    ham: Option<PathBuf>,

    #[arg(long)]
    state: Option<String>,

    #[arg(long)]
    time: Option<f64>,

    #[arg(long, value_name = "K", conflicts_with = "time")]
    time_qpe: Option<u32>,

    #[arg(long)]
    norm: Option<f64>,

    #[arg(long)]
    shots: Option<Shots>,

    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct PredictArgs {
    /// Fit JSON produced by `neeqma fit`
    #[arg(long)]
    model: PathBuf,

    /// Parameter range `LO:HI` (inclusive)
    #[arg(long)]
    range: String,

    /// Phase-angle file (needed for qsp models)
    #[arg(long)]
    angles: Option<PathBuf>,

    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct MinparamArgs {
    #[arg(long)]
    model: PathBuf,

    /// Gate-error budget
    #[arg(long)]
    epsilon: f64,

    #[arg(long, default_value_t = MAX_PARAM_DEFAULT)]
    max_param: u32,

    #[arg(long)]
    angles: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    ham: PathBuf,

    #[arg(long)]
    state: String,

    /// overlaps | constants
    #[arg(long)]
    kind: String,

    #[arg(long)]
    time: Option<f64>,

    #[arg(long, value_name = "K", conflicts_with = "time")]
    time_qpe: Option<u32>,

    #[arg(long)]
    norm: Option<f64>,

    /// Trotter-number pair for constant extraction, e.g. 16,32
    #[arg(long, default_value = "16,32")]
    pair: String,

    #[arg(long)]
    out: PathBuf,
}

/// Serialized fit artifact.
#[derive(Debug, Serialize, Deserialize)]
struct FitDocument {
    model: String,
    params: BTreeMap<String, f64>,
    cost: f64,
    grid: Vec<u32>,
    t_ref: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
}

/// Entry point used by the binary.
pub fn run() -> i32 {
    run_command(std::env::args_os())
}

/// Parse and execute an argument vector; returns the process exit code
/// (0 on success, 2 on input errors).
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_thread_pool();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.exit_code() == 0 { 0 } else { 2 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn init_thread_pool() {
    if let Ok(v) = std::env::var("NEEQMA_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Minparam(args) => cmd_minparam(args),
        Command::Oracle(args) => cmd_oracle(args),
    }
}

fn load_hamiltonian(path: &Path) -> Result<PauliSum> {
    let text = std::fs::read_to_string(path)?;
    parse_hamiltonian(&text)
}

fn load_angles(path: &Path) -> Result<PhaseAngleSet> {
    let text = std::fs::read_to_string(path)?;
    parse_phase_angles(&text)
}

/// Largest eigenvalue magnitude, by dense diagonalization.
fn oracle_norm(h: &PauliSum) -> Result<f64> {
    let eig = eigen_hermitian(&dense_operator(h))?;
    Ok(eig.values.iter().fold(0.0f64, |m, l| m.max(l.abs())))
}

fn resolve_norm(norm: Option<f64>, h: &PauliSum) -> Result<f64> {
    match norm {
        Some(v) if v > 0.0 => Ok(v),
        Some(_) => Err(Error::InvalidArgument("--norm must be positive".into())),
        None => oracle_norm(h),
    }
}

/// Pick the simulation time from `--time`, `--time-qpe K`, or the mode's
/// default (`t = pi / (2 |lambda_max|)` for qsp).
fn resolve_time(
    mode: Mode,
    time: Option<f64>,
    time_qpe: Option<u32>,
    norm: Option<f64>,
    h: &PauliSum,
) -> Result<f64> {
    if let Some(t) = time {
        return Ok(t);
    }
    if let Some(k) = time_qpe {
        let lam = resolve_norm(norm, h)?;
        return Ok(std::f64::consts::TAU / (2.0 * lam) * f64::powi(2.0, k as i32));
    }
    match mode {
        Mode::Qsp => {
            let lam = resolve_norm(norm, h)?;
            Ok(std::f64::consts::FRAC_PI_2 / lam)
        }
        Mode::Trotter => Err(Error::InvalidArgument(
            "missing --time or --time-qpe".into(),
        )),
    }
}

fn parse_grid(grid: &Option<String>) -> Result<Vec<u32>> {
    let Some(text) = grid else {
        return Ok(crate::trotter::DEFAULT_GRID.to_vec());
    };
    let values: Vec<u32> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("invalid grid entry '{t}'")))
        })
        .collect::<Result<_>>()?;
    if values.is_empty() {
        return Err(Error::EmptyInput("grid"));
    }
    Ok(values)
}

fn parse_range(range: &str) -> Result<(u32, u32)> {
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidArgument(format!(
            "range must be LO:HI, got '{range}'"
        )));
    }
    let lo: u32 = parts[0]
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("invalid range bound '{}'", parts[0])))?;
    let hi: u32 = parts[1]
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("invalid range bound '{}'", parts[1])))?;
    if lo == 0 || hi < lo {
        return Err(Error::InvalidArgument("range must satisfy 1 <= LO <= HI".into()));
    }
    Ok((lo, hi))
}

fn write_series_csv(path: &Path, series: &SweepSeries) -> Result<()> {
    let mut out = String::from("param,observable,estimate,stderr,shots\n");
    for row in series.rows() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.param,
            series.kind(),
            row.value,
            row.stderr,
            row.shots
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn read_series_csv(path: &Path) -> Result<SweepSeries> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::EmptyInput("series CSV"))?;
    if header.trim() != "param,observable,estimate,stderr,shots" {
        return Err(Error::Parse {
            line: 1,
            msg: "unexpected CSV header".into(),
        });
    }
    let mut kind: Option<String> = None;
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::Parse {
                line: line_no,
                msg: "expected 5 comma-separated fields".into(),
            });
        }
        let param: u32 = fields[0].parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("invalid param '{}'", fields[0]),
        })?;
        match &kind {
            None => kind = Some(fields[1].to_string()),
            Some(k) if k != fields[1] => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "mixed observables in one series".into(),
                })
            }
            _ => {}
        }
        let value: f64 = fields[2].parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("invalid estimate '{}'", fields[2]),
        })?;
        let stderr: f64 = fields[3].parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("invalid stderr '{}'", fields[3]),
        })?;
        let shots: Shots = fields[4].parse()?;
        rows.push(SweepRow {
            param,
            value,
            stderr,
            shots,
        });
    }
    let kind = kind.ok_or(Error::EmptyInput("series CSV"))?;
    SweepSeries::new(kind, rows)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidArgument(format!("serialization failed: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let h = load_hamiltonian(&args.problem.ham)?;
    let psi = StateVector::from_bits(&args.problem.state)?;
    if psi.num_qubits() != h.num_qubits() {
        return Err(Error::LengthMismatch {
            left: psi.num_qubits(),
            right: h.num_qubits(),
        });
    }
    let t = resolve_time(
        args.mode,
        args.problem.time,
        args.problem.time_qpe,
        args.problem.norm,
        &h,
    )?;
    let series = match args.mode {
        Mode::Trotter => {
            let kind = ObservableKind::parse(&args.obs)?;
            let grid = parse_grid(&args.grid)?;
            let shots = args.problem.shots.unwrap_or_else(|| kind.default_shots());
            sweep_trotter(&h, t, &psi, kind, &grid, shots, args.problem.seed)?
        }
        Mode::Qsp => {
            let angles_path = args.angles.as_ref().ok_or_else(|| {
                Error::InvalidArgument("qsp mode needs --angles".into())
            })?;
            let angleset = load_angles(angles_path)?;
            let shots = args
                .problem
                .shots
                .unwrap_or(Shots::Count(crate::trotter::DEFAULT_SHOTS));
            let delta = delta_from_shift(args.shift);
            sweep_qsp(&h, t, delta, &psi, &angleset, shots, args.problem.seed)?
        }
    };
    write_series_csv(&args.out, &series)
}

fn trotter_fit_document(fit: &FitResult, kind: ObservableKind, t_ref: f64) -> FitDocument {
    FitDocument {
        model: format!("trotter_{}", kind.tag()),
        params: fit.params.clone(),
        cost: fit.cost,
        grid: fit.grid.clone(),
        t_ref,
        delta: None,
    }
}

fn cmd_fit(args: FitArgs) -> Result<()> {
    match args.mode {
        Mode::Trotter => cmd_fit_trotter(args),
        Mode::Qsp => cmd_fit_qsp(args),
    }
}

fn cmd_fit_trotter(args: FitArgs) -> Result<()> {
    // a fit from a stored series needs no simulator run
    if let Some(series_path) = &args.series {
        let series = read_series_csv(series_path)?;
        let kind = ObservableKind::parse(series.kind())?;
        let t_ref = args.problem.time.ok_or_else(|| {
            Error::InvalidArgument("--time is required to tag the fit's reference time".into())
        })?;
        let fit = fit_trotter(&series, kind)?;
        return write_json(&args.out, &trotter_fit_document(&fit, kind, t_ref));
    }

    let ham = args
        .problem
        .ham
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("missing --ham (or --series)".into()))?;
    let state = args
        .problem
        .state
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("missing --state".into()))?;
    let h = load_hamiltonian(ham)?;
    let psi = StateVector::from_bits(state)?;
    let t = resolve_time(
        Mode::Trotter,
        args.problem.time,
        args.problem.time_qpe,
        args.problem.norm,
        &h,
    )?;
    let grid = parse_grid(&args.grid)?;
    let seed = args.problem.seed;

    if args.obs == "both" {
        let mut docs = Vec::new();
        for (idx, kind) in [ObservableKind::RealPart, ObservableKind::ImagPart]
            .into_iter()
            .enumerate()
        {
            let shots = args.problem.shots.unwrap_or_else(|| kind.default_shots());
            let series = sweep_trotter(
                &h,
                t,
                &psi,
                kind,
                &grid,
                shots,
                crate::sim::substream_seed(seed, 1000 + idx as u64),
            )?;
            docs.push(fit_trotter(&series, kind)?);
        }
        let model = TrotterErrorModel::from_fits(&docs[0], &docs[1], t)?;
        let mut params = BTreeMap::new();
        params.insert("cr".into(), model.cr);
        params.insert("ci".into(), model.ci);
        params.insert("er1".into(), model.er1);
        params.insert("ei1".into(), model.ei1);
        params.insert("er2".into(), model.er2);
        params.insert("ei2".into(), model.ei2);
        let doc = FitDocument {
            model: "trotter".into(),
            params,
            cost: docs[0].cost + docs[1].cost,
            grid,
            t_ref: t,
            delta: None,
        };
        return write_json(&args.out, &doc);
    }

    let kind = ObservableKind::parse(&args.obs)?;
    let shots = args.problem.shots.unwrap_or_else(|| kind.default_shots());
    let series = sweep_trotter(&h, t, &psi, kind, &grid, shots, seed)?;
    let fit = fit_trotter(&series, kind)?;
    write_json(&args.out, &trotter_fit_document(&fit, kind, t))
}

fn cmd_fit_qsp(args: FitArgs) -> Result<()> {
    let angles_path = args
        .angles
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("qsp mode needs --angles".into()))?;
    let angleset = load_angles(angles_path)?;
    let delta = delta_from_shift(args.shift);

    let (series, t) = if let Some(series_path) = &args.series {
        let t = args.problem.time.ok_or_else(|| {
            Error::InvalidArgument("--time is required to tag the fit's reference time".into())
        })?;
        (read_series_csv(series_path)?, t)
    } else {
        let ham = args
            .problem
            .ham
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("missing --ham (or --series)".into()))?;
        let state = args
            .problem
            .state
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("missing --state".into()))?;
        let h = load_hamiltonian(ham)?;
        let psi = StateVector::from_bits(state)?;
        let t = resolve_time(
            Mode::Qsp,
            args.problem.time,
            args.problem.time_qpe,
            args.problem.norm,
            &h,
        )?;
        let shots = args
            .problem
            .shots
            .unwrap_or(Shots::Count(crate::trotter::DEFAULT_SHOTS));
        (
            sweep_qsp(&h, t, delta, &psi, &angleset, shots, args.problem.seed)?,
            t,
        )
    };

    let (model, cost) = fit_qsp(
        &series,
        &angleset,
        args.m,
        t,
        delta,
        args.problem.seed,
        args.restarts,
        None,
    )?;
    let mut params = BTreeMap::new();
    for (i, (lambda, alpha)) in model.pairs.iter().enumerate() {
        params.insert(format!("lambda{i}"), *lambda);
        params.insert(format!("alpha{i}"), *alpha);
    }
    let doc = FitDocument {
        model: "qsp".into(),
        params,
        cost,
        grid: series.params(),
        t_ref: t,
        delta: Some(delta),
    };
    write_json(&args.out, &doc)
}

fn read_fit_document(path: &Path) -> Result<FitDocument> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidArgument(format!("invalid fit JSON: {e}")))
}

fn trotter_model_from_doc(doc: &FitDocument) -> Result<TrotterErrorModel> {
    let get = |name: &str| -> Result<f64> {
        doc.params
            .get(name)
            .copied()
            .ok_or_else(|| Error::MissingParam(name.to_string()))
    };
    Ok(TrotterErrorModel {
        cr: get("cr")?,
        ci: get("ci")?,
        er1: get("er1")?,
        ei1: get("ei1")?,
        er2: get("er2")?,
        ei2: get("ei2")?,
        t_ref: doc.t_ref,
    })
}

fn qsp_model_from_doc(doc: &FitDocument) -> Result<QspErrorModel> {
    let delta = doc
        .delta
        .ok_or_else(|| Error::InvalidArgument("qsp fit JSON lacks delta".into()))?;
    let mut pairs = Vec::new();
    for i in 0.. {
        let (Some(l), Some(a)) = (
            doc.params.get(&format!("lambda{i}")),
            doc.params.get(&format!("alpha{i}")),
        ) else {
            break;
        };
        pairs.push((*l, *a));
    }
    if pairs.is_empty() {
        return Err(Error::InvalidArgument(
            "qsp fit JSON carries no spectral pairs".into(),
        ));
    }
    QspErrorModel::new(pairs, delta / std::f64::consts::FRAC_PI_2, doc.t_ref)
}

/// Error-law evaluator shared by `predict` and `minparam`.
fn error_law(
    doc: &FitDocument,
    angles: &Option<PathBuf>,
) -> Result<Box<dyn Fn(u32) -> f64>> {
    if doc.model == "qsp" {
        let model = qsp_model_from_doc(doc)?;
        let path = angles
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("qsp models need --angles".into()))?;
        let angleset = load_angles(path)?;
        Ok(Box::new(move |d: u32| {
            qsp_err_model(&model, d as usize, &angleset).unwrap_or(f64::INFINITY)
        }))
    } else if doc.model == "trotter" {
        let model = trotter_model_from_doc(doc)?;
        Ok(Box::new(move |n: u32| model.predict_err(n)))
    } else {
        Err(Error::InvalidArgument(format!(
            "model '{}' has no error law; fit with --obs both or --mode qsp",
            doc.model
        )))
    }
}

fn cmd_predict(args: PredictArgs) -> Result<()> {
    let doc = read_fit_document(&args.model)?;
    let (lo, hi) = parse_range(&args.range)?;
    let err = error_law(&doc, &args.angles)?;
    let mut out = String::from("param,err\n");
    for p in lo..=hi {
        let e = err(p);
        if e.is_finite() {
            out.push_str(&format!("{p},{e}\n"));
        }
    }
    std::fs::write(&args.out, out)?;
    Ok(())
}

fn cmd_minparam(args: MinparamArgs) -> Result<()> {
    let doc = read_fit_document(&args.model)?;
    let err = error_law(&doc, &args.angles)?;
    match select_min_parameter(|p| err(p), args.epsilon, args.max_param)? {
        Some(p) => println!("{p}"),
        None => println!("none"),
    }
    Ok(())
}

#[derive(Serialize)]
struct OverlapRow {
    lambda: f64,
    alpha: f64,
}

#[derive(Serialize)]
#[serde(tag = "kind")]
enum OracleDocument {
    #[serde(rename = "eigen_overlaps")]
    Overlaps { rows: Vec<OverlapRow> },
    #[serde(rename = "trotter_constants")]
    Constants {
        c_re: f64,
        c_im: f64,
        e1_re: f64,
        e1_im: f64,
        e2_re: f64,
        e2_im: f64,
        t: f64,
        pair: (u32, u32),
    },
}

fn cmd_oracle(args: OracleArgs) -> Result<()> {
    let h = load_hamiltonian(&args.ham)?;
    let psi = StateVector::from_bits(&args.state)?;
    match args.kind.as_str() {
        "overlaps" => {
            let rows = eigen_overlaps(&h, &psi)?
                .into_iter()
                .map(|(lambda, alpha)| OverlapRow { lambda, alpha })
                .collect();
            write_json(&args.out, &OracleDocument::Overlaps { rows })
        }
        "constants" => {
            let t = resolve_time(Mode::Trotter, args.time, args.time_qpe, args.norm, &h)?;
            let parts: Vec<&str> = args.pair.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::InvalidArgument(
                    "--pair must be two Trotter numbers, e.g. 16,32".into(),
                ));
            }
            let n1: u32 = parts[0].trim().parse().map_err(|_| {
                Error::InvalidArgument(format!("invalid pair entry '{}'", parts[0]))
            })?;
            let n2: u32 = parts[1].trim().parse().map_err(|_| {
                Error::InvalidArgument(format!("invalid pair entry '{}'", parts[1]))
            })?;
            let (c, e1, e2) = oracle_trotter_constants(&h, t, &psi, (n1, n2))?;
            write_json(
                &args.out,
                &OracleDocument::Constants {
                    c_re: c.re,
                    c_im: c.im,
                    e1_re: e1.re,
                    e1_im: e1.im,
                    e2_re: e2.re,
                    e2_im: e2.im,
                    t,
                    pair: (n1, n2),
                },
            )
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown oracle kind '{other}' (expected overlaps|constants)"
        ))),
    }
}
