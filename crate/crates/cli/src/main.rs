//! `deltawell`: bound states of a one-dimensional Schrödinger particle with a
//! flat left half-line, a rising right half-line (linear, parabolic, or
//! exponential), and a delta pin at the interface.
//!
//! Four subcommands, all driven by one TOML job file plus `--param`
//! overrides: `solve` (spectrum → CSV), `figure` (matching-curve samples per
//! case → CSV), `compare` (spectrum vs an independent finite-difference
//! eigensolver), `reduce` (print the dimensionless model and stop).
//!
//! Every data file gets a JSON sidecar carrying the effective-config hash,
//! and identical configs produce byte-identical outputs — no timestamps,
//! locale-independent number formatting.
//!
//! Exit codes: 0 success, 2 config error, 3 solver error, 4 comparison
//! tolerance failure.

mod config;
mod format;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use deltawell_core::units::restore_energy;
use deltawell_core::{
    oracle, DimensionlessModel, Error as SolverError, ExecPolicy, QuantizationProblem,
};
use serde::Serialize;

use config::{ConfigError, JobConfig};
use format::format_float;

/// The six standard matching-curve cases `(u0, gamma)`, lettered a..f.
const DEFAULT_CASES: [[f64; 2]; 6] = [
    [-1.0, 5.0],
    [-1.0, 10.0],
    [0.0, 5.0],
    [0.0, 10.0],
    [1.0, 5.0],
    [1.0, 10.0],
];

#[derive(Parser)]
#[command(
    name = "deltawell",
    version,
    about = "Bound states of a flat-to-graded interface with a delta pin"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the spectrum; write spectrum.csv and spectrum.json.
    Solve(JobArgs),
    /// Sample both sides of the matching condition for each case; write
    /// figure_<letter>.{csv,json}.
    Figure(JobArgs),
    /// Cross-check the root finder against the finite-difference
    /// eigensolver; write comparison.{csv,json}.
    Compare(JobArgs),
    /// Print the dimensionless model for this job and stop.
    Reduce(JobArgs),
}

#[derive(Args)]
struct JobArgs {
    /// Job description (TOML).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Directory for data files (created if missing).
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Override one config field by dotted path, e.g.
    /// `--param dimensionless.u0=-1`. Repeatable; flags win over the file.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

enum Failure {
    Io(String),
    Config(ConfigError),
    Solver(SolverError),
    Tolerance(String),
}

impl Failure {
    fn report(&self) -> (u8, String) {
        match self {
            Failure::Io(m) => (1, m.clone()),
            Failure::Config(e) => (2, format!("config error: {e}")),
            Failure::Solver(e) => (3, format!("solver error: {e}")),
            Failure::Tolerance(m) => (4, m.clone()),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Failure {
        Failure::Config(e)
    }
}

/// A subcommand's implementation: effective config + output directory.
type CommandFn = fn(&JobConfig, &Path) -> Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, run): (&JobArgs, CommandFn) = match &cli.command {
        Command::Solve(a) => (a, cmd_solve),
        Command::Figure(a) => (a, cmd_figure),
        Command::Compare(a) => (a, cmd_compare),
        Command::Reduce(a) => (a, cmd_reduce),
    };
    let result = config::load(&args.config, &args.params)
        .map_err(Failure::from)
        .and_then(|cfg| run(&cfg, &args.out));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, message) = f.report();
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

/// Root finder with the job's solver options applied. Rejected options are
/// configuration mistakes, not solver failures.
fn build_problem(
    cfg: &JobConfig,
    model: DimensionlessModel,
) -> Result<QuantizationProblem, Failure> {
    let as_config = |e: SolverError| Failure::Config(ConfigError(format!("[solver]: {e}")));
    let mut p = QuantizationProblem::new(model);
    if let Some(d) = cfg.solver.delta_max {
        p = p.with_delta_max(d).map_err(as_config)?;
    }
    p = p.with_margin(cfg.solver.margin).map_err(as_config)?;
    p = p.with_root_tol(cfg.solver.root_tol).map_err(as_config)?;
    if let Some(s) = cfg.solver.scan_step {
        p = p.with_scan_step(s).map_err(as_config)?;
    }
    Ok(p)
}

#[derive(Serialize)]
struct ModelMeta {
    kind: &'static str,
    u0: f64,
    gamma: f64,
    a: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    length_unit: f64,
}

impl ModelMeta {
    fn of(m: &DimensionlessModel) -> ModelMeta {
        ModelMeta {
            kind: m.kind.as_str(),
            u0: m.u0,
            gamma: m.gamma,
            a: m.a,
            b: m.b,
            length_unit: m.length_unit,
        }
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    fs::create_dir_all(dir)
        .map_err(|e| Failure::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents)
        .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("sidecar serializes");
    text.push('\n');
    write_file(dir, name, &text)
}

fn cmd_reduce(cfg: &JobConfig, _out: &Path) -> Result<(), Failure> {
    let (model, _) = cfg.build_model()?;
    println!("kind = {}", model.kind.as_str());
    println!("u0 = {}", format_float(model.u0));
    println!("gamma = {}", format_float(model.gamma));
    println!("a = {}", format_float(model.a));
    if let Some(b) = model.b {
        println!("b = {}", format_float(b));
    }
    println!("length_unit = {}", format_float(model.length_unit));
    Ok(())
}

fn cmd_solve(cfg: &JobConfig, out: &Path) -> Result<(), Failure> {
    let (model, params) = cfg.build_model()?;
    let problem = build_problem(cfg, model)?;
    let states = problem.find_roots().map_err(Failure::Solver)?;

    let mut csv = String::from("j,delta,epsilon,alpha,residual");
    if params.is_some() {
        csv.push_str(",E_physical");
    }
    csv.push('\n');
    for s in &states {
        csv.push_str(&format!(
            "{},{},{},{},{}",
            s.index,
            format_float(s.delta),
            format_float(s.epsilon),
            format_float(s.alpha),
            format_float(s.residual),
        ));
        if let Some(p) = &params {
            csv.push(',');
            csv.push_str(&format_float(restore_energy(&model, p, s.epsilon)));
        }
        csv.push('\n');
    }
    write_file(out, "spectrum.csv", &csv)?;

    #[derive(Serialize)]
    struct Meta {
        command: &'static str,
        config_hash: String,
        mode: &'static str,
        model: ModelMeta,
        count: usize,
        files: [&'static str; 1],
    }
    let meta = Meta {
        command: "solve",
        config_hash: cfg.hash(),
        mode: cfg.mode.as_str(),
        model: ModelMeta::of(&model),
        count: states.len(),
        files: ["spectrum.csv"],
    };
    write_json(out, "spectrum.json", &meta)
}

fn cmd_figure(cfg: &JobConfig, out: &Path) -> Result<(), Failure> {
    let (base, _) = cfg.build_model()?;
    let cases = cfg
        .figure
        .cases
        .clone()
        .unwrap_or_else(|| DEFAULT_CASES.to_vec());
    let hash = cfg.hash();

    for (i, case) in cases.iter().enumerate() {
        let letter = (b'a' + i as u8) as char;
        let model =
            DimensionlessModel::new(base.kind, case[0], case[1], base.a, base.b).map_err(|e| {
                Failure::Config(ConfigError(format!(
                    "figure case {letter} (u0 = {}, gamma = {}): {e}",
                    case[0], case[1]
                )))
            })?;
        let problem = build_problem(cfg, model)?;
        let data = problem
            .graphical_data(cfg.output.samples, None)
            .map_err(Failure::Solver)?;

        // The library masks only samples numerically on top of a pole; for
        // plotting, also blank anything within one sample spacing so the
        // drawn curve always breaks between samples that straddle a pole.
        let spacing =
            (data.deltas[data.deltas.len() - 1] - data.deltas[0]) / (data.deltas.len() - 1) as f64;
        let mut csv = String::from("delta,lhs,rhs,is_pole_gap\n");
        for j in 0..data.deltas.len() {
            let near_pole = data
                .poles
                .iter()
                .any(|p| (data.deltas[j] - p).abs() < spacing);
            let (lhs, gap) = match (data.lhs[j], near_pole) {
                (Some(v), false) => (format_float(v), 0),
                _ => (String::new(), 1),
            };
            csv.push_str(&format!(
                "{},{},{},{}\n",
                format_float(data.deltas[j]),
                lhs,
                format_float(data.rhs[j]),
                gap,
            ));
        }
        let csv_name = format!("figure_{letter}.csv");
        write_file(out, &csv_name, &csv)?;

        #[derive(Serialize)]
        struct Meta {
            command: &'static str,
            config_hash: String,
            case: char,
            model: ModelMeta,
            samples: usize,
            poles: Vec<f64>,
            intersections: Vec<f64>,
            files: [String; 1],
        }
        let meta = Meta {
            command: "figure",
            config_hash: hash.clone(),
            case: letter,
            model: ModelMeta::of(&model),
            samples: cfg.output.samples,
            poles: data.poles,
            intersections: data.intersections,
            files: [csv_name],
        };
        write_json(out, &format!("figure_{letter}.json"), &meta)?;
    }
    Ok(())
}

fn cmd_compare(cfg: &JobConfig, out: &Path) -> Result<(), Failure> {
    let (model, _) = cfg.build_model()?;
    let problem = build_problem(cfg, model)?;
    let states = problem.find_roots().map_err(Failure::Solver)?;

    let as_config = |e: SolverError| Failure::Config(ConfigError(format!("[oracle]: {e}")));
    let h = cfg.oracle.h;
    let grid = match (cfg.oracle.q_left, cfg.oracle.q_right) {
        (Some(l), Some(r)) => oracle::Grid::new(h, l, r),
        _ => oracle::Grid::default_for(&model, h),
    }
    .map_err(as_config)?;
    let fine = oracle::Grid::new(h / 2.0, grid.q_left(), grid.q_right()).map_err(as_config)?;

    // Eigenvalues only — the comparison never looks at the vectors.
    let cutoff = model.u_left();
    let policy = ExecPolicy::default();
    let coarse_evs = oracle::assemble(&model, &grid).eigenvalues_below(cutoff, policy);
    let fine_evs = oracle::assemble(&model, &fine).eigenvalues_below(cutoff, policy);

    let tol = cfg.compare.tolerance;
    let mut csv = String::from(
        "j,epsilon_quantize,epsilon_oracle,abs_diff,epsilon_richardson,abs_diff_richardson,pass\n",
    );
    let mut max_diff: Option<f64> = None;
    let mut max_diff_richardson: Option<f64> = None;
    let mut all_rows_pass = true;
    for (i, s) in states.iter().enumerate() {
        let (Some(&e1), Some(&e2)) = (coarse_evs.get(i), fine_evs.get(i)) else {
            break;
        };
        let rich = oracle::richardson(e1, e2);
        let diff = (s.epsilon - e1).abs();
        let diff_rich = (s.epsilon - rich).abs();
        let row_pass = diff <= tol;
        all_rows_pass &= row_pass;
        max_diff = Some(max_diff.map_or(diff, |m: f64| m.max(diff)));
        max_diff_richardson =
            Some(max_diff_richardson.map_or(diff_rich, |m: f64| m.max(diff_rich)));
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            s.index,
            format_float(s.epsilon),
            format_float(e1),
            format_float(diff),
            format_float(rich),
            format_float(diff_rich),
            row_pass,
        ));
    }
    let counts_match = states.len() == coarse_evs.len() && states.len() == fine_evs.len();
    let pass = counts_match && all_rows_pass;
    write_file(out, "comparison.csv", &csv)?;

    #[derive(Serialize)]
    struct GridMeta {
        h: f64,
        q_left: f64,
        q_right: f64,
    }
    #[derive(Serialize)]
    struct Meta {
        command: &'static str,
        config_hash: String,
        model: ModelMeta,
        grid: GridMeta,
        tolerance: f64,
        count_quantize: usize,
        count_oracle: usize,
        max_abs_diff: Option<f64>,
        max_abs_diff_richardson: Option<f64>,
        pass: bool,
        files: [&'static str; 1],
    }
    let meta = Meta {
        command: "compare",
        config_hash: cfg.hash(),
        model: ModelMeta::of(&model),
        grid: GridMeta {
            h,
            q_left: grid.q_left(),
            q_right: grid.q_right(),
        },
        tolerance: tol,
        count_quantize: states.len(),
        count_oracle: coarse_evs.len(),
        max_abs_diff: max_diff,
        max_abs_diff_richardson: max_diff_richardson,
        pass,
        files: ["comparison.csv"],
    };
    write_json(out, "comparison.json", &meta)?;

    if !counts_match {
        return Err(Failure::Tolerance(format!(
            "comparison failed: {} roots from the quantization condition vs {} grid eigenvalues below the continuum edge",
            states.len(),
            coarse_evs.len()
        )));
    }
    if !all_rows_pass {
        return Err(Failure::Tolerance(format!(
            "comparison failed: max |Δε| = {} exceeds tolerance {} (see comparison.csv)",
            format_float(max_diff.unwrap_or(0.0)),
            format_float(tol)
        )));
    }
    Ok(())
}
