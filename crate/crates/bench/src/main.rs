//! `qls-bench`: command-line front end.
//!
//! Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 numerical
//! failure (including any record with status `error`).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qls_core::iterative::IterationControl;
use qls_core::problems::{nearest_power_of_two, read_problem, write_problem};
use qls_core::QlsProblem;
use qls_bench::records::to_csv_string;
use qls_bench::suite::{estimate_for, reference_solution, run_solver};
use qls_bench::trace::trace_csv;
use qls_bench::{
    emit_profile_svg, emit_records, load_records, performance_profile, report_table, run_suite, trace_residual_gap,
    BenchError, ExperimentConfig, Format, Result, RunStatus, SolverKind, DEFAULT_EPS,
};

#[derive(Parser)]
#[command(name = "qls-bench", version, about = "Run and report experiments on AᵀAx = Aᵀb + c solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write every problem of a config to a directory, one file per problem.
    Gen {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Solve one problem file with one solver and print x and a short report.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "CGLSI")]
        solver: SolverKind,
        #[command(flatten)]
        knobs: Knobs,
    },
    /// Run a config and write one record per (problem, solver).
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Defaults to the config's `output`, then to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<Format>,
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated solver names; replaces the config's list.
        #[arg(long, value_delimiter = ',')]
        solver: Option<Vec<SolverKind>>,
        #[command(flatten)]
        knobs: Knobs,
    },
    /// Performance profile of a record file: SVG plus a sibling CSV.
    Profile {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Restrict the profile to these solvers.
        #[arg(long, value_delimiter = ',')]
        solver: Option<Vec<SolverKind>>,
    },
    /// Forward-error table from records of the ten table problems.
    Table {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-iteration CGLSI residual gap of one problem file, as CSV.
    Trace {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        knobs: Knobs,
    },
}

#[derive(Args, Clone, Default)]
struct Knobs {
    /// Regularization weight; rounded to a power of two with a warning.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    maxit: Option<usize>,
    /// Steady-state window of the iterative solvers.
    #[arg(long)]
    window: Option<usize>,
}

impl Knobs {
    fn eps(&self) -> Result<Option<f64>> {
        let Some(eps) = self.eps else { return Ok(None) };
        let (rounded, changed) = nearest_power_of_two(eps).map_err(|e| BenchError::config("--eps", e.to_string()))?;
        if changed {
            eprintln!("warning: --eps {eps:e} is not a power of two; using {rounded:e}");
        }
        Ok(Some(rounded))
    }

    fn apply(&self, cfg: &mut ExperimentConfig) -> Result<()> {
        if let Some(eps) = self.eps()? {
            cfg.eps = eps;
        }
        if let Some(tol) = self.tol {
            cfg.tol = tol;
        }
        if let Some(it) = self.maxit {
            cfg.max_iterations = Some(it);
        }
        if let Some(w) = self.window {
            cfg.stagnation_window = Some(w);
        }
        cfg.validate()
    }

    fn control(&self) -> Result<IterationControl> {
        let mut ctrl = IterationControl::default();
        if let Some(tol) = self.tol {
            ctrl = ctrl.with_tol(tol);
        }
        if let Some(it) = self.maxit {
            ctrl = ctrl.with_max_iterations(it);
        }
        if let Some(w) = self.window {
            ctrl = ctrl.with_stagnation_window(w);
        }
        Ok(ctrl)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Gen { config, out, seed } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            std::fs::create_dir_all(&out).map_err(|e| BenchError::io(&out, e))?;
            let problems = cfg.build_problems()?;
            for np in &problems {
                let path = out.join(format!("{}.txt", np.id));
                std::fs::write(&path, write_problem(&np.problem)).map_err(|e| BenchError::io(&path, e))?;
            }
            eprintln!("wrote {} problems to {}", problems.len(), out.display());
            Ok(0)
        }
        Command::Solve { input, solver, knobs } => {
            let p = load_problem(&input)?;
            let eps = knobs.eps()?.unwrap_or(DEFAULT_EPS);
            let run = run_solver(&p, solver, eps, &knobs.control()?)?;
            for v in &run.x {
                println!("{v:e}");
            }
            let reference = reference_solution(&p)?;
            let kappa = qls_core::numkernel::svd(&p.a)?.condition_number();
            let rel = qls_core::numkernel::vector::rel_diff(&run.x, &reference);
            let eta = qls_core::analysis::linearized_backward_error(&p, &run.x, 1.0, 1.0)?;
            let est = estimate_for(&p, solver, eps, &run.x)?;
            let against = if p.x_exact.is_some() { "exact" } else { "QR" };
            eprintln!("solver      {solver}");
            eprintln!("iterations  {}", run.iterations);
            eprintln!("kappa(A)    {kappa:e}");
            eprintln!("rel_error   {rel:e} (vs {against} solution)");
            eprintln!("eta_bar     {eta:e}");
            eprintln!("estimate    {est:e}");
            if let Some(g) = run.residual_gap {
                eprintln!("final gap   {g:e}");
            }
            Ok(0)
        }
        Command::Bench {
            config,
            out,
            format,
            seed,
            solver,
            knobs,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(list) = solver {
                cfg.solvers = list;
            }
            knobs.apply(&mut cfg)?;
            let records = run_suite(&cfg)?;
            let out = out.or_else(|| cfg.output.clone().map(|o| resolve(&config, &o)));
            match out {
                Some(path) => {
                    let format = format.unwrap_or_else(|| Format::from_path(&path));
                    emit_records(&records, &path, format)?;
                    eprintln!("wrote {} records to {}", records.len(), path.display());
                }
                None => match format.unwrap_or(Format::Csv) {
                    Format::Csv => print!("{}", to_csv_string(&records)),
                    Format::Json => println!(
                        "{}",
                        serde_json::to_string_pretty(&records).map_err(|e| BenchError::Numerical(e.to_string()))?
                    ),
                },
            }
            let errors = records.iter().filter(|r| r.status == RunStatus::Error).count();
            let failed = records.iter().filter(|r| r.status == RunStatus::Failed).count();
            eprintln!("{} ok, {failed} failed, {errors} error", records.len() - failed - errors);
            Ok(if errors > 0 { 3 } else { 0 })
        }
        Command::Profile { input, out, solver } => {
            let mut records = load_records(&input)?;
            if let Some(list) = solver {
                records.retain(|r| list.contains(&r.solver));
            }
            let curves = performance_profile(&records)?;
            let csv = emit_profile_svg(&curves, &out)?;
            for c in &curves {
                eprintln!("{:<8} success rate {:.3}", c.solver.name(), c.success_rate());
            }
            eprintln!("wrote {} and {}", out.display(), csv.display());
            Ok(0)
        }
        Command::Table { input, out } => {
            let text = report_table(&load_records(&input)?)?;
            match out {
                Some(path) => std::fs::write(&path, text).map_err(|e| BenchError::io(&path, e))?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Trace { input, out, knobs } => {
            let p = load_problem(&input)?;
            let text = trace_csv(&trace_residual_gap(&p, &knobs.control()?)?);
            match out {
                Some(path) => std::fs::write(&path, text).map_err(|e| BenchError::io(&path, e))?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

fn load_problem(path: &Path) -> Result<QlsProblem> {
    let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    read_problem(&text).map_err(|e| BenchError::config(path.display().to_string(), e.to_string()))
}

/// Relative `output` paths in a config resolve against the config's directory.
fn resolve(config: &Path, output: &Path) -> PathBuf {
    match config.parent() {
        Some(dir) if output.is_relative() => dir.join(output),
        _ => output.to_path_buf(),
    }
}
