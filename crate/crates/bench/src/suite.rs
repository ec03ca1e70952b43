//! Running solvers over problems and turning each run into a record.

use std::fmt;
use std::time::Instant;

use qls_core::analysis::{estimate_cg, estimate_cgls_eps, estimate_cgls_i, linearized_backward_error};
use qls_core::direct::{solve_aug, solve_qr, solve_qr_eps, solve_sm};
use qls_core::iterative::{cg_base, cgls_eps, cgls_i, minres_augmented, IterationControl, SolveOutcome};
use qls_core::numkernel::svd;
use qls_core::numkernel::vector::rel_diff;
use qls_core::QlsProblem;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, NamedProblem, SolverKind};
use crate::error::Result;

/// A run is a failure when its relative error exceeds this.
pub const FAILURE_THRESHOLD: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Failed,
    Error,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Ok => "ok",
            RunStatus::Failed => "failed",
            RunStatus::Error => "error",
        })
    }
}

/// One `(problem, solver)` run. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub problem_id: String,
    pub m: usize,
    pub n: usize,
    #[serde(deserialize_with = "nan_if_null")]
    pub kappa: f64,
    pub solver: SolverKind,
    /// 0 for direct solvers.
    pub iterations: usize,
    #[serde(deserialize_with = "nan_if_null")]
    pub rel_error: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub eta_bar: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub estimate: f64,
    /// Final CGLSI residual gap; absent for the other solvers.
    pub residual_gap: Option<f64>,
    pub wall_time_ns: u64,
    pub status: RunStatus,
}

/// JSON has no NaN and writes it as `null`; read that back as NaN.
fn nan_if_null<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

impl BenchRecord {
    pub fn is_success(&self) -> bool {
        self.status == RunStatus::Ok
    }
}

/// `ok`, `failed` (relative error above 1e-2) or `error` (no finite error).
pub fn classify(rel_error: f64) -> RunStatus {
    if !rel_error.is_finite() {
        RunStatus::Error
    } else if rel_error > FAILURE_THRESHOLD {
        RunStatus::Failed
    } else {
        RunStatus::Ok
    }
}

/// Solution and iteration data of a single solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverRun {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub residual_gap: Option<f64>,
}

impl From<SolveOutcome> for SolverRun {
    fn from(out: SolveOutcome) -> Self {
        SolverRun {
            residual_gap: out.true_residual_gap_history.as_ref().and_then(|g| g.last().copied()),
            x: out.x,
            iterations: out.iterations,
        }
    }
}

pub fn run_solver(p: &QlsProblem, solver: SolverKind, eps: f64, ctrl: &IterationControl) -> qls_core::Result<SolverRun> {
    let direct = |x: Vec<f64>| SolverRun {
        x,
        iterations: 0,
        residual_gap: None,
    };
    Ok(match solver {
        SolverKind::Cg => cg_base(p, ctrl)?.into(),
        SolverKind::Cglsi => cgls_i(p, ctrl)?.into(),
        SolverKind::Cglseps => cgls_eps(p, eps, ctrl)?.into(),
        SolverKind::Minres => minres_augmented(p, ctrl)?.into(),
        SolverKind::Qr => direct(solve_qr(p)?),
        SolverKind::Qreps => direct(solve_qr_eps(p, eps)?),
        SolverKind::Sm => direct(solve_sm(p, eps)?),
        SolverKind::Aug => direct(solve_aug(p, None)?),
    })
}

/// First-order forward-error estimate matching how the solver treats `c`:
/// CG forms `Aᵀb + c` explicitly, the ε-based methods solve the regularized
/// problem, and the rest carry `c` exactly.
pub fn estimate_for(p: &QlsProblem, solver: SolverKind, eps: f64, x: &[f64]) -> qls_core::Result<f64> {
    match solver {
        SolverKind::Cg => estimate_cg(p, x),
        SolverKind::Cglseps | SolverKind::Qreps | SolverKind::Sm => estimate_cgls_eps(p, eps, x),
        SolverKind::Cglsi | SolverKind::Minres | SolverKind::Qr | SolverKind::Aug => estimate_cgls_i(p, x),
    }
}

/// Runs one solver on one problem. `reference` is the solution errors are
/// measured against and `kappa` the 2-norm condition number of `A`.
pub fn run_one(
    np: &NamedProblem,
    solver: SolverKind,
    eps: f64,
    ctrl: &IterationControl,
    reference: &[f64],
    kappa: f64,
) -> BenchRecord {
    let p = &np.problem;
    let start = Instant::now();
    let result = run_solver(p, solver, eps, ctrl);
    let wall_time_ns = u64::try_from(start.elapsed().as_nanos()).unwrap_or(u64::MAX);

    let mut rec = BenchRecord {
        problem_id: np.id.clone(),
        m: p.m(),
        n: p.n(),
        kappa,
        solver,
        iterations: 0,
        rel_error: f64::NAN,
        eta_bar: f64::NAN,
        estimate: f64::NAN,
        residual_gap: None,
        wall_time_ns,
        status: RunStatus::Error,
    };
    if let Ok(run) = result {
        rec.iterations = run.iterations;
        rec.residual_gap = run.residual_gap;
        rec.rel_error = rel_diff(&run.x, reference);
        rec.eta_bar = linearized_backward_error(p, &run.x, 1.0, 1.0).unwrap_or(f64::NAN);
        rec.estimate = estimate_for(p, solver, eps, &run.x).unwrap_or(f64::NAN);
        rec.status = classify(rec.rel_error);
    }
    rec
}

/// Exact solution when the problem carries one, otherwise the QR
/// semi-normal-equations solution.
pub fn reference_solution(p: &QlsProblem) -> Result<Vec<f64>> {
    match &p.x_exact {
        Some(x) => Ok(x.clone()),
        None => Ok(solve_qr(p)?),
    }
}

/// Runs every configured solver on every problem. The records are sorted
/// by problem id, then by solver.
pub fn run_suite(cfg: &ExperimentConfig) -> Result<Vec<BenchRecord>> {
    let problems = cfg.build_problems()?;
    run_problems(&problems, &cfg.solvers, cfg.eps_rounded(), &cfg.control())
}

pub fn run_problems(
    problems: &[NamedProblem],
    solvers: &[SolverKind],
    eps: f64,
    ctrl: &IterationControl,
) -> Result<Vec<BenchRecord>> {
    let mut solvers = solvers.to_vec();
    solvers.sort();
    solvers.dedup();
    let mut records = Vec::with_capacity(problems.len() * solvers.len());
    for np in problems {
        let kappa = svd(&np.problem.a)?.condition_number();
        let reference = reference_solution(&np.problem)?;
        for &s in &solvers {
            records.push(run_one(np, s, eps, ctrl, &reference, kappa));
        }
    }
    records.sort_by(|a, b| a.problem_id.cmp(&b.problem_id).then(a.solver.cmp(&b.solver)));
    Ok(records)
}
