//! Krylov solvers for `AᵀA x = Aᵀb + c` and its reformulations.
//!
//! All solvers share [`IterationControl`] and report a [`SolveOutcome`] with
//! the recurred residual norm after every iteration. The returned iterate is
//! the one with the smallest recurred residual, and the histories end there.
//! A numerical breakdown is reported through [`Status::Breakdown`], not as an
//! error.

mod cg;
mod cgls;
mod minres;

pub use cg::cg_base;
pub use cgls::{cgls, cgls_eps, cgls_i};
pub use minres::minres_augmented;

use crate::numkernel::UNIT_ROUNDOFF;
use crate::{Error, Result};

/// Default number of iterations without a new smallest residual before
/// declaring steady state.
pub const STAGNATION_WINDOW: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct IterationControl {
    /// Relative reduction of the recurred residual norm that ends the run.
    pub tol: f64,
    /// `None` means `10·n`.
    pub max_iterations: Option<usize>,
    /// `None` means the zero vector.
    pub x0: Option<Vec<f64>>,
    /// Steady-state window, [`STAGNATION_WINDOW`] by default.
    pub stagnation_window: usize,
}

impl Default for IterationControl {
    fn default() -> Self {
        Self {
            tol: 1e2 * UNIT_ROUNDOFF,
            max_iterations: None,
            x0: None,
            stagnation_window: STAGNATION_WINDOW,
        }
    }
}

impl IterationControl {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = Some(max_iterations);
        self
    }

    pub fn with_x0(mut self, x0: Vec<f64>) -> Self {
        self.x0 = Some(x0);
        self
    }

    pub fn with_stagnation_window(mut self, window: usize) -> Self {
        self.stagnation_window = window;
        self
    }

    fn validate(&self, n: usize) -> Result<(Vec<f64>, usize)> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {}", self.tol)));
        }
        let max_it = self.max_iterations.unwrap_or(10 * n);
        if max_it == 0 {
            return Err(Error::InvalidParameter("maxIterations must be at least 1".into()));
        }
        if self.stagnation_window == 0 {
            return Err(Error::InvalidParameter("stagnation window must be at least 1".into()));
        }
        let x0 = match &self.x0 {
            None => vec![0.0; n],
            Some(x) if x.len() == n => x.clone(),
            Some(x) => {
                return Err(Error::DimensionMismatch(format!(
                    "x0 has length {}, expected {n}",
                    x.len()
                )))
            }
        };
        Ok((x0, max_it))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxIterationsReached,
    Breakdown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub residual_norm_history: Vec<f64>,
    pub true_residual_gap_history: Option<Vec<f64>>,
    pub status: Status,
}

/// Tracks the stopping rule: relative tolerance, steady state, iteration cap.
///
/// Once the recurred residual reaches its rounding floor, the Krylov
/// recurrences can settle into a mode where it grows geometrically, so the
/// solvers hand back the iterate with the smallest recurred residual rather
/// than the last one.
struct StopMonitor {
    threshold: f64,
    best: f64,
    since_best: usize,
    improved: bool,
    window: usize,
    max_iterations: usize,
}

impl StopMonitor {
    fn new(initial: f64, ctrl: &IterationControl, max_iterations: usize) -> Self {
        Self {
            threshold: ctrl.tol * initial,
            best: initial,
            since_best: 0,
            improved: false,
            window: ctrl.stagnation_window,
            max_iterations,
        }
    }

    /// Status to stop with after iteration `k` produced residual norm `norm`.
    fn check(&mut self, k: usize, norm: f64) -> Option<Status> {
        self.improved = norm < self.best;
        if norm <= self.threshold {
            return Some(Status::Converged);
        }
        if self.improved {
            self.best = norm;
            self.since_best = 0;
        } else {
            self.since_best += 1;
            if self.since_best >= self.window {
                return Some(Status::Converged);
            }
        }
        (k >= self.max_iterations).then_some(Status::MaxIterationsReached)
    }

    /// Whether the last [`StopMonitor::check`] saw a new smallest residual.
    fn improved(&self) -> bool {
        self.improved
    }
}
