//! Per-iteration residual gap of CGLSI.

use std::fmt::Write as _;

use qls_core::iterative::{cgls_i, IterationControl};
use qls_core::QlsProblem;

use crate::error::{BenchError, Result};

/// `‖(b̂ − ÎÂx_k) − d̂_k‖ / (‖A‖‖x‖)` for every CGLSI iteration `k ≥ 1`, up
/// to the returned iterate. Needs the exact solution for the scaling.
pub fn trace_residual_gap(p: &QlsProblem, ctrl: &IterationControl) -> Result<Vec<f64>> {
    if p.x_exact.is_none() {
        return Err(BenchError::Numerical(format!(
            "problem '{}' has no exact solution to scale the gap by",
            p.label
        )));
    }
    let out = cgls_i(p, ctrl)?;
    out.true_residual_gap_history
        .ok_or_else(|| BenchError::Numerical("exact solution is zero; the gap is undefined".into()))
}

/// `iteration,gap`, one line per iteration starting at 1.
pub fn trace_csv(gaps: &[f64]) -> String {
    let mut s = String::from("iteration,gap\n");
    for (k, g) in gaps.iter().enumerate() {
        let _ = writeln!(s, "{},{g:e}", k + 1);
    }
    s
}
