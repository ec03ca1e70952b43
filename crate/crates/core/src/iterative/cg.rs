use super::{IterationControl, SolveOutcome, Status, StopMonitor};
use crate::numkernel::vector::{axpy, dot, sub};
use crate::problems::QlsProblem;
use crate::Result;

/// Conjugate gradients on `AᵀA x = fl(fl(Aᵀb) + c)`.
///
/// The right-hand side is rounded once up front and the operator is applied
/// as `Aᵀ(A p)`; the residual is recurred, never recomputed.
pub fn cg_base(p: &QlsProblem, ctrl: &IterationControl) -> Result<SolveOutcome> {
    let (mut x, max_it) = ctrl.validate(p.n())?;
    let op = |v: &[f64]| p.a.matvec_t(&p.a.matvec(v));
    let rhs = p.rhs();
    let mut r = if x.iter().all(|v| *v == 0.0) { rhs } else { sub(&rhs, &op(&x)) };
    let mut dir = r.clone();
    let mut rr = dot(&r, &r);
    let mut history = Vec::new();
    if rr == 0.0 {
        return Ok(outcome(x, history, Status::Converged));
    }
    let mut monitor = StopMonitor::new(rr.sqrt(), ctrl, max_it);
    let mut x_best = x.clone();
    let mut best_k = 0;

    for k in 1.. {
        let q = op(&dir);
        let curvature = dot(&dir, &q);
        if curvature <= 0.0 || !curvature.is_finite() {
            history.truncate(best_k);
            return Ok(outcome(x_best, history, Status::Breakdown));
        }
        let alpha = rr / curvature;
        axpy(alpha, &dir, &mut x);
        axpy(-alpha, &q, &mut r);
        let rr_new = dot(&r, &r);
        history.push(rr_new.sqrt());
        if rr_new == 0.0 {
            return Ok(outcome(x, history, Status::Converged));
        }
        let stop = monitor.check(k, rr_new.sqrt());
        if monitor.improved() {
            x_best.copy_from_slice(&x);
            best_k = k;
        }
        if let Some(status) = stop {
            history.truncate(best_k);
            return Ok(outcome(x_best, history, status));
        }
        let beta = rr_new / rr;
        rr = rr_new;
        for (d, ri) in dir.iter_mut().zip(&r) {
            *d = ri + beta * *d;
        }
    }
    unreachable!("loop exits through the monitor")
}

fn outcome(x: Vec<f64>, history: Vec<f64>, status: Status) -> SolveOutcome {
    SolveOutcome {
        x,
        iterations: history.len(),
        residual_norm_history: history,
        true_residual_gap_history: None,
        status,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::DenseMatrix;

    fn identity_problem(b: Vec<f64>, c: Vec<f64>) -> QlsProblem {
        QlsProblem::new(DenseMatrix::identity(b.len()), b, c, None, "id").unwrap()
    }

    #[test]
    fn identity_converges_in_one_step() {
        let out = cg_base(&identity_problem(vec![1.0, 2.0], vec![0.0, 0.0]), &IterationControl::default()).unwrap();
        assert_eq!(out.x, vec![1.0, 2.0]);
        assert_eq!(out.iterations, 1);
        assert_eq!(out.status, Status::Converged);

        let out = cg_base(&identity_problem(vec![0.0, 0.0], vec![3.0, 4.0]), &IterationControl::default()).unwrap();
        assert_eq!(out.x, vec![3.0, 4.0]);
        assert_eq!(out.iterations, 1);
    }

    #[test]
    fn zero_rhs_needs_no_iterations() {
        let out = cg_base(&identity_problem(vec![0.0], vec![0.0]), &IterationControl::default()).unwrap();
        assert_eq!(out.iterations, 0);
        assert!(out.residual_norm_history.is_empty());
        assert_eq!(out.status, Status::Converged);
    }

    #[test]
    fn iteration_cap() {
        let a = DenseMatrix::from_diag(4, 4, &[1.0, 2.0, 3.0, 4.0]);
        let p = QlsProblem::new(a, vec![1.0; 4], vec![0.0; 4], None, "d").unwrap();
        let out = cg_base(&p, &IterationControl::default().with_max_iterations(2)).unwrap();
        assert_eq!(out.iterations, 2);
        assert_eq!(out.status, Status::MaxIterationsReached);
    }
}
