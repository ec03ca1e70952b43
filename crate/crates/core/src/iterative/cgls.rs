use super::{IterationControl, SolveOutcome, Status, StopMonitor};
use crate::numkernel::vector::{axpy, dot, norm2, sub};
use crate::numkernel::{svd, DenseMatrix};
use crate::problems::{build_eps_system, build_hat_system, QlsProblem};
use crate::Result;

/// CGLS on `min ‖A x − b‖`: the residual `d` of the data is recurred and
/// `Aᵀd` is formed by multiplication every step.
pub fn cgls(a: &DenseMatrix, b: &[f64], ctrl: &IterationControl) -> Result<SolveOutcome> {
    let (x0, max_it) = ctrl.validate(a.cols())?;
    if b.len() != a.rows() {
        return Err(crate::Error::DimensionMismatch(format!(
            "b has length {}, expected {}",
            b.len(),
            a.rows()
        )));
    }
    let d0 = sub(b, &a.matvec(&x0));
    run(|v| a.matvec(v), |d| a.matvec_t(d), x0, d0, ctrl, max_it, None::<fn(&[f64], &[f64]) -> f64>)
}

/// CGLS applied to `[A; εcᵀ] x ≈ [b; 1/ε]`. A non-power-of-two `eps` is
/// rounded to the nearest power of two.
pub fn cgls_eps(p: &QlsProblem, eps: f64, ctrl: &IterationControl) -> Result<SolveOutcome> {
    let sys = build_eps_system(p, eps)?;
    cgls(&sys.a_eps, &sys.b_eps, ctrl)
}

/// CGLS on the hat system `[A; cᵀ]` with the last coordinate of every
/// `Â p` product discarded.
///
/// When the problem carries an exact solution, the gap between the true
/// residual `b̂ − ÎÂx_k` and the recurred one is recorded relative to
/// `‖A‖‖x‖`.
pub fn cgls_i(p: &QlsProblem, ctrl: &IterationControl) -> Result<SolveOutcome> {
    let (x0, max_it) = ctrl.validate(p.n())?;
    let hat = build_hat_system(p);
    let d0 = sub(&hat.b_hat, &hat.apply(&x0));
    let gap_scale = match &p.x_exact {
        Some(x) if norm2(x) > 0.0 => Some(svd(&p.a)?.sigma_max() * norm2(x)),
        _ => None,
    };
    let gap = gap_scale.map(|scale| {
        let hat = &hat;
        move |x: &[f64], d: &[f64]| norm2(&sub(&sub(&hat.b_hat, &hat.apply(x)), d)) / scale
    });
    run(|v| hat.apply(v), |d| hat.apply_t(d), x0, d0, ctrl, max_it, gap)
}

fn run<F, G, H>(
    apply: F,
    apply_t: G,
    mut x: Vec<f64>,
    mut d: Vec<f64>,
    ctrl: &IterationControl,
    max_it: usize,
    gap: Option<H>,
) -> Result<SolveOutcome>
where
    F: Fn(&[f64]) -> Vec<f64>,
    G: Fn(&[f64]) -> Vec<f64>,
    H: Fn(&[f64], &[f64]) -> f64,
{
    let mut r = apply_t(&d);
    let mut dir = r.clone();
    let mut rr = dot(&r, &r);
    let mut history = Vec::new();
    let mut gaps = gap.as_ref().map(|_| Vec::new());
    let finish = |x, mut history: Vec<f64>, mut gaps: Option<Vec<f64>>, upto: usize, status| {
        history.truncate(upto);
        if let Some(g) = &mut gaps {
            g.truncate(upto);
        }
        SolveOutcome {
            x,
            iterations: history.len(),
            residual_norm_history: history,
            true_residual_gap_history: gaps,
            status,
        }
    };
    if rr == 0.0 {
        return Ok(finish(x, history, gaps, 0, Status::Converged));
    }
    let mut monitor = StopMonitor::new(rr.sqrt(), ctrl, max_it);
    let mut x_best = x.clone();
    let mut best_k = 0;

    for k in 1.. {
        let t = apply(&dir);
        let tt = dot(&t, &t);
        if tt == 0.0 || !tt.is_finite() {
            return Ok(finish(x_best, history, gaps, best_k, Status::Breakdown));
        }
        let alpha = rr / tt;
        axpy(alpha, &dir, &mut x);
        axpy(-alpha, &t, &mut d);
        r = apply_t(&d);
        let rr_new = dot(&r, &r);
        history.push(rr_new.sqrt());
        if let (Some(g), Some(gaps)) = (&gap, &mut gaps) {
            gaps.push(g(&x, &d));
        }
        if rr_new == 0.0 {
            return Ok(finish(x, history, gaps, k, Status::Converged));
        }
        let stop = monitor.check(k, rr_new.sqrt());
        if monitor.improved() {
            x_best.copy_from_slice(&x);
            best_k = k;
        }
        if let Some(status) = stop {
            return Ok(finish(x_best, history, gaps, best_k, status));
        }
        let beta = rr_new / rr;
        rr = rr_new;
        for (pd, ri) in dir.iter_mut().zip(&r) {
            *pd = ri + beta * *pd;
        }
    }
    unreachable!("loop exits through the monitor")
}
