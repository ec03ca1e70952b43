use super::{IterationControl, SolveOutcome, Status, StopMonitor};
use crate::numkernel::vector::{dot, norm2};
use crate::problems::QlsProblem;
use crate::Result;

/// MINRES on `[[I, A], [Aᵀ, 0]] (r, x) = (b, −c)`; returns the `x` block.
///
/// The residual history holds the MINRES estimate `φ̄_k` of the augmented
/// residual norm. `x0` seeds the `x` block; the `r` block starts at `b − A x0`.
pub fn minres_augmented(p: &QlsProblem, ctrl: &IterationControl) -> Result<SolveOutcome> {
    let (x0, max_it) = ctrl.validate(p.n())?;
    let (m, n) = (p.m(), p.n());
    let op = |v: &[f64]| -> Vec<f64> {
        let (v1, v2) = v.split_at(m);
        let mut out = p.a.matvec(v2);
        for (o, a) in out.iter_mut().zip(v1) {
            *o += a;
        }
        out.extend(p.a.matvec_t(v1));
        out
    };
    let mut z: Vec<f64> = p.residual(&x0);
    z.extend_from_slice(&x0);
    let rhs: Vec<f64> = p.b.iter().copied().chain(p.c.iter().map(|v| -v)).collect();
    let kz = op(&z);
    let r0: Vec<f64> = rhs.iter().zip(&kz).map(|(a, b)| a - b).collect();

    let beta1 = norm2(&r0);
    let mut history = Vec::new();
    let finish = |z: Vec<f64>, history: Vec<f64>, status| SolveOutcome {
        x: z[m..].to_vec(),
        iterations: history.len(),
        residual_norm_history: history,
        true_residual_gap_history: None,
        status,
    };
    if beta1 == 0.0 {
        return Ok(finish(z, history, Status::Converged));
    }
    let mut monitor = StopMonitor::new(beta1, ctrl, max_it);
    let dim = m + n;

    let mut r1 = r0.clone();
    let mut r2 = r0;
    let mut y = r2.clone();
    let mut old_beta = 0.0;
    let mut beta = beta1;
    let (mut dbar, mut epsln, mut phibar) = (0.0, 0.0, beta1);
    let (mut cs, mut sn) = (-1.0f64, 0.0f64);
    let mut w = vec![0.0; dim];
    let mut w2 = vec![0.0; dim];

    for k in 1.. {
        let v: Vec<f64> = y.iter().map(|t| t / beta).collect();
        y = op(&v);
        if k >= 2 {
            let f = beta / old_beta;
            for (yi, ri) in y.iter_mut().zip(&r1) {
                *yi -= f * ri;
            }
        }
        let alfa = dot(&v, &y);
        let f = alfa / beta;
        for (yi, ri) in y.iter_mut().zip(&r2) {
            *yi -= f * ri;
        }
        r1 = std::mem::replace(&mut r2, y.clone());
        old_beta = beta;
        beta = norm2(&r2);

        let old_eps = epsln;
        let delta = cs * dbar + sn * alfa;
        let gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        let gamma = gbar.hypot(beta).max(f64::EPSILON);
        cs = gbar / gamma;
        sn = beta / gamma;
        let phi = cs * phibar;
        phibar *= sn;

        let w1 = std::mem::replace(&mut w2, w.clone());
        for i in 0..dim {
            w[i] = (v[i] - old_eps * w1[i] - delta * w2[i]) / gamma;
            z[i] += phi * w[i];
        }
        history.push(phibar.abs());

        if beta == 0.0 {
            // invariant Krylov space: the iterate is exact in exact arithmetic
            return Ok(finish(z, history, Status::Converged));
        }
        if let Some(status) = monitor.check(k, phibar.abs()) {
            return Ok(finish(z, history, status));
        }
    }
    unreachable!("loop exits through the monitor")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::vector::rel_diff;
    use crate::numkernel::DenseMatrix;

    #[test]
    fn scalar_case() {
        let p = QlsProblem::new(DenseMatrix::identity(1), vec![2.0], vec![1.0], None, "t").unwrap();
        let out = minres_augmented(&p, &IterationControl::default()).unwrap();
        assert!((out.x[0] - 3.0).abs() < 1e-14);
        assert_eq!(out.status, Status::Converged);
    }

    #[test]
    fn consistent_least_squares() {
        let a = DenseMatrix::from_fn(5, 3, |i, j| 1.0 / (i + j + 1) as f64 + if i == j { 1.0 } else { 0.0 });
        let xs = [1.0, -1.0, 2.0];
        let p = QlsProblem::new(a.clone(), a.matvec(&xs), vec![0.0; 3], None, "t").unwrap();
        let out = minres_augmented(&p, &IterationControl::default()).unwrap();
        assert!(rel_diff(&out.x, &xs) < 1e-12, "{:?}", out.x);
        assert_eq!(out.iterations, out.residual_norm_history.len());
    }
}
