use super::backward::{linearized_backward_error, linearized_backward_error_eps};
use super::condition::{check_len, relative_condition, structured_cond_base, structured_cond_eps};
use crate::numkernel::vector::{dot, norm2};
use crate::numkernel::{qr_factorize, svd, DenseMatrix, UNIT_ROUNDOFF};
use crate::problems::{nearest_power_of_two, QlsProblem};
use crate::{Error, Result};

/// First-order forward-error estimates for the three iterative methods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorEstimates {
    pub cg: f64,
    pub cgls_i: f64,
    pub cgls_eps: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditioningReport {
    pub abs_cond: f64,
    pub rel_cond: f64,
    pub eta_bar: f64,
    pub estimates: ErrorEstimates,
    pub kappa_a: f64,
    pub data_norm: f64,
}

/// `relCond(x̂)·η̄(x̂)`, the estimate for methods that never form `AᵀA`.
pub fn estimate_cgls_i(p: &QlsProblem, xhat: &[f64]) -> Result<f64> {
    check_len(xhat, p.n())?;
    let abs_cond = structured_cond_base(p, xhat)?;
    let eta = linearized_backward_error(p, xhat, 1.0, 1.0)?;
    Ok(relative_condition(p, abs_cond, xhat) * eta)
}

/// The CGLSI-form estimate plus the amplified rounding of `fl(Aᵀb) + c`:
/// `κ²(A)·η̄(x̂)·((m+1)/(1−(m+1)u)·‖b‖/‖A‖ + ‖c‖/‖A‖²)`.
pub fn estimate_cg(p: &QlsProblem, xhat: &[f64]) -> Result<f64> {
    check_len(xhat, p.n())?;
    let abs_cond = structured_cond_base(p, xhat)?;
    let eta = linearized_backward_error(p, xhat, 1.0, 1.0)?;
    let s = svd(&p.a)?;
    let rhs_term = eta * rounding_factor(p, s.sigma_max(), s.condition_number())?;
    Ok(relative_condition(p, abs_cond, xhat) * eta + rhs_term)
}

/// `ε²‖c‖‖w‖/(1+ε²cᵀw) + relCondε(x̂ε)·η̄ε(x̂ε)·‖I − ε²wcᵀ/(1+ε²cᵀw)‖₂`,
/// `w = (AᵀA)⁻¹c`.
pub fn estimate_cgls_eps(p: &QlsProblem, eps: f64, xhat_eps: &[f64]) -> Result<f64> {
    check_len(xhat_eps, p.n())?;
    let (eps, _) = nearest_power_of_two(eps)?;
    let f = qr_factorize(&p.a, false)?;
    let w = f.solve_normal(&p.c)?;
    let e2 = eps * eps;
    let denom = 1.0 + e2 * dot(&p.c, &w);
    if denom <= 0.0 || !denom.is_finite() {
        return Err(Error::DenominatorVanishes(denom));
    }
    let offset = e2 * norm2(&p.c) * norm2(&w) / denom;
    let n = p.n();
    let mut shrink = DenseMatrix::identity(n);
    shrink.rank_one_update(-e2 / denom, &w, &p.c);
    let shrink_norm = svd(&shrink)?.sigma_max();
    let abs_cond = structured_cond_eps(p, eps, xhat_eps)?;
    let eta = linearized_backward_error_eps(p, eps, xhat_eps)?;
    Ok(offset + relative_condition(p, abs_cond, xhat_eps) * eta * shrink_norm)
}

/// All three estimates evaluated at one point `x̂`.
pub fn forward_error_estimates(p: &QlsProblem, xhat: &[f64], eps: f64) -> Result<ErrorEstimates> {
    Ok(ErrorEstimates {
        cg: estimate_cg(p, xhat)?,
        cgls_i: estimate_cgls_i(p, xhat)?,
        cgls_eps: estimate_cgls_eps(p, eps, xhat)?,
    })
}

pub fn conditioning_report(p: &QlsProblem, xhat: &[f64], eps: f64) -> Result<ConditioningReport> {
    let abs_cond = structured_cond_base(p, xhat)?;
    Ok(ConditioningReport {
        abs_cond,
        rel_cond: relative_condition(p, abs_cond, xhat),
        eta_bar: linearized_backward_error(p, xhat, 1.0, 1.0)?,
        estimates: forward_error_estimates(p, xhat, eps)?,
        kappa_a: svd(&p.a)?.condition_number(),
        data_norm: p.data_norm(),
    })
}

/// `ε²‖c‖‖w‖/(1+ε²cᵀw)`, `w = (AᵀA)⁻¹c`: bound on the relative distance
/// between the regularized and the exact solution.
pub fn sm_proximity_bound(p: &QlsProblem, eps: f64) -> Result<f64> {
    let f = qr_factorize(&p.a, false)?;
    let w = f.solve_normal(&p.c)?;
    let e2 = eps * eps;
    let denom = 1.0 + e2 * dot(&p.c, &w);
    if denom <= 0.0 || !denom.is_finite() {
        return Err(Error::DenominatorVanishes(denom));
    }
    Ok(e2 * norm2(&p.c) * norm2(&w) / denom)
}

/// `u·κ²(A)·((m+1)/(1−(m+1)u)·‖b‖/‖A‖ + ‖c‖/‖A‖²)`: forward error caused by
/// rounding `Aᵀb + c` once before iterating.
pub fn initial_rounding_bound(p: &QlsProblem) -> Result<f64> {
    let s = svd(&p.a)?;
    Ok(UNIT_ROUNDOFF * rounding_factor(p, s.sigma_max(), s.condition_number())?)
}

fn rounding_factor(p: &QlsProblem, norm_a: f64, kappa: f64) -> Result<f64> {
    let mu = (p.m() + 1) as f64 * UNIT_ROUNDOFF;
    if mu >= 1.0 {
        return Err(Error::InvalidParameter(format!("(m+1)u = {mu} must be below 1")));
    }
    let gamma = (p.m() + 1) as f64 / (1.0 - mu);
    Ok(kappa * kappa * (gamma * norm2(&p.b) / norm_a + norm2(&p.c) / (norm_a * norm_a)))
}

/// `(‖b‖‖A‖ + ‖c‖) / ([1 + ‖r‖ + 2√(‖c‖‖x‖) + (1+‖x‖)/‖A†‖]·‖[A,b,c]‖_F)`.
///
/// Values well above one mean the rounding of `Aᵀb + c` dominates what the
/// problem's conditioning allows, so CG on the normal equations loses
/// accuracy a stable method keeps.
pub fn cg_inadequacy_indicator(p: &QlsProblem, x: &[f64]) -> Result<f64> {
    check_len(x, p.n())?;
    let s = svd(&p.a)?;
    let norm_a = s.sigma_max();
    let norm_pinv = 1.0 / s.sigma_min();
    let r = norm2(&p.residual(x));
    let (nb, nc, nx) = (norm2(&p.b), norm2(&p.c), norm2(x));
    let bracket = 1.0 + r + 2.0 * (nc * nx).sqrt() + (1.0 + nx) / norm_pinv;
    Ok((nb * norm_a + nc) / (bracket * p.data_norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_problem(b: Vec<f64>, c: Vec<f64>) -> QlsProblem {
        QlsProblem::new(DenseMatrix::identity(b.len()), b, c, None, "id").unwrap()
    }

    #[test]
    fn proximity_bound_values() {
        assert_eq!(sm_proximity_bound(&identity_problem(vec![1.0, 1.0], vec![0.0, 0.0]), 0.5).unwrap(), 0.0);
        let p = identity_problem(vec![1.0, 1.0], vec![1.0, 0.0]);
        assert_eq!(sm_proximity_bound(&p, 1.0).unwrap(), 0.5);
        let ratio = sm_proximity_bound(&p, 2f64.powi(-10)).unwrap() / sm_proximity_bound(&p, 2f64.powi(-11)).unwrap();
        assert!((ratio - 4.0).abs() < 1e-5);
    }

    #[test]
    fn rounding_bound_values() {
        assert_eq!(initial_rounding_bound(&identity_problem(vec![0.0, 0.0], vec![0.0, 0.0])).unwrap(), 0.0);
        let v = initial_rounding_bound(&identity_problem(vec![1.0, 0.0], vec![0.0, 0.0])).unwrap();
        let expect = UNIT_ROUNDOFF * 3.0 / (1.0 - 3.0 * UNIT_ROUNDOFF);
        assert!((v - expect).abs() <= 1e-15 * expect);
    }

    #[test]
    fn inadequacy_indicator_value() {
        let p = identity_problem(vec![1.0, 0.0], vec![0.0, 0.0]);
        let v = cg_inadequacy_indicator(&p, &[1.0, 0.0]).unwrap();
        assert!((v - 1.0 / (3.0 * 3f64.sqrt())).abs() < 1e-15);

        // wide spread of singular values with a large right-hand side
        let a = DenseMatrix::from_diag(2, 2, &[1e4, 1e-4]);
        let p = QlsProblem::new(a, vec![1e4, 0.0], vec![0.0, 0.0], None, "ill").unwrap();
        assert!(cg_inadequacy_indicator(&p, &[1.0, 0.0]).unwrap() > 1e3);
    }

    #[test]
    fn estimates_at_exact_solution() {
        // c = 0, x̂ exact: η̄ = 0 so only the Sherman–Morrison offset can remain, and it is 0
        let p = identity_problem(vec![1.0, 2.0], vec![0.0, 0.0]);
        let e = forward_error_estimates(&p, &[1.0, 2.0], 2f64.powi(-47)).unwrap();
        assert_eq!(e, ErrorEstimates { cg: 0.0, cgls_i: 0.0, cgls_eps: 0.0 });
        let rep = conditioning_report(&p, &[1.0, 2.0], 2f64.powi(-47)).unwrap();
        assert_eq!(rep.kappa_a, 1.0);
        assert_eq!(rep.eta_bar, 0.0);
        assert!(rep.rel_cond > 0.0);
    }
}
