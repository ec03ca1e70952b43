//! Factorization-based solvers.
//!
//! None of these form `AᵀA`: normal-equation solves go through the `R`
//! factor of a Householder QR of `A`.

use crate::numkernel::vector::{add, dot, norm2};
use crate::numkernel::{ldlt_factorize, qr_factorize, svd};
use crate::problems::{build_augmented, build_eps_system, QlsProblem};
use crate::{Error, Result};

/// Semi-normal equations `RᵀR x = Aᵀb + c`.
pub fn solve_qr(p: &QlsProblem) -> Result<Vec<f64>> {
    let f = qr_factorize(&p.a, false)?;
    f.solve_normal(&p.rhs())
}

/// Least-squares solution of `[A; εcᵀ] x ≈ [b; 1/ε]` through a column-pivoted
/// QR of the stacked matrix.
pub fn solve_qr_eps(p: &QlsProblem, eps: f64) -> Result<Vec<f64>> {
    let sys = build_eps_system(p, eps)?;
    let f = qr_factorize(&sys.a_eps, true)?;
    f.least_squares(&sys.b_eps)
}

/// Sherman–Morrison solution of `(AᵀA + ε²ccᵀ) x = Aᵀb + c`:
/// `x = (I − α w cᵀ)(A†b + w)` with `w = (AᵀA)⁻¹c`, `α = ε²/(1 + ε²cᵀw)`.
///
/// `eps = 0` gives the closed-form solution `(AᵀA)⁻¹(Aᵀb + c)`.
pub fn solve_sm(p: &QlsProblem, eps: f64) -> Result<Vec<f64>> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("eps must be nonnegative, got {eps}")));
    }
    let f = qr_factorize(&p.a, false)?;
    let x_ls = f.least_squares(&p.b)?;
    let w = f.solve_normal(&p.c)?;
    let e2 = eps * eps;
    let ctw = dot(&p.c, &w);
    let denom = 1.0 + e2 * ctw;
    if denom <= 0.0 || !denom.is_finite() {
        return Err(Error::DenominatorVanishes(denom));
    }
    let alpha = e2 / denom;
    let y = add(&x_ls, &w);
    let s = alpha * dot(&p.c, &y);
    Ok(y.iter().zip(&w).map(|(yi, wi)| yi - s * wi).collect())
}

/// Default scaling `σ_min(A)/√2` of the identity block of the augmented system.
pub fn default_augmented_scale(p: &QlsProblem) -> Result<f64> {
    Ok(svd(&p.a)?.sigma_min() / std::f64::consts::SQRT_2)
}

/// Bunch–Kaufman LDLᵀ solve of the scaled augmented system; `scale`
/// defaults to [`default_augmented_scale`].
pub fn solve_aug(p: &QlsProblem, scale: Option<f64>) -> Result<Vec<f64>> {
    let scale = match scale {
        Some(s) => s,
        None => default_augmented_scale(p)?,
    };
    let sys = build_augmented(p, scale)?;
    let z = ldlt_factorize(&sys.k)?.solve(&sys.rhs)?;
    let (_, x) = sys.split_solution(&z);
    if norm2(&x).is_finite() {
        Ok(x)
    } else {
        Err(Error::Breakdown("augmented solve produced non-finite values".into()))
    }
}
