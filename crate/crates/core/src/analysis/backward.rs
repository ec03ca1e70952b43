use super::condition::check_len;
use crate::numkernel::vector::{dot, norm2};
use crate::numkernel::{qr_factorize, DenseMatrix};
use crate::problems::QlsProblem;
use crate::{Error, Result};

/// Linearized backward error `‖J†h‖` of `x̃` for `AᵀA x = Aᵀb + c`, with
/// `h = Aᵀ(b − A x̃) + c` and
/// `J = [I_n ⊗ r̃ᵀ − Aᵀ(x̃ᵀ ⊗ I_m), θ₁⁻¹Aᵀ, θ₂⁻¹I_n]` (columns of `E` stacked).
pub fn linearized_backward_error(p: &QlsProblem, x: &[f64], theta1: f64, theta2: f64) -> Result<f64> {
    check_len(x, p.n())?;
    check_weights(theta1, theta2)?;
    let r = p.residual(x);
    let h: Vec<f64> = p.a.matvec_t(&r).iter().zip(&p.c).map(|(a, c)| a + c).collect();
    let c_block = DenseMatrix::identity(p.n()).scaled(1.0 / theta2);
    min_norm_solution_norm(p, x, &r, theta1, &c_block, &h)
}

/// Linearized backward error of `x̃` for the regularized normal equations
/// `(AᵀA + ε²ccᵀ) x = Aᵀb + c`, with unit weights.
///
/// Here `h = Aᵀ(b − A x̃) + c − ε²c(cᵀx̃)` and the `c` block of the Jacobian
/// is `(1 − ε²cᵀx̃)I − ε²c x̃ᵀ`.
pub fn linearized_backward_error_eps(p: &QlsProblem, eps: f64, x: &[f64]) -> Result<f64> {
    check_len(x, p.n())?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let e2 = eps * eps;
    let ctx = dot(&p.c, x);
    let r = p.residual(x);
    let h: Vec<f64> = p
        .a
        .matvec_t(&r)
        .iter()
        .zip(&p.c)
        .map(|(a, c)| a + c - e2 * c * ctx)
        .collect();
    let n = p.n();
    let c_block = DenseMatrix::from_fn(n, n, |i, j| {
        let diag = if i == j { 1.0 - e2 * ctx } else { 0.0 };
        diag - e2 * p.c[i] * x[j]
    });
    min_norm_solution_norm(p, x, &r, 1.0, &c_block, &h)
}

/// `η₁ = √(θ₁⁻² + θ₂⁻² + ‖x̃‖²)`, the scale in the two-sided bound relating
/// the linearized and exact backward errors.
pub fn eta_one(x: &[f64], theta1: f64, theta2: f64) -> f64 {
    (theta1.powi(-2) + theta2.powi(-2) + dot(x, x)).sqrt()
}

fn check_weights(theta1: f64, theta2: f64) -> Result<()> {
    if theta1 > 0.0 && theta2 > 0.0 && theta1.is_finite() && theta2.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "weights must be positive, got θ₁={theta1}, θ₂={theta2}"
        )))
    }
}

/// Norm of the minimum-norm solution of `J z = h` through `Jᵀ = QR`:
/// `‖J†h‖ = ‖R⁻ᵀh‖`.
fn min_norm_solution_norm(
    p: &QlsProblem,
    x: &[f64],
    r: &[f64],
    theta1: f64,
    c_block: &DenseMatrix,
    h: &[f64],
) -> Result<f64> {
    if norm2(h) == 0.0 {
        return Ok(0.0);
    }
    let (m, n) = (p.m(), p.n());
    let rows = m * n + m + n;
    let mut jt = DenseMatrix::zeros(rows, n);
    for k in 0..n {
        let col = jt.col_mut(k);
        // A block: row j·m + i holds δ_kj r_i − A_ik x_j
        for j in 0..n {
            for i in 0..m {
                let delta = if j == k { r[i] } else { 0.0 };
                col[j * m + i] = delta - p.a[(i, k)] * x[j];
            }
        }
        for i in 0..m {
            col[m * n + i] = p.a[(i, k)] / theta1;
        }
        for j in 0..n {
            col[m * n + m + j] = c_block[(k, j)];
        }
    }
    let f = qr_factorize(&jt, false)?;
    Ok(norm2(&f.solve_r_transpose(h)?))
}
