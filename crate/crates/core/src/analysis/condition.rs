use super::{apply_inverse_gram, inverse_gram};
use crate::numkernel::vector::{dot, norm2};
use crate::numkernel::{qr_factorize, sym_spectral_norm, DenseMatrix};
use crate::problems::{build_eps_system, QlsProblem};
use crate::{Error, Result};

/// Absolute structured condition number `√‖M̄‖` of `x ↦ (AᵀA)⁻¹(Aᵀb + c)`
/// at `x`, with
/// `M̄ = (1+‖r‖²)K² + (1+‖x‖²)K − (B + Bᵀ)`, `K = (AᵀA)⁻¹`,
/// `B = (A†r)(Kx)ᵀ`, `r = b − Ax`.
pub fn structured_cond_base(p: &QlsProblem, x: &[f64]) -> Result<f64> {
    check_len(x, p.n())?;
    let f = qr_factorize(&p.a, false)?;
    let k = inverse_gram(&f)?;
    let k2 = apply_inverse_gram(&f, &k)?;
    let r = p.residual(x);
    let pinv_r = f.least_squares(&r)?;
    let kx = f.solve_normal(x)?;
    let rr = dot(&r, &r);
    let xx = dot(x, x);
    let n = p.n();
    let m_bar = DenseMatrix::from_fn(n, n, |i, j| {
        (1.0 + rr) * k2[(i, j)] + (1.0 + xx) * k[(i, j)] - pinv_r[i] * kx[j] - pinv_r[j] * kx[i]
    });
    Ok(sym_spectral_norm(&m_bar.symmetric_part())?.sqrt())
}

/// Absolute structured condition number of the ε-regularized problem
/// `x_ε = (AεᵀAε)⁻¹(Aᵀb + c)` at `x_eps`, with `Kε = (AεᵀAε)⁻¹`,
/// `rε = b − A x_eps` and
/// `M̄ε = ((1−2ε cᵀx_eps)² + ‖rε‖²)Kε² + (1+‖x_eps‖²)(AKε)ᵀ(AKε) − (Bε + Bεᵀ)`,
/// `Bε = (Kε Aᵀ rε)(Kε x_eps)ᵀ`.
pub fn structured_cond_eps(p: &QlsProblem, eps: f64, x_eps: &[f64]) -> Result<f64> {
    check_len(x_eps, p.n())?;
    let sys = build_eps_system(p, eps)?;
    let eps = sys.eps;
    let f = qr_factorize(&sys.a_eps, true)?;
    let k = inverse_gram(&f)?;
    let k2 = apply_inverse_gram(&f, &k)?;
    let ak = p.a.matmul(&k);
    let akak = ak.t_matmul(&ak);
    let r = p.residual(x_eps);
    let u = f.solve_normal(&p.a.matvec_t(&r))?;
    let v = f.solve_normal(x_eps)?;
    let shift = 1.0 - 2.0 * eps * dot(&p.c, x_eps);
    let w1 = shift * shift + dot(&r, &r);
    let w2 = 1.0 + dot(x_eps, x_eps);
    let n = p.n();
    let m_bar = DenseMatrix::from_fn(n, n, |i, j| {
        w1 * k2[(i, j)] + w2 * akak[(i, j)] - u[i] * v[j] - u[j] * v[i]
    });
    Ok(sym_spectral_norm(&m_bar.symmetric_part())?.sqrt())
}

/// `absCond · ‖[A, b, c]‖_F / ‖x‖`
pub fn relative_condition(p: &QlsProblem, abs_cond: f64, x: &[f64]) -> f64 {
    abs_cond * p.data_norm() / norm2(x)
}

/// The Fréchet derivative of `(A, b, c) ↦ x` as an explicit
/// `n × (mn + m + n)` matrix acting on `(vec(E), f, g)`, `vec` stacking
/// columns: `E ↦ K Eᵀ r − A† E x`, `f ↦ A† f`, `g ↦ K g`.
///
/// Its largest singular value equals [`structured_cond_base`]; this dense
/// form is only meant for small cross-checks.
pub fn explicit_condition_operator(p: &QlsProblem, x: &[f64]) -> Result<DenseMatrix> {
    check_len(x, p.n())?;
    let (m, n) = (p.m(), p.n());
    let f = qr_factorize(&p.a, false)?;
    let k = inverse_gram(&f)?;
    let r = p.residual(x);
    let mut pinv = DenseMatrix::zeros(n, m);
    let mut e = vec![0.0; m];
    for i in 0..m {
        e[i] = 1.0;
        let col = f.least_squares(&e)?;
        pinv.col_mut(i).copy_from_slice(&col);
        e[i] = 0.0;
    }
    let mut op = DenseMatrix::zeros(n, m * n + m + n);
    // E = e_i e_jᵀ sits at vec index j·m + i
    for j in 0..n {
        for i in 0..m {
            let col = op.col_mut(j * m + i);
            for (t, c) in col.iter_mut().enumerate() {
                *c = r[i] * k[(t, j)] - x[j] * pinv[(t, i)];
            }
        }
    }
    for i in 0..m {
        op.col_mut(m * n + i).copy_from_slice(pinv.col(i));
    }
    for j in 0..n {
        op.col_mut(m * n + m + j).copy_from_slice(k.col(j));
    }
    Ok(op)
}

pub(super) fn check_len(x: &[f64], n: usize) -> Result<()> {
    if x.len() == n {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!("x has length {}, expected {n}", x.len())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::svd;
    use crate::problems::{assemble_problem, orthogonal_factor, sigma_c1};

    fn diag_problem(scale: f64) -> QlsProblem {
        QlsProblem::new(DenseMatrix::identity(2).scaled(scale), vec![0.0; 2], vec![0.0; 2], None, "d").unwrap()
    }

    #[test]
    fn diagonal_values() {
        let v = structured_cond_base(&diag_problem(1.0), &[0.0, 0.0]).unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-15);
        let v = structured_cond_base(&diag_problem(2.0), &[0.0, 0.0]).unwrap();
        assert!((v - (5.0f64 / 16.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn matches_explicit_operator() {
        let u = orthogonal_factor(4, 4, 11);
        let v = orthogonal_factor(2, 1, 11);
        let p = assemble_problem(&u, &sigma_c1(2, 0.7).unwrap(), &v, &[0.4, -1.3], "small").unwrap();
        let x = p.x_exact.clone().unwrap();
        let by_formula = structured_cond_base(&p, &x).unwrap();
        let by_operator = svd(&explicit_condition_operator(&p, &x).unwrap()).unwrap().sigma_max();
        assert!((by_formula - by_operator).abs() <= 1e-12 * by_operator);
    }

    #[test]
    fn eps_version_without_c_matches_base() {
        let u = orthogonal_factor(6, 2, 1);
        let v = orthogonal_factor(3, 3, 1);
        let p = assemble_problem(&u, &sigma_c1(3, 0.5).unwrap(), &v, &[0.0; 3], "c0").unwrap();
        let x = p.x_exact.clone().unwrap();
        let base = structured_cond_base(&p, &x).unwrap();
        let eps = structured_cond_eps(&p, 2f64.powi(-10), &x).unwrap();
        assert!((base - eps).abs() <= 1e-12 * base);
    }
}
