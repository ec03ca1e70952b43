//! Conditioning, backward error and forward-error estimates.
//!
//! Every application of `(AᵀA)⁻¹` goes through the `R` factor of a QR
//! factorization; the Gram matrix is never formed.

mod backward;
mod condition;
mod estimates;
mod perturbation;

pub use backward::{eta_one, linearized_backward_error, linearized_backward_error_eps};
pub use condition::{
    explicit_condition_operator, relative_condition, structured_cond_base, structured_cond_eps,
};
pub use estimates::{
    cg_inadequacy_indicator, conditioning_report, estimate_cg, estimate_cgls_eps, estimate_cgls_i,
    forward_error_estimates, initial_rounding_bound, sm_proximity_bound, ConditioningReport,
    ErrorEstimates,
};
pub use perturbation::{construct_perturbation, membership_residual, PerturbationTriple, Root};

use crate::numkernel::{DenseMatrix, QrFactorization};
use crate::Result;

/// `(AᵀA)⁻¹` as a dense matrix, one normal-equation solve per column.
fn inverse_gram(f: &QrFactorization) -> Result<DenseMatrix> {
    let n = f.cols();
    let mut k = DenseMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let col = f.solve_normal(&e)?;
        k.col_mut(j).copy_from_slice(&col);
        e[j] = 0.0;
    }
    Ok(k)
}

/// `(AᵀA)⁻¹ X` column by column.
fn apply_inverse_gram(f: &QrFactorization, x: &DenseMatrix) -> Result<DenseMatrix> {
    let mut out = DenseMatrix::zeros(x.rows(), x.cols());
    for j in 0..x.cols() {
        let col = f.solve_normal(x.col(j))?;
        out.col_mut(j).copy_from_slice(&col);
    }
    Ok(out)
}
