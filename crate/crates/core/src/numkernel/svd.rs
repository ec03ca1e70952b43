use super::vector::{dot, norm2};
use super::DenseMatrix;
use crate::{Error, Result};

/// Thin SVD `A = U diag(σ) Vᵀ` with `σ` sorted nonincreasing.
///
/// For an `m × n` input, `U` is `m × k`, `V` is `n × k` with `k = min(m, n)`.
#[derive(Debug, Clone)]
pub struct SvdFactorization {
    pub singular_values: Vec<f64>,
    pub left_vectors: DenseMatrix,
    pub right_vectors: DenseMatrix,
}

impl SvdFactorization {
    pub fn sigma_max(&self) -> f64 {
        self.singular_values[0]
    }

    pub fn sigma_min(&self) -> f64 {
        *self.singular_values.last().expect("at least one singular value")
    }

    /// `σ_max / σ_min` (infinite for a singular matrix).
    pub fn condition_number(&self) -> f64 {
        self.sigma_max() / self.sigma_min()
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        let mut us = self.left_vectors.clone();
        for (j, &s) in self.singular_values.iter().enumerate() {
            for v in us.col_mut(j) {
                *v *= s;
            }
        }
        us.matmul(&self.right_vectors.transpose())
    }
}

/// Rotation threshold: a pair is left alone once `|wₚ·w_q| ≤ tol·‖wₚ‖‖w_q‖`.
const ROTATION_TOL: f64 = 1e-15;

/// One-sided (Hestenes) Jacobi SVD with cyclic sweeps.
///
/// Converged when a full sweep performs no rotation; gives up with
/// [`Error::NoConvergence`] after `30·n` sweeps.
pub fn svd(a: &DenseMatrix) -> Result<SvdFactorization> {
    if a.rows() < a.cols() {
        let t = svd(&a.transpose())?;
        return Ok(SvdFactorization {
            singular_values: t.singular_values,
            left_vectors: t.right_vectors,
            right_vectors: t.left_vectors,
        });
    }
    let (m, n) = (a.rows(), a.cols());
    let mut w = a.clone();
    let mut v = DenseMatrix::identity(n);
    let budget = 30 * n;

    let mut converged = n == 1;
    for _ in 0..budget {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha = dot(w.col(p), w.col(p));
                let beta = dot(w.col(q), w.col(q));
                let gamma = dot(w.col(p), w.col(q));
                if alpha == 0.0 || beta == 0.0 || gamma.abs() <= ROTATION_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence(budget));
    }

    let mut order: Vec<(f64, usize)> = (0..n).map(|j| (norm2(w.col(j)), j)).collect();
    // stable sort keeps the original order among equal values
    order.sort_by(|x, y| y.0.total_cmp(&x.0));

    let mut u = DenseMatrix::zeros(m, n);
    let mut vs = DenseMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (k, &(s, j)) in order.iter().enumerate() {
        sigma.push(s);
        vs.col_mut(k).copy_from_slice(v.col(j));
        if s > 0.0 {
            for (dst, src) in u.col_mut(k).iter_mut().zip(w.col(j)) {
                *dst = src / s;
            }
        }
    }
    complete_null_columns(&mut u, &sigma);
    Ok(SvdFactorization {
        singular_values: sigma,
        left_vectors: u,
        right_vectors: vs,
    })
}

fn rotate(x: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let rows = x.rows();
    for i in 0..rows {
        let xp = x[(i, p)];
        let xq = x[(i, q)];
        x[(i, p)] = c * xp - s * xq;
        x[(i, q)] = s * xp + c * xq;
    }
}

/// Left vectors of zero singular values are undefined; fill them with an
/// orthonormal completion so `U` keeps orthonormal columns.
fn complete_null_columns(u: &mut DenseMatrix, sigma: &[f64]) {
    let m = u.rows();
    let mut next_unit = 0;
    for k in 0..sigma.len() {
        if sigma[k] > 0.0 {
            continue;
        }
        while next_unit < m {
            let mut cand = vec![0.0; m];
            cand[next_unit] = 1.0;
            next_unit += 1;
            // two passes of Gram–Schmidt against the filled columns
            for _ in 0..2 {
                for j in 0..sigma.len() {
                    if j == k || (sigma[j] == 0.0 && j > k) {
                        continue;
                    }
                    let proj = dot(u.col(j), &cand);
                    for (c, uj) in cand.iter_mut().zip(u.col(j)) {
                        *c -= proj * uj;
                    }
                }
            }
            let nrm = norm2(&cand);
            if nrm > 0.5 {
                for (dst, c) in u.col_mut(k).iter_mut().zip(&cand) {
                    *dst = c / nrm;
                }
                break;
            }
        }
    }
}
