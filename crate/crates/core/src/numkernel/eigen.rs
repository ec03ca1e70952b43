use super::{DenseMatrix, UNIT_ROUNDOFF};
use crate::{Error, Result};

const OFF_DIAGONAL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Spectral norm (largest `|λ|`) of a symmetric matrix by cyclic Jacobi.
///
/// The input must be symmetric to `10·u·‖M‖_F`; iteration stops once the
/// off-diagonal Frobenius mass is at most `1e-14·‖M‖_F`.
pub fn sym_spectral_norm(m: &DenseMatrix) -> Result<f64> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            n,
            m.cols()
        )));
    }
    let fro = m.frobenius_norm();
    let asym = m.sub(&m.transpose()).frobenius_norm();
    if asym > 10.0 * UNIT_ROUNDOFF * fro {
        return Err(Error::NotSymmetric(asym));
    }
    if fro == 0.0 {
        return Ok(0.0);
    }
    let eig = jacobi_eigenvalues(&m.symmetric_part(), OFF_DIAGONAL_TOL * fro)?;
    Ok(eig.iter().fold(0.0, |acc, l| acc.max(l.abs())))
}

fn off_diagonal_mass(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

fn jacobi_eigenvalues(m: &DenseMatrix, stop: f64) -> Result<Vec<f64>> {
    let n = m.rows();
    let mut a = m.clone();
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_mass(&a) <= stop {
            return Ok((0..n).map(|i| a[(i, i)]).collect());
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // A ← Jᵀ A J with J the (p, q) rotation [c s; -s c]
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
            }
        }
    }
    if off_diagonal_mass(&a) <= stop {
        return Ok((0..n).map(|i| a[(i, i)]).collect());
    }
    Err(Error::NoConvergence(MAX_SWEEPS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::svd;

    #[test]
    fn small_cases() {
        assert_eq!(sym_spectral_norm(&DenseMatrix::identity(3).scaled(2.0)).unwrap(), 2.0);
        let m = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert!((sym_spectral_norm(&m).unwrap() - 3.0).abs() < 1e-15);
        let neg = DenseMatrix::from_rows(&[vec![-5.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(sym_spectral_norm(&neg).unwrap(), 5.0);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(sym_spectral_norm(&m), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn matches_svd_on_random_symmetric() {
        let mut state = 7u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let g = DenseMatrix::from_fn(10, 10, |_, _| next());
        let m = g.add(&g.transpose());
        let by_eig = sym_spectral_norm(&m).unwrap();
        let by_svd = svd(&m).unwrap().sigma_max();
        assert!((by_eig - by_svd).abs() <= 1e-10 * by_svd);

        // positive semidefinite case
        let p = g.t_matmul(&g).symmetric_part();
        let by_eig = sym_spectral_norm(&p).unwrap();
        let by_svd = svd(&p).unwrap().sigma_max();
        assert!((by_eig - by_svd).abs() <= 1e-10 * by_svd);
    }
}
