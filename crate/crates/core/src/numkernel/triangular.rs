use super::DenseMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triangle {
    Upper,
    Lower,
}

fn check(t: &DenseMatrix, y: &[f64]) -> Result<usize> {
    let n = t.rows();
    if t.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "triangular matrix must be square, got {}x{}",
            n,
            t.cols()
        )));
    }
    if y.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, expected {n}",
            y.len()
        )));
    }
    if let Some(i) = (0..n).find(|&i| t[(i, i)] == 0.0) {
        return Err(Error::SingularDiagonal(i));
    }
    Ok(n)
}

/// Solves `T x = y` by substitution, reading only the `side` triangle of `T`.
pub fn solve_triangular(t: &DenseMatrix, side: Triangle, y: &[f64]) -> Result<Vec<f64>> {
    let n = check(t, y)?;
    let mut x = y.to_vec();
    match side {
        Triangle::Upper => {
            // column-oriented back substitution
            for j in (0..n).rev() {
                x[j] /= t[(j, j)];
                let xj = x[j];
                let col = t.col(j);
                for i in 0..j {
                    x[i] -= col[i] * xj;
                }
            }
        }
        Triangle::Lower => {
            for j in 0..n {
                x[j] /= t[(j, j)];
                let xj = x[j];
                let col = t.col(j);
                for i in j + 1..n {
                    x[i] -= col[i] * xj;
                }
            }
        }
    }
    Ok(x)
}

/// Solves `Tᵀ x = y` where `T` is triangular on `side`.
pub fn solve_triangular_transpose(t: &DenseMatrix, side: Triangle, y: &[f64]) -> Result<Vec<f64>> {
    let n = check(t, y)?;
    let mut x = y.to_vec();
    match side {
        // Tᵀ is lower: forward substitution using dot products down columns of T
        Triangle::Upper => {
            for j in 0..n {
                let col = t.col(j);
                let s: f64 = (0..j).map(|i| col[i] * x[i]).sum();
                x[j] = (x[j] - s) / col[j];
            }
        }
        Triangle::Lower => {
            for j in (0..n).rev() {
                let col = t.col(j);
                let s: f64 = (j + 1..n).map(|i| col[i] * x[i]).sum();
                x[j] = (x[j] - s) / col[j];
            }
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::vector::{norm2, sub};

    #[test]
    fn identity_and_hand_case() {
        let i2 = DenseMatrix::identity(2);
        assert_eq!(solve_triangular(&i2, Triangle::Upper, &[5.0, 7.0]).unwrap(), vec![5.0, 7.0]);
        let t = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![0.0, 4.0]]).unwrap();
        assert_eq!(solve_triangular(&t, Triangle::Upper, &[4.0, 8.0]).unwrap(), vec![1.0, 2.0]);
        // Tᵀ = [[2,0],[1,4]]: 2x=2, x+4y=9
        assert_eq!(
            solve_triangular_transpose(&t, Triangle::Upper, &[2.0, 9.0]).unwrap(),
            vec![1.0, 2.0]
        );
    }

    #[test]
    fn zero_diagonal_is_reported() {
        let t = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(
            solve_triangular(&t, Triangle::Upper, &[1.0, 1.0]),
            Err(Error::SingularDiagonal(1))
        );
        assert!(matches!(
            solve_triangular(&t, Triangle::Upper, &[1.0]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn residual_of_random_well_conditioned_systems() {
        // deterministic pseudo-random entries, diagonal dominant
        let n = 6;
        let mut s = 12345u64;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let upper = DenseMatrix::from_fn(n, n, |i, j| {
            if i == j {
                3.0 + next()
            } else if i < j {
                next()
            } else {
                0.0
            }
        });
        let lower = upper.transpose();
        let y: Vec<f64> = (0..n).map(|i| i as f64 - 2.5).collect();
        for (t, side) in [(&upper, Triangle::Upper), (&lower, Triangle::Lower)] {
            let x = solve_triangular(t, side, &y).unwrap();
            let res = norm2(&sub(&t.matvec(&x), &y));
            assert!(res <= 1e-13 * t.frobenius_norm() * norm2(&x));
            let xt = solve_triangular_transpose(t, side, &y).unwrap();
            let res_t = norm2(&sub(&t.matvec_t(&xt), &y));
            assert!(res_t <= 1e-13 * t.frobenius_norm() * norm2(&xt));
        }
    }
}
