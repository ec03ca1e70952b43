use super::triangular::{solve_triangular, solve_triangular_transpose, Triangle};
use super::{DenseMatrix, UNIT_ROUNDOFF};
use crate::{Error, Result};

/// Householder QR of an `m × n` matrix (`m ≥ n`), `A P = Q R`.
///
/// Storage is LAPACK-style compact: `R` in the upper triangle of `factors`,
/// the reflector tails (with an implicit leading one) strictly below it.
/// Reflector `k` is `H_k = I − τ_k v_k v_kᵀ`.
#[derive(Debug, Clone)]
pub struct QrFactorization {
    factors: DenseMatrix,
    tau: Vec<f64>,
    perm: Vec<usize>,
    r: DenseMatrix,
}

/// Factorizes `a`. With `pivoting`, the column of largest remaining norm is
/// moved forward at every step (lowest index wins ties), so `|R[k,k]|` is
/// nonincreasing.
///
/// Fails with [`Error::RankDeficient`] when some `|R[k,k]| ≤ n·u·|R[0,0]|`.
pub fn qr_factorize(a: &DenseMatrix, pivoting: bool) -> Result<QrFactorization> {
    let f = qr_factorize_unchecked(a, pivoting)?;
    let n = a.cols();
    let r00 = f.factors[(0, 0)].abs();
    let floor = n as f64 * UNIT_ROUNDOFF * r00;
    for k in 0..n {
        let rkk = f.factors[(k, k)].abs();
        if rkk <= floor || rkk == 0.0 {
            return Err(Error::RankDeficient { index: k, value: rkk });
        }
    }
    Ok(f)
}

fn qr_factorize_unchecked(a: &DenseMatrix, pivoting: bool) -> Result<QrFactorization> {
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        return Err(Error::DimensionMismatch(format!(
            "QR needs rows >= cols, got {m}x{n}"
        )));
    }
    let mut f = a.clone();
    let mut tau = vec![0.0; n];
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        if pivoting {
            let mut best = k;
            let mut best_norm = -1.0;
            for j in k..n {
                let s: f64 = f.col(j)[k..].iter().map(|v| v * v).sum();
                if s > best_norm {
                    best_norm = s;
                    best = j;
                }
            }
            if best != k {
                f.swap_cols(k, best);
                perm.swap(k, best);
            }
        }

        // generate the reflector annihilating f[k+1.., k]
        let col = f.col_mut(k);
        let alpha = col[k];
        let sigma = col[k + 1..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if sigma == 0.0 {
            tau[k] = 0.0;
            continue;
        }
        let beta = -alpha.signum() * alpha.hypot(sigma);
        tau[k] = (beta - alpha) / beta;
        let inv = 1.0 / (alpha - beta);
        for v in col[k + 1..].iter_mut() {
            *v *= inv;
        }
        col[k] = beta;

        // apply H_k to the trailing columns
        let (head, tail) = f.as_cols_split(k);
        let v = &head[k + 1..];
        for j in 0..n - k - 1 {
            let c = &mut tail[j * m..(j + 1) * m];
            let mut s = c[k];
            for (ci, vi) in c[k + 1..].iter().zip(v) {
                s += ci * vi;
            }
            s *= tau[k];
            c[k] -= s;
            for (ci, vi) in c[k + 1..].iter_mut().zip(v) {
                *ci -= s * vi;
            }
        }
    }
    let r = DenseMatrix::from_fn(n, n, |i, j| if i <= j { f[(i, j)] } else { 0.0 });
    Ok(QrFactorization {
        factors: f,
        tau,
        perm,
        r,
    })
}

impl DenseMatrix {
    /// Column `k` and the columns after it, as disjoint slices.
    fn as_cols_split(&mut self, k: usize) -> (&[f64], &mut [f64]) {
        let m = self.rows();
        let data = self.data_mut();
        let (left, right) = data.split_at_mut((k + 1) * m);
        (&left[k * m..], right)
    }
}

impl QrFactorization {
    pub fn rows(&self) -> usize {
        self.factors.rows()
    }

    pub fn cols(&self) -> usize {
        self.factors.cols()
    }

    /// Upper-triangular `n × n` factor.
    pub fn r(&self) -> &DenseMatrix {
        &self.r
    }

    /// Unit lower-trapezoidal `m × n` matrix whose columns are the reflector vectors.
    pub fn householder_vectors(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.rows(), self.cols(), |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => 0.0,
            std::cmp::Ordering::Equal => 1.0,
            std::cmp::Ordering::Greater => self.factors[(i, j)],
        })
    }

    pub fn tau(&self) -> &[f64] {
        &self.tau
    }

    /// `perm[j]` is the original index of the column moved to position `j`.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    fn reflect(&self, k: usize, y: &mut [f64]) {
        let t = self.tau[k];
        if t == 0.0 {
            return;
        }
        let v = &self.factors.col(k)[k + 1..];
        let mut s = y[k];
        for (yi, vi) in y[k + 1..].iter().zip(v) {
            s += yi * vi;
        }
        s *= t;
        y[k] -= s;
        for (yi, vi) in y[k + 1..].iter_mut().zip(v) {
            *yi -= s * vi;
        }
    }

    /// `Qᵀ y` without forming `Q`.
    pub fn apply_q_transpose(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.rows() {
            return Err(Error::DimensionMismatch(format!(
                "vector has length {}, expected {}",
                y.len(),
                self.rows()
            )));
        }
        let mut out = y.to_vec();
        for k in 0..self.cols() {
            self.reflect(k, &mut out);
        }
        Ok(out)
    }

    /// `Q y` without forming `Q`.
    pub fn apply_q(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.rows() {
            return Err(Error::DimensionMismatch(format!(
                "vector has length {}, expected {}",
                y.len(),
                self.rows()
            )));
        }
        let mut out = y.to_vec();
        for k in (0..self.cols()).rev() {
            self.reflect(k, &mut out);
        }
        Ok(out)
    }

    /// The full `m × m` orthogonal factor.
    pub fn q_full(&self) -> DenseMatrix {
        let m = self.rows();
        let mut q = DenseMatrix::identity(m);
        for j in 0..m {
            let col = self.apply_q(q.col(j)).expect("dimensions match");
            q.col_mut(j).copy_from_slice(&col);
        }
        q
    }

    /// `Pᵀ y`
    pub fn permute_t(&self, y: &[f64]) -> Vec<f64> {
        self.perm.iter().map(|&p| y[p]).collect()
    }

    /// `P z`
    pub fn permute(&self, z: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; z.len()];
        for (j, &p) in self.perm.iter().enumerate() {
            out[p] = z[j];
        }
        out
    }

    /// `R⁻¹ y`
    pub fn solve_r(&self, y: &[f64]) -> Result<Vec<f64>> {
        solve_triangular(&self.r, Triangle::Upper, y)
    }

    /// `R⁻ᵀ y`
    pub fn solve_r_transpose(&self, y: &[f64]) -> Result<Vec<f64>> {
        solve_triangular_transpose(&self.r, Triangle::Upper, y)
    }

    /// `(AᵀA)⁻¹ y = P R⁻¹ R⁻ᵀ Pᵀ y`, two triangular solves.
    pub fn solve_normal(&self, y: &[f64]) -> Result<Vec<f64>> {
        let z = solve_triangular_transpose(&self.r, Triangle::Upper, &self.permute_t(y))?;
        let z = solve_triangular(&self.r, Triangle::Upper, &z)?;
        Ok(self.permute(&z))
    }

    /// `A† b`, the least-squares solution.
    pub fn least_squares(&self, b: &[f64]) -> Result<Vec<f64>> {
        let qtb = self.apply_q_transpose(b)?;
        let z = self.solve_r(&qtb[..self.cols()])?;
        Ok(self.permute(&z))
    }

    /// `(A†)ᵀ c = Q [R⁻ᵀ Pᵀ c; 0]`.
    pub fn pinv_transpose_apply(&self, c: &[f64]) -> Result<Vec<f64>> {
        let z = self.solve_r_transpose(&self.permute_t(c))?;
        let mut y = vec![0.0; self.rows()];
        y[..z.len()].copy_from_slice(&z);
        self.apply_q(&y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::vector::norm2;

    fn reconstruct(f: &QrFactorization) -> DenseMatrix {
        // Q R, then undo the column permutation
        let (m, n) = (f.rows(), f.cols());
        let mut r_full = DenseMatrix::zeros(m, n);
        let r = f.r();
        for j in 0..n {
            for i in 0..=j {
                r_full[(i, j)] = r[(i, j)];
            }
        }
        let mut ap = DenseMatrix::zeros(m, n);
        for j in 0..n {
            let c = f.apply_q(r_full.col(j)).unwrap();
            ap.col_mut(j).copy_from_slice(&c);
        }
        let mut a = DenseMatrix::zeros(m, n);
        for (j, &p) in f.permutation().iter().enumerate() {
            a.col_mut(p).copy_from_slice(ap.col(j));
        }
        a
    }

    #[test]
    fn identity_gives_identity_r() {
        let f = qr_factorize(&DenseMatrix::identity(3), false).unwrap();
        assert_eq!(f.r(), &DenseMatrix::identity(3));
        assert_eq!(f.permutation(), &[0, 1, 2]);
        assert_eq!(f.apply_q_transpose(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn single_reflector_maps_column_to_e1() {
        let a = DenseMatrix::from_rows(&[vec![3.0], vec![4.0]]).unwrap();
        let f = qr_factorize(&a, false).unwrap();
        assert!((f.r()[(0, 0)].abs() - 5.0).abs() < 1e-15);
        let y = f.apply_q_transpose(&[3.0, 4.0]).unwrap();
        assert!((y[0].abs() - 5.0).abs() < 1e-15);
        assert!(y[1].abs() < 1e-15);
        assert!(reconstruct(&f).max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn pivoting_orders_diagonal_and_reconstructs() {
        let a = DenseMatrix::from_rows(&[
            vec![1.0, 7.0, 2.0],
            vec![0.0, -3.0, 5.0],
            vec![4.0, 1.0, 1.0],
            vec![2.0, 2.0, -6.0],
        ])
        .unwrap();
        let f = qr_factorize(&a, true).unwrap();
        let r = f.r();
        for k in 1..3 {
            assert!(r[(k - 1, k - 1)].abs() >= r[(k, k)].abs());
        }
        let tol = 50.0 * UNIT_ROUNDOFF * a.frobenius_norm();
        assert!(reconstruct(&f).max_abs_diff(&a) <= tol);
        let q = f.q_full();
        let qtq = q.t_matmul(&q);
        assert!(qtq.max_abs_diff(&DenseMatrix::identity(4)) < 1e-14);
    }

    #[test]
    fn tie_break_prefers_lowest_index() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let f = qr_factorize(&a, true).unwrap();
        assert_eq!(f.permutation(), &[0, 1]);
    }

    #[test]
    fn rank_deficiency_is_detected() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]]).unwrap();
        assert!(matches!(qr_factorize(&a, true), Err(Error::RankDeficient { index: 1, .. })));
        let exact = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(qr_factorize(&exact, false), Err(Error::RankDeficient { index: 1, .. })));
        let wide = DenseMatrix::zeros(2, 3);
        assert!(matches!(qr_factorize(&wide, false), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn q_transpose_preserves_norm() {
        let a = DenseMatrix::from_fn(5, 3, |i, j| ((i * 7 + j * 3) % 5) as f64 - 1.7 + 0.1 * j as f64);
        let f = qr_factorize(&a, false).unwrap();
        let y = [0.3, -1.2, 2.5, 0.7, -0.4];
        let qty = f.apply_q_transpose(&y).unwrap();
        assert!((norm2(&qty) - norm2(&y)).abs() <= 100.0 * UNIT_ROUNDOFF * norm2(&y));
        let back = f.apply_q(&qty).unwrap();
        for (u, v) in back.iter().zip(&y) {
            assert!((u - v).abs() < 1e-14);
        }
        assert!(matches!(f.apply_q_transpose(&[1.0]), Err(Error::DimensionMismatch(_))));
    }
}
