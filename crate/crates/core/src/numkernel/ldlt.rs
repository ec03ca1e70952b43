use super::{DenseMatrix, UNIT_ROUNDOFF};
use crate::{Error, Result};

/// Bunch–Kaufman threshold `(1 + √17) / 8`.
const BK_ALPHA: f64 = 0.640_388_203_202_207_6;

/// A diagonal block of `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PivotBlock {
    One(f64),
    /// Symmetric 2×2 block `[[a, b], [b, c]]`.
    Two { a: f64, b: f64, c: f64 },
}

impl PivotBlock {
    pub fn size(&self) -> usize {
        match self {
            PivotBlock::One(_) => 1,
            PivotBlock::Two { .. } => 2,
        }
    }
}

/// `M = P L D Lᵀ Pᵀ` with `L` unit lower triangular and `D` block diagonal.
#[derive(Debug, Clone)]
pub struct LdltFactorization {
    l: DenseMatrix,
    blocks: Vec<PivotBlock>,
    /// Row/column `i` of the factored matrix is row/column `perm[i]` of `M`.
    perm: Vec<usize>,
}

/// Symmetric indefinite factorization with Bunch–Kaufman partial pivoting.
///
/// Only the lower triangle of `m` is read after the symmetry check.
pub fn ldlt_factorize(m: &DenseMatrix) -> Result<LdltFactorization> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            n,
            m.cols()
        )));
    }
    let asym = m.sub(&m.transpose()).max_abs();
    if asym > 10.0 * UNIT_ROUNDOFF * m.frobenius_norm() {
        return Err(Error::NotSymmetric(asym));
    }
    let floor = n as f64 * f64::EPSILON * m.max_abs();

    // full symmetric working copy; trailing block updated in place
    let mut a = m.symmetric_part();
    let mut l = DenseMatrix::identity(n);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut blocks = Vec::new();

    let mut k = 0;
    while k < n {
        let akk = a[(k, k)].abs();
        let (r, colmax) = (k + 1..n)
            .map(|i| (i, a[(i, k)].abs()))
            .fold((k, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });

        if akk.max(colmax) <= floor {
            return Err(Error::Breakdown(format!(
                "no acceptable pivot in column {k} (max entry {:e})",
                akk.max(colmax)
            )));
        }

        let two_by_two;
        if akk >= BK_ALPHA * colmax {
            two_by_two = false;
        } else {
            let rowmax = (k..n)
                .filter(|&j| j != r)
                .map(|j| a[(r, j)].abs())
                .fold(0.0, f64::max);
            if akk * rowmax >= BK_ALPHA * colmax * colmax {
                two_by_two = false;
            } else if a[(r, r)].abs() >= BK_ALPHA * rowmax {
                two_by_two = false;
                symmetric_swap(&mut a, &mut l, &mut perm, k, r);
            } else {
                two_by_two = true;
                symmetric_swap(&mut a, &mut l, &mut perm, k + 1, r);
            }
        }

        if !two_by_two {
            let d = a[(k, k)];
            for i in k + 1..n {
                l[(i, k)] = a[(i, k)] / d;
            }
            for j in k + 1..n {
                let ljd = l[(j, k)] * d;
                for i in j..n {
                    let v = a[(i, j)] - l[(i, k)] * ljd;
                    a[(i, j)] = v;
                    a[(j, i)] = v;
                }
            }
            blocks.push(PivotBlock::One(d));
            k += 1;
        } else {
            let (d11, d21, d22) = (a[(k, k)], a[(k + 1, k)], a[(k + 1, k + 1)]);
            let det = d11 * d22 - d21 * d21;
            if det == 0.0 || !det.is_finite() {
                return Err(Error::Breakdown(format!("singular 2x2 pivot at {k}")));
            }
            // L block = C E⁻¹, E⁻¹ = [[d22, -d21], [-d21, d11]] / det
            for i in k + 2..n {
                let (c1, c2) = (a[(i, k)], a[(i, k + 1)]);
                l[(i, k)] = (c1 * d22 - c2 * d21) / det;
                l[(i, k + 1)] = (c2 * d11 - c1 * d21) / det;
            }
            for j in k + 2..n {
                let (cj1, cj2) = (a[(j, k)], a[(j, k + 1)]);
                for i in j..n {
                    let v = a[(i, j)] - l[(i, k)] * cj1 - l[(i, k + 1)] * cj2;
                    a[(i, j)] = v;
                    a[(j, i)] = v;
                }
            }
            blocks.push(PivotBlock::Two {
                a: d11,
                b: d21,
                c: d22,
            });
            k += 2;
        }
    }
    Ok(LdltFactorization { l, blocks, perm })
}

/// Swaps index `i < j` symmetrically in the trailing matrix and the rows of
/// the already-computed columns of `L`.
fn symmetric_swap(a: &mut DenseMatrix, l: &mut DenseMatrix, perm: &mut [usize], i: usize, j: usize) {
    if i == j {
        return;
    }
    let n = a.rows();
    for k in 0..n {
        let t = a[(i, k)];
        a[(i, k)] = a[(j, k)];
        a[(j, k)] = t;
    }
    for k in 0..n {
        let t = a[(k, i)];
        a[(k, i)] = a[(k, j)];
        a[(k, j)] = t;
    }
    for k in 0..i {
        let t = l[(i, k)];
        l[(i, k)] = l[(j, k)];
        l[(j, k)] = t;
    }
    perm.swap(i, j);
}

impl LdltFactorization {
    pub fn l(&self) -> &DenseMatrix {
        &self.l
    }

    pub fn blocks(&self) -> &[PivotBlock] {
        &self.blocks
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// `D` as a dense matrix.
    pub fn d(&self) -> DenseMatrix {
        let n = self.l.rows();
        let mut d = DenseMatrix::zeros(n, n);
        let mut k = 0;
        for b in &self.blocks {
            match *b {
                PivotBlock::One(v) => d[(k, k)] = v,
                PivotBlock::Two { a, b, c } => {
                    d[(k, k)] = a;
                    d[(k + 1, k)] = b;
                    d[(k, k + 1)] = b;
                    d[(k + 1, k + 1)] = c;
                }
            }
            k += b.size();
        }
        d
    }

    /// `P L D Lᵀ Pᵀ`
    pub fn reconstruct(&self) -> DenseMatrix {
        let ldlt = self.l.matmul(&self.d()).matmul(&self.l.transpose());
        let n = ldlt.rows();
        let mut out = DenseMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                out[(self.perm[i], self.perm[j])] = ldlt[(i, j)];
            }
        }
        out
    }

    pub fn solve(&self, y: &[f64]) -> Result<Vec<f64>> {
        let n = self.l.rows();
        if y.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, expected {n}",
                y.len()
            )));
        }
        let mut z: Vec<f64> = self.perm.iter().map(|&p| y[p]).collect();
        // L z = Pᵀ y
        for j in 0..n {
            let zj = z[j];
            for i in j + 1..n {
                z[i] -= self.l[(i, j)] * zj;
            }
        }
        let mut k = 0;
        for b in &self.blocks {
            match *b {
                PivotBlock::One(v) => z[k] /= v,
                PivotBlock::Two { a, b, c } => {
                    let det = a * c - b * b;
                    let (z1, z2) = (z[k], z[k + 1]);
                    z[k] = (c * z1 - b * z2) / det;
                    z[k + 1] = (a * z2 - b * z1) / det;
                }
            }
            k += b.size();
        }
        for j in (0..n).rev() {
            let s: f64 = (j + 1..n).map(|i| self.l[(i, j)] * z[i]).sum();
            z[j] -= s;
        }
        let mut out = vec![0.0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            out[p] = z[i];
        }
        Ok(out)
    }
}
