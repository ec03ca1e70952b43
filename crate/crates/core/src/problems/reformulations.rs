use super::QlsProblem;
use crate::numkernel::DenseMatrix;
use crate::{Error, Result};

/// `Aε = [A; εcᵀ]`, `bε = [b; 1/ε]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsSystem {
    pub a_eps: DenseMatrix,
    pub b_eps: Vec<f64>,
    /// Power of two actually used.
    pub eps: f64,
    /// Set when the requested value was not a power of two and got rounded.
    pub rounded: bool,
}

/// `Â = [A; cᵀ]`, `b̂ = [b; 1]`; `Î` zeroes the last coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct HatSystem {
    pub a_hat: DenseMatrix,
    pub b_hat: Vec<f64>,
}

impl HatSystem {
    /// `Î Â x`
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.a_hat.matvec(x);
        *y.last_mut().expect("nonempty") = 0.0;
        y
    }

    /// `Âᵀ d`
    pub fn apply_t(&self, d: &[f64]) -> Vec<f64> {
        self.a_hat.matvec_t(d)
    }
}

/// `K = [[σI, A], [Aᵀ, 0]]` with unknowns `(r/σ, x)` and right-hand side
/// `(b, −c/σ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedSystem {
    pub k: DenseMatrix,
    pub rhs: Vec<f64>,
    pub scale: f64,
    pub m: usize,
}

impl AugmentedSystem {
    /// Splits a solution of `K z = rhs` into `(r, x)`, undoing the scaling of
    /// the residual block.
    pub fn split_solution(&self, z: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let r = z[..self.m].iter().map(|v| v * self.scale).collect();
        (r, z[self.m..].to_vec())
    }
}

/// Nearest power of two `2^round(log₂ x)` and whether it differs from `x`.
pub fn nearest_power_of_two(x: f64) -> Result<(f64, bool)> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidParameter(format!("eps must be positive and finite, got {x}")));
    }
    let e = x.log2().round() as i32;
    let p = 2f64.powi(e);
    if p == 0.0 || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("eps {x} has no normal power-of-two neighbour")));
    }
    Ok((p, p != x))
}

pub fn build_eps_system(p: &QlsProblem, eps: f64) -> Result<EpsSystem> {
    let (eps, rounded) = nearest_power_of_two(eps)?;
    let row: Vec<f64> = p.c.iter().map(|ci| eps * ci).collect();
    let last = DenseMatrix::from_col_major(1, p.n(), row)?;
    let mut b_eps = p.b.clone();
    b_eps.push(1.0 / eps);
    Ok(EpsSystem {
        a_eps: p.a.vstack(&last),
        b_eps,
        eps,
        rounded,
    })
}

pub fn build_hat_system(p: &QlsProblem) -> HatSystem {
    let last = DenseMatrix::from_col_major(1, p.n(), p.c.clone()).expect("c is finite");
    let mut b_hat = p.b.clone();
    b_hat.push(1.0);
    HatSystem {
        a_hat: p.a.vstack(&last),
        b_hat,
    }
}

pub fn build_augmented(p: &QlsProblem, scale: f64) -> Result<AugmentedSystem> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidParameter(format!("scale must be positive, got {scale}")));
    }
    let (m, n) = (p.m(), p.n());
    let k = DenseMatrix::from_fn(m + n, m + n, |i, j| match (i < m, j < m) {
        (true, true) if i == j => scale,
        (true, true) => 0.0,
        (true, false) => p.a[(i, j - m)],
        (false, true) => p.a[(j, i - m)],
        (false, false) => 0.0,
    });
    let mut rhs = p.b.clone();
    rhs.extend(p.c.iter().map(|ci| -ci / scale));
    Ok(AugmentedSystem { k, rhs, scale, m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::vector::{norm2, sub};

    fn identity_problem(b: Vec<f64>, c: Vec<f64>) -> QlsProblem {
        let n = c.len();
        QlsProblem::new(DenseMatrix::identity(n), b, c, None, "id").unwrap()
    }

    #[test]
    fn eps_system_layout() {
        let p = identity_problem(vec![1.0, 1.0], vec![1.0, 2.0]);
        let e = build_eps_system(&p, 0.5).unwrap();
        assert_eq!(e.a_eps.row(2), vec![0.5, 1.0]);
        assert_eq!(e.a_eps.top_left(2, 2), DenseMatrix::identity(2));
        assert_eq!(e.b_eps, vec![1.0, 1.0, 2.0]);
        assert!(!e.rounded);
    }

    #[test]
    fn eps_rounding_and_rejection() {
        let p = identity_problem(vec![1.0], vec![1.0]);
        let e = build_eps_system(&p, 0.3).unwrap();
        assert_eq!(e.eps, 0.25);
        assert!(e.rounded);
        assert!(build_eps_system(&p, 0.0).is_err());
        assert!(build_eps_system(&p, -1.0).is_err());
        assert!(build_eps_system(&p, f64::NAN).is_err());
    }

    #[test]
    fn hat_system_identity() {
        let p = identity_problem(vec![1.0, 2.0], vec![3.0, 4.0]);
        let h = build_hat_system(&p);
        assert_eq!(h.a_hat.row(2), vec![3.0, 4.0]);
        assert_eq!(h.b_hat, vec![1.0, 2.0, 1.0]);
        // Âᵀ(ÎÂx − b̂) = x − b − c for A = I
        let x = [0.5, -1.0];
        let lhs = h.apply_t(&sub(&h.apply(&x), &h.b_hat));
        assert_eq!(lhs, vec![0.5 - 1.0 - 3.0, -1.0 - 2.0 - 4.0]);
    }

    #[test]
    fn augmented_one_by_one() {
        let p = QlsProblem::new(DenseMatrix::identity(1), vec![2.0], vec![1.0], None, "t").unwrap();
        let aug = build_augmented(&p, 1.0).unwrap();
        assert_eq!(aug.k, DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap());
        assert_eq!(aug.rhs, vec![2.0, -1.0]);
        // (r, x) = (−1, 3)
        let z = [-1.0, 3.0];
        assert_eq!(norm2(&sub(&aug.k.matvec(&z), &aug.rhs)), 0.0);
        assert!(build_augmented(&p, 0.0).is_err());
    }

    #[test]
    fn augmented_scaling_keeps_solution() {
        let p = QlsProblem::new(DenseMatrix::identity(1), vec![2.0], vec![1.0], None, "t").unwrap();
        let aug = build_augmented(&p, 0.5).unwrap();
        // r = b − Ax = −1, scaled unknown r/σ = −2
        let z = [-2.0, 3.0];
        assert_eq!(aug.k.matvec(&z), aug.rhs);
        assert_eq!(aug.split_solution(&z), (vec![-1.0], vec![3.0]));
    }
}
