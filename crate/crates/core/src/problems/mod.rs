//! Problem data, synthetic test families and reformulations.

mod families;
mod hexfloat;
mod io;
mod reformulations;

pub use families::{
    assemble_problem, derive_seed, generate_problem_set_p, orthogonal_factor, sigma_c1, sigma_c2,
    uniform_vector, C_SCALES, SET_P_M, SET_P_N, SET_P_SIZE,
};
pub use hexfloat::{format_hex, parse_float};
pub use io::{read_problem, write_problem};
pub use reformulations::{
    build_augmented, build_eps_system, build_hat_system, nearest_power_of_two, AugmentedSystem,
    EpsSystem, HatSystem,
};

use crate::numkernel::vector::{add, norm2, sub};
use crate::numkernel::{DenseMatrix, UNIT_ROUNDOFF};
use crate::{Error, Result};

/// The system `AᵀA x = Aᵀb + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct QlsProblem {
    pub a: DenseMatrix,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub x_exact: Option<Vec<f64>>,
    pub label: String,
}

impl QlsProblem {
    pub fn new(
        a: DenseMatrix,
        b: Vec<f64>,
        c: Vec<f64>,
        x_exact: Option<Vec<f64>>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let (m, n) = (a.rows(), a.cols());
        if m < n {
            return Err(Error::DimensionMismatch(format!("need m >= n, got {m}x{n}")));
        }
        if b.len() != m {
            return Err(Error::DimensionMismatch(format!("b has length {}, expected {m}", b.len())));
        }
        if c.len() != n {
            return Err(Error::DimensionMismatch(format!("c has length {}, expected {n}", c.len())));
        }
        if let Some(x) = &x_exact {
            if x.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "x has length {}, expected {n}",
                    x.len()
                )));
            }
        }
        let all_finite = b
            .iter()
            .chain(&c)
            .chain(x_exact.iter().flatten())
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidParameter("b, c and x must be finite".into()));
        }
        Ok(Self {
            a,
            b,
            c,
            x_exact,
            label: label.into(),
        })
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// `fl(fl(Aᵀb) + c)`
    pub fn rhs(&self) -> Vec<f64> {
        add(&self.a.matvec_t(&self.b), &self.c)
    }

    /// `b − A x`
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        sub(&self.b, &self.a.matvec(x))
    }

    /// `‖[A, b, c]‖_F`
    pub fn data_norm(&self) -> f64 {
        let fa = self.a.frobenius_norm();
        let nb = norm2(&self.b);
        let nc = norm2(&self.c);
        (fa * fa + nb * nb + nc * nc).sqrt()
    }

    /// `‖AᵀA x − (Aᵀb + c)‖`, with `AᵀA x` applied as `Aᵀ(A x)`.
    pub fn normal_residual(&self, x: &[f64]) -> f64 {
        let lhs = self.a.matvec_t(&self.a.matvec(x));
        norm2(&sub(&lhs, &self.rhs()))
    }

    /// Checks `‖AᵀA x − (Aᵀb+c)‖ ≤ 1e3·u·κ²(A)·‖Aᵀb+c‖` for the stored exact
    /// solution; `kappa` is `κ(A)`.
    pub fn is_consistent(&self, kappa: f64) -> bool {
        match &self.x_exact {
            None => true,
            Some(x) => {
                let tol = 1e3 * UNIT_ROUNDOFF * kappa * kappa * norm2(&self.rhs());
                self.normal_residual(x) <= tol
            }
        }
    }
}
