//! Solvers, structured conditioning and forward-error estimates for linear
//! systems of the form `AᵀA x = Aᵀb + c` with full-column-rank `A`.
//!
//! The crate is organised bottom-up:
//!
//! * [`numkernel`]: dense primitives (QR, SVD, symmetric eigenvalues, LDLᵀ).
//! * [`problems`]: problem data, synthetic families and the ε-, hat- and
//!   KKT-augmented reformulations.
//! * [`iterative`]: CG, CGLS, CGLSI, CGLSε and MINRES.
//! * [`direct`]: QR semi-normal equations, pivoted QR of `Aε`,
//!   Sherman–Morrison and scaled augmented LDLᵀ.
//! * [`analysis`]: structured condition numbers, linearized backward error,
//!   perturbation construction and first-order forward-error estimates.

pub mod analysis;
pub mod direct;
mod error;
pub mod iterative;
pub mod numkernel;
pub mod problems;

pub use error::{Error, Result};
pub use numkernel::{DenseMatrix, UNIT_ROUNDOFF};
pub use problems::QlsProblem;
