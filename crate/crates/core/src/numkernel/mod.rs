//! Dense linear-algebra primitives.
//!
//! Everything is binary64 and column-major. The factorizations are written for
//! desk-scale problems (a few hundred rows) and favour accuracy over speed.

mod eigen;
mod ldlt;
mod matrix;
mod qr;
mod svd;
mod triangular;
pub mod vector;

pub use eigen::sym_spectral_norm;
pub use ldlt::{ldlt_factorize, LdltFactorization, PivotBlock};
pub use matrix::DenseMatrix;
pub use qr::{qr_factorize, QrFactorization};
pub use svd::{svd, SvdFactorization};
pub use triangular::{solve_triangular, solve_triangular_transpose, Triangle};

/// Unit roundoff of binary64, `2⁻⁵³`.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;
