use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is numerically rank deficient (|R[{index},{index}]| = {value:e})")]
    RankDeficient { index: usize, value: f64 },
    #[error("triangular matrix has a zero diagonal entry at {0}")]
    SingularDiagonal(usize),
    #[error("SVD did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("breakdown: {0}")]
    Breakdown(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("perturbation constraint has no real root")]
    NoRealRoot,
    #[error("zero vector where a nonzero one is required: {0}")]
    ZeroVector(&'static str),
    #[error("Sherman-Morrison denominator 1 + eps^2 c^T w = {0:e} is not positive")]
    DenominatorVanishes(f64),
}
