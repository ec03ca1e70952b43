use super::condition::check_len;
use crate::numkernel::vector::{dot, norm2};
use crate::numkernel::DenseMatrix;
use crate::problems::QlsProblem;
use crate::{Error, Result};

/// Data perturbation `(E, f, g)` of `(A, b, c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationTriple {
    pub e: DenseMatrix,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

/// Which root of the scalar quadratic to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Root {
    #[default]
    Smaller,
    Larger,
}

/// Builds `E` such that `x̃` solves the normal equations of `(A + E, b, c)`:
///
/// `E = v(αcᵀ − v†A) + (I − vv†)(r̃x̃† + Z(I − x̃x̃†))`, `r̃ = b − Ax̃`,
///
/// where `α` solves `‖v‖²(cᵀx̃)α² − (vᵀb)α − 1 = 0` (root picked by
/// magnitude). Every such `E` is admissible and every admissible `E` has this
/// form for some `v` and `Z`.
pub fn construct_perturbation(
    p: &QlsProblem,
    x: &[f64],
    v: &[f64],
    z: &DenseMatrix,
    root: Root,
) -> Result<(DenseMatrix, f64)> {
    let (m, n) = (p.m(), p.n());
    check_len(x, n)?;
    if v.len() != m || z.rows() != m || z.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "v has length {}, Z is {}x{}; expected {m} and {m}x{n}",
            v.len(),
            z.rows(),
            z.cols()
        )));
    }
    let vv = dot(v, v);
    if vv == 0.0 {
        return Err(Error::ZeroVector("v"));
    }
    let xx = dot(x, x);
    if xx == 0.0 {
        return Err(Error::ZeroVector("x"));
    }
    let alpha = solve_quadratic(vv * dot(&p.c, x), -dot(v, &p.b), -1.0, root)?;

    // v(αcᵀ − v†A)
    let vta: Vec<f64> = p.a.matvec_t(v).iter().map(|t| t / vv).collect();
    let row: Vec<f64> = p.c.iter().zip(&vta).map(|(c, t)| alpha * c - t).collect();
    let mut e = DenseMatrix::zeros(m, n);
    e.rank_one_update(1.0, v, &row);

    // (I − vv†)(r̃x̃† + Z(I − x̃x̃†)) = (I − vv†) G
    let r = p.residual(x);
    let zx = z.matvec(x);
    let mut g = z.clone();
    g.rank_one_update(-1.0 / xx, &zx, x);
    g.rank_one_update(1.0 / xx, &r, x);
    let vtg = g.matvec_t(v);
    g.rank_one_update(-1.0 / vv, v, &vtg);
    Ok((e.add(&g), alpha))
}

/// `‖(A+E)ᵀ(b − (A+E)x̃) + c‖`
pub fn membership_residual(p: &QlsProblem, e: &DenseMatrix, x: &[f64]) -> f64 {
    let ae = p.a.add(e);
    let ax = ae.matvec(x);
    let r: Vec<f64> = p.b.iter().zip(&ax).map(|(b, t)| b - t).collect();
    let res: Vec<f64> = ae.matvec_t(&r).iter().zip(&p.c).map(|(t, c)| t + c).collect();
    norm2(&res)
}

/// Real root of `a α² + b α + c = 0` (linear when `a = 0`).
fn solve_quadratic(a: f64, b: f64, c: f64, root: Root) -> Result<f64> {
    if a == 0.0 {
        return if b == 0.0 { Err(Error::NoRealRoot) } else { Ok(-c / b) };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 || !disc.is_finite() {
        return Err(Error::NoRealRoot);
    }
    let sign = if b >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (b + sign * disc.sqrt());
    if q == 0.0 {
        return Ok(0.0);
    }
    let (r1, r2) = (q / a, c / q);
    let (small, large) = if r1.abs() <= r2.abs() { (r1, r2) } else { (r2, r1) };
    Ok(match root {
        Root::Smaller => small,
        Root::Larger => large,
    })
}
