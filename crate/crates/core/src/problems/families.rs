use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg32;

use super::QlsProblem;
use crate::numkernel::{qr_factorize, DenseMatrix};
use crate::{Error, Result};

pub const SET_P_SIZE: usize = 40;
pub const SET_P_M: usize = 100;
pub const SET_P_N: usize = 50;

/// `(γ, ζ)` pairs for `c = γ + (ζ − γ)·rand(n)`, cycled across set 𝒫.
pub const C_SCALES: [(f64, f64); 8] = [
    (-1e-10, 1e-10),
    (1e-4, 1.0),
    (-1e-4, 1e-4),
    (-1.0, 1.0),
    (1e-10, 1e-4),
    (-1e2, -1.0),
    (1.0, 1e2),
    (-1e-4, -1e-10),
];

/// `(a⁻¹, a⁻², …, a⁻ⁿ)`
pub fn sigma_c1(n: usize, a: f64) -> Result<Vec<f64>> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!("C1 base must be positive, got {a}")));
    }
    Ok((1..=n).map(|i| a.powi(-(i as i32))).collect())
}

/// `n` equally spaced values from `dw` to `up`, endpoints exact.
pub fn sigma_c2(n: usize, dw: f64, up: f64) -> Result<Vec<f64>> {
    if !(dw > 0.0 && dw < up && up.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "C2 needs 0 < dw < up, got dw={dw}, up={up}"
        )));
    }
    if n == 1 {
        return Ok(vec![up]);
    }
    let step = (up - dw) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { up } else { dw + step * i as f64 })
        .collect())
}

/// SplitMix64 finalizer over `seed` and a stream tag; used to give each
/// generated object its own PRNG stream.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `n` draws uniform on `[0, 1)` from a PCG32 stream (64-bit state).
pub fn uniform_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = Pcg32::seed_from_u64(seed);
    (0..n).map(|_| rng.random::<f64>()).collect()
}

/// Deterministic `dim × dim` orthogonal matrix.
///
/// Kind 1 is the sine transform `√(2/(d+1))·sin(ijπ/(d+1))`, kind 2 the
/// Hartley transform `(sin + cos)(2πij/d)/√d`, kinds 3–6 the `Q` factor of a
/// random matrix with entries uniform on `[-1, 1)` (stream depends on kind,
/// dim and seed). Kinds outside 1..=6 are reduced modulo 6.
pub fn orthogonal_factor(dim: usize, kind: u32, seed: u64) -> DenseMatrix {
    let kind = (kind.max(1) - 1) % 6 + 1;
    let d = dim as f64;
    match kind {
        1 => {
            let s = (2.0 / (d + 1.0)).sqrt();
            DenseMatrix::from_fn(dim, dim, |i, j| {
                s * (((i + 1) * (j + 1)) as f64 * PI / (d + 1.0)).sin()
            })
        }
        2 => {
            let s = 1.0 / d.sqrt();
            DenseMatrix::from_fn(dim, dim, |i, j| {
                // reduce ij mod dim first so the angle stays small
                let t = 2.0 * PI * ((i * j) % dim) as f64 / d;
                s * (t.sin() + t.cos())
            })
        }
        _ => {
            let tag = ((kind as u64) << 32) | dim as u64;
            let mut rng = Pcg32::seed_from_u64(derive_seed(seed, tag));
            let g = DenseMatrix::from_fn(dim, dim, |_, _| rng.random::<f64>() * 2.0 - 1.0);
            // a square uniform random matrix is full rank with probability 1;
            // retry with a perturbed stream in the unlikely event it is not
            match qr_factorize(&g, false) {
                Ok(f) => f.q_full(),
                Err(_) => orthogonal_factor(dim, kind, derive_seed(seed, 0xDEAD)),
            }
        }
    }
}

/// `A = U_n diag(σ) Vᵀ`, `x = (n−1, …, 0)`, `b = A x − (A†)ᵀc`.
///
/// `(A†)ᵀc = U_n Σ⁻¹ Vᵀ c` is applied through the factors.
pub fn assemble_problem(
    u: &DenseMatrix,
    sigma: &[f64],
    v: &DenseMatrix,
    c: &[f64],
    label: impl Into<String>,
) -> Result<QlsProblem> {
    let (m, n) = (u.rows(), v.rows());
    if u.cols() != m || v.cols() != n || sigma.len() != n || c.len() != n || m < n {
        return Err(Error::DimensionMismatch(format!(
            "U {}x{}, sigma {}, V {}x{}, c {}",
            u.rows(),
            u.cols(),
            sigma.len(),
            v.rows(),
            v.cols(),
            c.len()
        )));
    }
    if let Some(s) = sigma.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
        return Err(Error::InvalidParameter(format!("singular values must be positive, got {s}")));
    }
    let mut us = u.top_left(m, n);
    for (j, &s) in sigma.iter().enumerate() {
        for e in us.col_mut(j) {
            *e *= s;
        }
    }
    let a = us.matmul(&v.transpose());
    let x: Vec<f64> = (0..n).rev().map(|k| k as f64).collect();

    let vtc = v.matvec_t(c);
    let scaled: Vec<f64> = vtc.iter().zip(sigma).map(|(t, s)| t / s).collect();
    let pinv_t_c = u.top_left(m, n).matvec(&scaled);
    let ax = a.matvec(&x);
    let b: Vec<f64> = ax.iter().zip(&pinv_t_c).map(|(p, q)| p - q).collect();
    QlsProblem::new(a, b, c.to_vec(), Some(x), label)
}

/// The 40-problem benchmark set (m=100, n=50, κ(A) spanning 1 to 1e10).
///
/// Problems 0–19 use C1 spectra with `log₁₀κ = 10k/19`, alternating `a > 1`
/// and `a < 1`; problems 20–39 use C2 spectra with `log₁₀κ = (k + ½)/2` and
/// `up` cycling over {1e-2, 1, 1e2, 1e3}. Orthogonal kinds and c-scales
/// rotate with the index; a c-scale is skipped when it would make the
/// residual `‖r‖` exceed `‖A‖‖x‖`.
pub fn generate_problem_set_p(seed: u64) -> Vec<QlsProblem> {
    (0..SET_P_SIZE).map(|i| set_p_member(i, seed)).collect()
}

fn set_p_member(i: usize, seed: u64) -> QlsProblem {
    let (m, n) = (SET_P_M, SET_P_N);
    let (sigma, spectrum) = if i < 20 {
        let log_kappa = 10.0 * i as f64 / 19.0;
        let mut a = 10f64.powf(log_kappa / (n - 1) as f64);
        if i % 2 == 1 {
            a = 1.0 / a;
        }
        (sigma_c1(n, a).expect("positive base"), format!("C1-a={a:.6e}"))
    } else {
        let k = i - 20;
        let kappa = 10f64.powf((k as f64 + 0.5) / 2.0);
        let up = [1e-2, 1.0, 1e2, 1e3][k % 4];
        let dw = up / kappa;
        (sigma_c2(n, dw, up).expect("dw < up"), format!("C2-up={up:e}-dw={dw:.6e}"))
    };
    let ku = (i % 6) as u32 + 1;
    let kv = ((i + 3) % 6) as u32 + 1;
    let pseed = derive_seed(seed, i as u64);
    let u = orthogonal_factor(m, ku, pseed);
    let v = orthogonal_factor(n, kv, derive_seed(pseed, 1));
    let draw = uniform_vector(n, derive_seed(pseed, 2));
    let x_norm = (0..n).map(|k| (k * k) as f64).sum::<f64>().sqrt();
    let sigma_max = sigma.iter().cloned().fold(0.0, f64::max);
    // first scale from position i on whose residual ‖(A†)ᵀc‖ stays below ‖A‖‖x‖
    let (gamma, zeta, c) = (0..C_SCALES.len())
        .map(|j| C_SCALES[(i + j) % C_SCALES.len()])
        .map(|(gamma, zeta)| {
            let c: Vec<f64> = draw.iter().map(|t| gamma + (zeta - gamma) * t).collect();
            (gamma, zeta, c)
        })
        .find(|(_, _, c)| residual_norm(&v, &sigma, c) <= sigma_max * x_norm)
        .unwrap_or_else(|| (0.0, 0.0, vec![0.0; n]));
    let label = format!("P{i:02}-{spectrum}-U{ku}-V{kv}-c[{gamma:e},{zeta:e}]-seed={seed}");
    assemble_problem(&u, &sigma, &v, &c, label).expect("valid set member")
}

/// `‖Σ⁻¹Vᵀc‖ = ‖(A†)ᵀc‖` for `A = U_n Σ Vᵀ`.
fn residual_norm(v: &DenseMatrix, sigma: &[f64], c: &[f64]) -> f64 {
    v.matvec_t(c)
        .iter()
        .zip(sigma)
        .map(|(t, s)| (t / s) * (t / s))
        .sum::<f64>()
        .sqrt()
}
