//! Invariants of the dense kernels on random inputs.

use proptest::prelude::*;
use qls_core::numkernel::vector::{norm2, sub};
use qls_core::numkernel::{
    ldlt_factorize, qr_factorize, solve_triangular, solve_triangular_transpose, svd, sym_spectral_norm, Triangle,
};
use qls_core::{DenseMatrix, UNIT_ROUNDOFF};

/// `m × n` matrix with entries in [-1, 1] plus `shift` on the diagonal.
fn matrix(max_m: usize, shift: f64) -> impl Strategy<Value = DenseMatrix> {
    (1..=max_m)
        .prop_flat_map(|m| (Just(m), 1..=m))
        .prop_flat_map(move |(m, n)| {
            prop::collection::vec(-1.0f64..1.0, m * n).prop_map(move |data| {
                let mut a = DenseMatrix::from_col_major(m, n, data).unwrap();
                for i in 0..n {
                    a[(i, i)] += shift;
                }
                a
            })
        })
}

fn symmetric(max_n: usize) -> impl Strategy<Value = DenseMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |data| {
            let m = DenseMatrix::from_col_major(n, n, data).unwrap();
            m.symmetric_part()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn qr_least_squares_residual_is_orthogonal(a in matrix(9, 3.0), pivot in any::<bool>()) {
        let f = qr_factorize(&a, pivot).unwrap();
        let b: Vec<f64> = (0..a.rows()).map(|i| (i as f64 * 0.7).cos()).collect();
        let x = f.least_squares(&b).unwrap();
        let r = sub(&b, &a.matvec(&x));
        let atr = norm2(&a.matvec_t(&r));
        let scale = a.frobenius_norm() * (a.frobenius_norm() * norm2(&x) + norm2(&b));
        prop_assert!(atr <= 1e3 * UNIT_ROUNDOFF * scale, "‖Aᵀr‖ = {atr:e}");
    }

    #[test]
    fn householder_q_is_orthogonal(a in matrix(8, 0.0)) {
        let f = qr_factorize(&a, true);
        prop_assume!(f.is_ok());
        let f = f.unwrap();
        let y: Vec<f64> = (0..f.rows()).map(|i| 1.0 + i as f64).collect();
        let qty = f.apply_q_transpose(&y).unwrap();
        prop_assert!((norm2(&qty) - norm2(&y)).abs() <= 1e2 * UNIT_ROUNDOFF * norm2(&y));
        let back = f.apply_q(&qty).unwrap();
        prop_assert!(norm2(&sub(&back, &y)) <= 1e2 * UNIT_ROUNDOFF * norm2(&y));
    }

    #[test]
    fn svd_reconstructs_and_orders(a in matrix(8, 0.0)) {
        let s = svd(&a).unwrap();
        let sv = &s.singular_values;
        prop_assert!(sv.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(sv.iter().all(|v| *v >= 0.0));
        let err = s.reconstruct().max_abs_diff(&a);
        prop_assert!(err <= 1e2 * UNIT_ROUNDOFF * a.frobenius_norm().max(1.0));
        let gram_norm = sym_spectral_norm(&a.t_matmul(&a)).unwrap();
        prop_assert!((gram_norm.sqrt() - s.sigma_max()).abs() <= 1e-12 * s.sigma_max().max(1e-300));
    }

    #[test]
    fn ldlt_reconstructs_symmetric_input(m in symmetric(8)) {
        if let Ok(f) = ldlt_factorize(&m) {
            let err = f.reconstruct().max_abs_diff(&m);
            prop_assert!(err <= 1e3 * UNIT_ROUNDOFF * m.frobenius_norm() * m.rows() as f64);
            let l = f.l();
            for i in 0..l.rows() {
                prop_assert_eq!(l[(i, i)], 1.0);
                for j in i + 1..l.cols() {
                    prop_assert_eq!(l[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn triangular_solves_invert(a in matrix(7, 4.0)) {
        let n = a.cols();
        let t = DenseMatrix::from_fn(n, n, |i, j| if i <= j { a[(i, j)] } else { 0.0 });
        let y: Vec<f64> = (0..n).map(|i| (i as f64).sin() + 0.5).collect();
        let x = solve_triangular(&t, Triangle::Upper, &y).unwrap();
        prop_assert!(norm2(&sub(&t.matvec(&x), &y)) <= 1e-12 * norm2(&y));
        let z = solve_triangular_transpose(&t, Triangle::Upper, &y).unwrap();
        prop_assert!(norm2(&sub(&t.matvec_t(&z), &y)) <= 1e-12 * norm2(&y));
    }
}

#[test]
fn ldlt_handles_saddle_point_matrices() {
    // [[I, A], [Aᵀ, 0]] is indefinite with a zero trailing block
    let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0], vec![1.0, -1.0]]).unwrap();
    let k = DenseMatrix::from_fn(5, 5, |i, j| match (i < 3, j < 3) {
        (true, true) => f64::from(u8::from(i == j)),
        (true, false) => a[(i, j - 3)],
        (false, true) => a[(j, i - 3)],
        (false, false) => 0.0,
    });
    let f = ldlt_factorize(&k).unwrap();
    let rhs = [1.0, 2.0, 3.0, 0.5, -0.5];
    let z = f.solve(&rhs).unwrap();
    assert!(norm2(&sub(&k.matvec(&z), &rhs)) <= 1e-13 * norm2(&rhs));
}
