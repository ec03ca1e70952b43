//! Conditioning, backward error and perturbation checks against independent
//! constructions.

use proptest::prelude::*;
use qls_core::analysis::{
    construct_perturbation, estimate_cgls_i, explicit_condition_operator, linearized_backward_error,
    membership_residual, sm_proximity_bound, structured_cond_base, Root,
};
use qls_core::direct::{solve_qr, solve_sm};
use qls_core::numkernel::svd;
use qls_core::numkernel::vector::{norm2, rel_diff};
use qls_core::{DenseMatrix, QlsProblem};

fn small_problem(max_m: usize, max_n: usize) -> impl Strategy<Value = QlsProblem> {
    (1..=max_n)
        .prop_flat_map(move |n| (Just(n), n..=max_m.max(n)))
        .prop_flat_map(|(n, m)| {
            (
                prop::collection::vec(-1.0f64..1.0, m * n),
                prop::collection::vec(-2.0f64..2.0, m),
                prop::collection::vec(-1.0f64..1.0, n),
            )
                .prop_map(move |(a, b, c)| {
                    let mut a = DenseMatrix::from_col_major(m, n, a).unwrap();
                    for i in 0..n {
                        a[(i, i)] += 2.0;
                    }
                    QlsProblem::new(a, b, c, None, "small").unwrap()
                })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_condition_matches_explicit_operator(p in small_problem(6, 3)) {
        let x = solve_qr(&p).unwrap();
        let closed = structured_cond_base(&p, &x).unwrap();
        let op = explicit_condition_operator(&p, &x).unwrap();
        let top = svd(&op).unwrap().sigma_max();
        prop_assert!((closed - top).abs() <= 1e-10 * top, "{closed} vs {top}");
    }

    #[test]
    fn perturbations_make_the_point_exact(
        p in small_problem(6, 3),
        v in prop::collection::vec(-1.0f64..1.0, 6),
        z in prop::collection::vec(-1.0f64..1.0, 18),
        larger in any::<bool>(),
        shift in -0.1f64..0.1,
    ) {
        let (m, n) = (p.m(), p.n());
        let x: Vec<f64> = solve_qr(&p).unwrap().iter().map(|t| t + shift).collect();
        prop_assume!(norm2(&v[..m]) > 1e-3 && norm2(&x) > 1e-3);
        let z = DenseMatrix::from_col_major(m, n, z[..m * n].to_vec()).unwrap();
        let root = if larger { Root::Larger } else { Root::Smaller };
        match construct_perturbation(&p, &x, &v[..m], &z, root) {
            Ok((e, _)) => {
                let res = membership_residual(&p, &e, &x);
                let scale = (p.a.frobenius_norm() + e.frobenius_norm()).powi(2) * norm2(&x);
                prop_assert!(res <= 1e-10 * scale, "{res:e} vs {scale:e}");
            }
            Err(qls_core::Error::NoRealRoot) | Err(qls_core::Error::ZeroVector(_)) => {}
            Err(other) => prop_assert!(false, "unexpected {other:?}"),
        }
    }

    #[test]
    fn backward_error_grows_with_distance(p in small_problem(6, 3), t in 1e-8f64..1e-4) {
        let x = solve_qr(&p).unwrap();
        let dir: Vec<f64> = (0..p.n()).map(|i| 1.0 + i as f64).collect();
        let near: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + t * d).collect();
        let far: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + 10.0 * t * d).collect();
        let e_near = linearized_backward_error(&p, &near, 1.0, 1.0).unwrap();
        let e_far = linearized_backward_error(&p, &far, 1.0, 1.0).unwrap();
        prop_assert!(e_far > e_near);
        // first-order: the ratio is close to 10
        prop_assert!((e_far / e_near - 10.0).abs() < 1.0, "{}", e_far / e_near);
    }
}

#[test]
fn estimate_bounds_error_of_perturbed_solution() {
    let a = DenseMatrix::from_rows(&[vec![3.0, 1.0], vec![1.0, 2.0], vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    let p = QlsProblem::new(a, vec![1.0, -1.0, 2.0, 0.5], vec![0.3, -0.2], None, "est").unwrap();
    let x = solve_qr(&p).unwrap();
    for k in 6..12 {
        let d = 10f64.powi(-k);
        let xh = vec![x[0] * (1.0 + d), x[1] * (1.0 - d)];
        let err = rel_diff(&xh, &x);
        let est = estimate_cgls_i(&p, &xh).unwrap();
        assert!(est >= err, "k={k}: {est:e} < {err:e}");
        assert!(est <= 1e3 * err, "k={k}: {est:e} vs {err:e}");
    }
}

#[test]
fn regularized_solution_distance_is_bounded() {
    let a = DenseMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
    let p = QlsProblem::new(a, vec![1.0, 0.0, 1.0], vec![1.0, 2.0], None, "sm").unwrap();
    let x = solve_sm(&p, 0.0).unwrap();
    for eps in [2f64.powi(-4), 2f64.powi(-6), 2f64.powi(-8)] {
        let dist = rel_diff(&solve_sm(&p, eps).unwrap(), &x);
        assert!(dist <= sm_proximity_bound(&p, eps).unwrap() * (1.0 + 1e-8));
    }
}
