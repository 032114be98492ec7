use proptest::prelude::*;
use radiuslab_core::ensembles::{random_unitary, stream_rng};
use radiuslab_core::linalg::{
    cartesian_decomposition, hermitian_eigen, hermitian_eigenvalues, matrix_abs, operator_norm, psd_power,
    schatten_norm, singular_values, spectral_map, spectral_radius_psd_product,
};
use radiuslab_core::{ComplexMatrix, C64};

fn matrix(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim).prop_flat_map(|n| {
        prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n * n).prop_map(move |v| {
            ComplexMatrix::new(n, n, v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).unwrap()
        })
    })
}

fn hermitian(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(max_dim).prop_map(|m| (&m + &m.adjoint()).scale_real(0.5))
}

fn psd(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(max_dim).prop_map(|m| {
        let g = &m.adjoint() * &m;
        (&g + &g.adjoint()).scale_real(0.5)
    })
}

fn unitary(n: usize, seed: u64) -> ComplexMatrix {
    random_unitary(n, &mut stream_rng(seed, 0))
}

fn op_norm(m: &ComplexMatrix) -> f64 {
    operator_norm(m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn eigendecomposition_reconstructs(h in hermitian(8)) {
        let eig = hermitian_eigen(&h).unwrap();
        let n = h.rows();
        let v = &eig.vectors;
        let unitary_err = (&(&v.adjoint() * v) - &ComplexMatrix::identity(n)).frobenius_norm();
        prop_assert!(unitary_err < 1e-12 * n as f64);
        let rebuilt = eig.compose(|l| l);
        prop_assert!(rebuilt.distance(&h) <= 1e-12 * h.frobenius_norm().max(1.0));
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn values_only_path_matches_decomposition(h in hermitian(8)) {
        let full = hermitian_eigen(&h).unwrap().eigenvalues;
        let values = hermitian_eigenvalues(&h).unwrap();
        let scale = op_norm(&h).max(1e-300);
        for (a, b) in full.iter().zip(&values) {
            prop_assert!((a - b).abs() <= 1e-12 * scale.max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn abs_squares_to_gram(s in matrix(7)) {
        let a = matrix_abs(&s).unwrap();
        let gram = &s.adjoint() * &s;
        let scale = op_norm(&s).powi(2).max(1e-12);
        prop_assert!((&a * &a).distance(&gram) <= 1e-9 * scale);
        prop_assert!(a.distance(&a.adjoint()) == 0.0);
    }

    #[test]
    fn complementary_powers_multiply_to_identity_map(a in psd(6), t in 0.0f64..1.0) {
        let f = psd_power(&a, t).unwrap();
        let g = psd_power(&a, 1.0 - t).unwrap();
        let scale = op_norm(&a).max(1e-12);
        prop_assert!((&f * &g).distance(&a) <= 1e-8 * scale);
    }

    #[test]
    fn spectral_map_composes(h in hermitian(6)) {
        let squared = spectral_map(&h, |l| l * l).unwrap();
        let direct = &h * &h;
        prop_assert!(squared.distance(&direct) <= 1e-10 * op_norm(&h).powi(2).max(1.0));
    }

    #[test]
    fn norm_squared_is_norm_of_gram(s in matrix(8)) {
        let n = op_norm(&s);
        let g = op_norm(&(&s * &s.adjoint()));
        prop_assert!((n * n - g).abs() <= 1e-10 * g.max(1.0));
    }

    #[test]
    fn schatten_norms_are_unitarily_invariant(s in matrix(6), seed in any::<u64>(), p in prop_oneof![Just(1.0), Just(2.0), Just(3.5), Just(f64::INFINITY)]) {
        let n = s.rows();
        let (u, v) = (unitary(n, seed), unitary(n, seed.wrapping_add(1)));
        let moved = &(&u * &s) * &v;
        let (a, b) = (schatten_norm(&s, p).unwrap(), schatten_norm(&moved, p).unwrap());
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0));
    }

    #[test]
    fn schatten_two_is_frobenius(s in matrix(8)) {
        let p2 = schatten_norm(&s, 2.0).unwrap();
        prop_assert!((p2 - s.frobenius_norm()).abs() <= 1e-10 * p2.max(1.0));
        let sv = singular_values(&s).unwrap();
        prop_assert!((sv[0] - op_norm(&s)).abs() <= 1e-12 * sv[0].max(1.0));
    }

    #[test]
    fn cartesian_parts_recombine(s in matrix(8)) {
        let (re, im) = cartesian_decomposition(&s).unwrap();
        prop_assert_eq!(re.distance(&re.adjoint()), 0.0);
        prop_assert_eq!(im.distance(&im.adjoint()), 0.0);
        let back = &re + &im.scale(C64::new(0.0, 1.0));
        prop_assert!(back.distance(&s) <= 1e-14 * s.frobenius_norm().max(1.0));
    }

    #[test]
    fn psd_product_radius_matches_power_iteration(a in psd(6), b in psd(6)) {
        prop_assume!(a.rows() == b.rows());
        let r = spectral_radius_psd_product(&a, &b).unwrap();
        // AB is similar to A^{1/2} B A^{1/2}, so its dominant eigenvalue is real and
        // nonnegative: power iteration on AB itself is an independent estimate.
        let ab = &a * &b;
        let n = a.rows();
        let mut x: Vec<C64> = (0..n).map(|i| C64::new(1.0 + i as f64 * 0.37, 0.5 - i as f64 * 0.11)).collect();
        let mut est = 0.0;
        for _ in 0..5000 {
            let y = ab.mul_vec(&x);
            let norm = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                est = 0.0;
                break;
            }
            est = norm / x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            x = y.into_iter().map(|z| z / norm).collect();
        }
        let scale = op_norm(&a) * op_norm(&b);
        // power iteration converges slowly for clustered spectra, so only a loose agreement
        prop_assert!((r - est).abs() <= 1e-3 * scale.max(1e-12), "closed form {r}, iteration {est}");
        prop_assert!(r <= scale * (1.0 + 1e-12) + 1e-12);
    }
}
