use proptest::prelude::*;
use radiuslab_core::ensembles::{random_unitary, stream_rng};
use radiuslab_core::linalg::{cartesian_decomposition, off_diag_embed, operator_norm};
use radiuslab_core::radius::{
    numerical_radius, numerical_radius_oracle, off_diag_numerical_radius, weighted_numerical_radius, SweepConfig,
};
use radiuslab_core::{ComplexMatrix, C64};

fn matrix(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim).prop_flat_map(|n| {
        prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n * n).prop_map(move |v| {
            ComplexMatrix::new(n, n, v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).unwrap()
        })
    })
}

fn pair(max_dim: usize) -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
    (1..=max_dim).prop_flat_map(|n| {
        let entries = || prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n * n);
        (entries(), entries()).prop_map(move |(a, b)| {
            let build = |v: Vec<(f64, f64)>| {
                ComplexMatrix::new(n, n, v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).unwrap()
            };
            (build(a), build(b))
        })
    })
}

fn omega(s: &ComplexMatrix) -> f64 {
    numerical_radius(s, &SweepConfig::default()).unwrap()
}

fn norm(s: &ComplexMatrix) -> f64 {
    operator_norm(s).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn radius_between_half_norm_and_norm(s in matrix(8)) {
        let (w, n) = (omega(&s), norm(&s));
        let eps = 1e-7 * n;
        prop_assert!(0.5 * n - eps <= w && w <= n + eps, "ω = {w}, ‖S‖ = {n}");
    }

    #[test]
    fn radius_is_rotation_invariant(s in matrix(6), phi in 0.0f64..std::f64::consts::TAU) {
        let rotated = s.scale(C64::from_polar(1.0, phi));
        prop_assert!((omega(&s) - omega(&rotated)).abs() <= 1e-9 * norm(&s).max(1.0));
    }

    #[test]
    fn radius_is_unitarily_invariant(s in matrix(6), seed in any::<u64>()) {
        let u = random_unitary(s.rows(), &mut stream_rng(seed, 0));
        let moved = &(&u * &s) * &u.adjoint();
        prop_assert!((omega(&s) - omega(&moved)).abs() <= 1e-9 * norm(&s).max(1.0));
    }

    #[test]
    fn radius_is_lipschitz((s, t) in pair(6)) {
        let gap = (omega(&s) - omega(&t)).abs();
        prop_assert!(gap <= norm(&(&s - &t)) + 1e-9 * norm(&s).max(norm(&t)).max(1.0));
    }

    #[test]
    fn oracle_never_exceeds_sweep(s in matrix(5), seed in any::<u64>()) {
        let oracle = numerical_radius_oracle(&s, 4, seed).unwrap();
        prop_assert!(oracle <= omega(&s) + 1e-9 * norm(&s).max(1.0));
    }

    #[test]
    fn real_part_radius_is_its_norm(s in matrix(6)) {
        let (re, im) = cartesian_decomposition(&s).unwrap();
        prop_assert!((omega(&re) - norm(&re)).abs() <= 1e-9 * norm(&re).max(1.0));
        let w = omega(&s);
        prop_assert!(norm(&re) <= w + 1e-9 * w.max(1.0));
        prop_assert!(norm(&im) <= w + 1e-9 * w.max(1.0));
    }

    #[test]
    fn off_diagonal_identity((s, t) in pair(5)) {
        let closed = off_diag_numerical_radius(&s, &t, &SweepConfig::default()).unwrap();
        let block = omega(&off_diag_embed(&s, &t).unwrap());
        prop_assert!((closed - block).abs() <= 1e-7 * block.max(1e-12));
    }

    #[test]
    fn weighted_radius_at_infinity_is_radius(s in matrix(6)) {
        let w = weighted_numerical_radius(&s, f64::INFINITY, &SweepConfig::default()).unwrap();
        prop_assert!((w - omega(&s)).abs() <= 1e-7 * norm(&s).max(1e-12));
        let w2 = weighted_numerical_radius(&s, 2.0, &SweepConfig::default()).unwrap();
        prop_assert!(w2 >= w - 1e-9 * w.max(1.0));
    }
}

#[test]
fn normal_matrices_attain_their_norm() {
    for seed in 0..50 {
        let mut rng = stream_rng(seed, 0);
        let n = 2 + (seed as usize % 6);
        let u = random_unitary(n, &mut rng);
        let d: Vec<C64> = (0..n)
            .map(|k| C64::from_polar(1.0 + k as f64, seed as f64 + k as f64))
            .collect();
        let s = &(&u * &ComplexMatrix::from_diag(&d)) * &u.adjoint();
        let (w, n2) = (omega(&s), norm(&s));
        assert!((w - n2).abs() <= 1e-8 * n2, "ω = {w}, ‖S‖ = {n2}");
    }
}

#[test]
fn nilpotent_blocks_attain_half_norm_bound() {
    let j = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
    assert!((omega(&j) - 0.5).abs() <= 1e-12);
    // ω of the n×n shift is cos(π/(n+1))
    for n in 2..8 {
        let rows: Vec<Vec<C64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| C64::new(if j == i + 1 { 1.0 } else { 0.0 }, 0.0))
                    .collect()
            })
            .collect();
        let shift = ComplexMatrix::from_rows(&rows).unwrap();
        let expected = (std::f64::consts::PI / (n as f64 + 1.0)).cos();
        assert!((omega(&shift) - expected).abs() <= 1e-10, "n = {n}");
    }
}
