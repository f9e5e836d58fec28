use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use torsionlab::anosov_orbits::{count_fixed_points, identity_residual, poincare_data, primitive_counts, ToralAutomorphism};
use torsionlab::bv_gauge::{random_poly, PolyObservable};
use torsionlab::graded_linalg::{flat_det, sdet, FlatDetMode, GradedOperator};
use torsionlab::linalg::{random_unitary, CMat};
use torsionlab::oracles::{lattice_count, mapping_torus_torsion, power_minus_identity};
use torsionlab::ruelle_zeta::{closed_form_suspension, decomposition_residual, log_zeta, Degree, Orbits};
use torsionlab::twisted_complex::{analytic_torsion, mapping_torus_complex, TorsionConvention};

fn matrix(n: usize) -> impl Strategy<Value = CMat> {
    prop::collection::vec((-0.4f64..0.4, -0.4f64..0.4), n * n)
        .prop_map(move |v| CMat::identity(n, n) + CMat::from_iterator(n, n, v.into_iter().map(|(a, b)| Complex64::new(a, b))))
}

/// Degree-preserving operator on degrees `0..dims.len()` with blocks near the identity.
fn graded(dims: Vec<usize>) -> impl Strategy<Value = GradedOperator> {
    dims.into_iter()
        .map(matrix)
        .collect::<Vec<_>>()
        .prop_map(|blocks| GradedOperator::diagonal(blocks.into_iter().enumerate().map(|(k, b)| (k as i32, b)).collect::<BTreeMap<_, _>>(), 0).unwrap())
}

fn pair_of_graded() -> impl Strategy<Value = (GradedOperator, GradedOperator)> {
    prop::collection::vec(1usize..4, 1..4).prop_flat_map(|dims| (graded(dims.clone()), graded(dims)))
}

/// Hyperbolic companion matrices `[[t, ∓1], [1, 0]]` with determinant ±1.
fn hyperbolic() -> impl Strategy<Value = [[i64; 2]; 2]> {
    (prop_oneof![-7i64..=-3, 3i64..=7], any::<bool>()).prop_map(|(t, unimodular)| if unimodular { [[t, -1], [1, 0]] } else { [[t, 1], [1, 0]] })
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sdet_is_multiplicative((a, b) in pair_of_graded()) {
        let ab = a.compose(&b).unwrap();
        let lhs = sdet(&ab).unwrap();
        let rhs = sdet(&a).unwrap() * sdet(&b).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-12, "{lhs} vs {rhs}");
    }

    #[test]
    fn parity_shift_inverts_sdet((a, _) in pair_of_graded()) {
        let prod = sdet(&a).unwrap() * sdet(&a.shifted(1)).unwrap();
        prop_assert!((prod - 1.0).norm() < 1e-12);
        let back = sdet(&a.shifted(2)).unwrap();
        prop_assert!(rel(back, sdet(&a).unwrap()) < 1e-14);
    }

    #[test]
    fn per_orbit_identity(a in hyperbolic(), j in 1u32..=12) {
        let map = ToralAutomorphism::new(a).unwrap();
        let p = poincare_data(map.eigenvalues(), j);
        prop_assert!((p.alternating_trace() - p.det_i_minus_p).abs() <= 1e-12 * p.det_i_minus_p.abs());
        // the absolute value carries the sign (−1)^n only for an orientable unstable bundle
        if map.unstable_orientable() {
            prop_assert!(identity_residual(map.eigenvalues(), j) < 1e-12);
        }
    }

    #[test]
    fn fixed_points_match_the_lattice_oracle(a in hyperbolic(), j in 1u32..=6) {
        let n = count_fixed_points(a, j).unwrap();
        prop_assert_eq!(n, lattice_count(power_minus_identity(a, j)).into());
    }

    #[test]
    fn primitive_counts_invert_by_divisor_sums(a in hyperbolic(), j_max in 1u32..=18) {
        let prim = primitive_counts(a, j_max).unwrap();
        for j in 1..=j_max {
            let sum: u128 = (1..=j).filter(|d| j % d == 0).map(|d| u128::from(d) * prim[d as usize - 1]).sum();
            prop_assert_eq!(count_fixed_points(a, j).unwrap(), sum.into());
        }
    }

    #[test]
    fn mapping_torus_torsion_matches_the_fibre_formula(a in hyperbolic(), theta in 0.2f64..3.1) {
        let tau = analytic_torsion(&mapping_torus_complex(a, theta).unwrap(), TorsionConvention::RaySinger).unwrap();
        let oracle = mapping_torus_torsion(a, theta);
        prop_assert!((tau / oracle - 1.0).abs() < 1e-10, "{tau} vs {oracle}");
        let inv = analytic_torsion(&mapping_torus_complex(a, theta).unwrap(), TorsionConvention::Reciprocal).unwrap();
        prop_assert!((tau * inv - 1.0).abs() < 1e-12);
    }

    #[test]
    fn euler_product_meets_the_resummation(
        t in 3i64..=5,
        theta in 0.0f64..std::f64::consts::TAU,
        re in 3.0f64..5.0,
        im in -3.0f64..3.0,
    ) {
        let map = ToralAutomorphism::new([[t, -1], [1, 0]]).unwrap();
        let orbits = Orbits::suspension(map, 40).unwrap();
        let lambda = Complex64::new(re, im);
        let cf = closed_form_suspension(&map, theta, lambda);
        for (degree, exact) in [(Degree::Form(0), cf.log_zeta[0]), (Degree::Form(1), cf.log_zeta[1]), (Degree::Form(2), cf.log_zeta[2]), (Degree::Full, cf.log_full)] {
            let ev = log_zeta(&orbits, theta, lambda, degree, 40).unwrap();
            let err = (ev.value - exact).norm();
            prop_assert!(err < ev.truncation_error_bound, "{degree}: {err:e} > {:e}", ev.truncation_error_bound);
        }
        prop_assert!(decomposition_residual(&orbits, theta, lambda, 40).unwrap() < 1e-12);
    }

    #[test]
    fn bv_laplacian_squares_to_zero(seed in any::<u64>(), pairs in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_poly(pairs, 4, 4, None, 8, &mut rng);
        let dd = h.bv_laplacian().unwrap().bv_laplacian().unwrap();
        prop_assert!(dd.is_zero());
    }

    #[test]
    fn bracket_is_graded_antisymmetric(seed in any::<u64>(), pf in 0u8..2, pg in 0u8..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_poly(3, 8, 2, Some(pf), 4, &mut rng);
        let g = random_poly(3, 8, 2, Some(pg), 4, &mut rng);
        // {f, g} = −(−1)^{(|f|+1)(|g|+1)} {g, f}
        let sign = if (pf + 1) * (pg + 1) % 2 == 0 { -1.0 } else { 1.0 };
        let lhs = f.bracket(&g).unwrap();
        let rhs = g.bracket(&f).unwrap().scale(Complex64::new(sign, 0.0));
        prop_assert!(lhs.sub(&rhs).max_coefficient() < 1e-12);
    }

    #[test]
    fn laplacian_is_a_second_order_derivation(seed in any::<u64>(), pf in 0u8..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_poly(3, 8, 2, Some(pf), 4, &mut rng);
        let g = random_poly(3, 8, 2, None, 4, &mut rng);
        // Δ(fg) = Δf g + (−1)^{|f|} f Δg + (−1)^{|f|} {f, g}
        let s = Complex64::new(if pf == 0 { 1.0 } else { -1.0 }, 0.0);
        let lhs = f.mul(&g).unwrap().bv_laplacian().unwrap();
        let rhs = f.bv_laplacian().unwrap().mul(&g).unwrap()
            .add(&f.mul(&g.bv_laplacian().unwrap()).unwrap().scale(s))
            .add(&f.bracket(&g).unwrap().scale(s));
        prop_assert!(lhs.sub(&rhs).max_coefficient() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn flat_det_modes_agree(seed in any::<u64>(), eigs in prop::collection::vec(0.3f64..6.0, 1..=5)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = eigs.len();
        let u = random_unitary(n, &mut rng);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, eigs.iter().map(|&e| Complex64::new(e, 0.0))));
        let m = &u * d * u.adjoint();
        let zero = Complex64::new(0.0, 0.0);
        let spectral = flat_det(&m, zero, FlatDetMode::Spectral).unwrap();
        let mellin = flat_det(&m, zero, FlatDetMode::Mellin).unwrap();
        let product: f64 = eigs.iter().product();
        prop_assert!((spectral.modulus() / product - 1.0).abs() < 1e-10);
        prop_assert!(rel(mellin.value, spectral.value) < 1e-6);
    }
}

#[test]
fn zero_observable_has_no_laplacian() {
    assert!(PolyObservable::zero(2, 4).bv_laplacian().unwrap().is_zero());
}
