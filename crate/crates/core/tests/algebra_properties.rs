#![allow(clippy::needless_range_loop)]

mod common;

use std::f64::consts::FRAC_1_SQRT_2;

use lie_transport::prelude::*;
use proptest::prelude::*;

fn structure(beta_index: usize) -> LieGroupStructure {
    build_se3_structure([1.0, 1.5, 2.0][beta_index]).unwrap()
}

fn coords() -> impl Strategy<Value = AlgebraVector> {
    proptest::collection::vec(-2.0..2.0f64, 6).prop_map(AlgebraVector::from_vec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bracket_is_antisymmetric(b in 0..3usize, x in coords(), y in coords()) {
        let s = structure(b);
        let sum = s.bracket(&x, &y).unwrap() + s.bracket(&y, &x).unwrap();
        prop_assert!(sum.norm() < 1e-12);
    }

    #[test]
    fn bracket_matches_matrix_commutator(b in 0..3usize, x in coords(), y in coords()) {
        let s = structure(b);
        let (mx, my) = (s.coords_to_matrix(&x).unwrap(), s.coords_to_matrix(&y).unwrap());
        let commutator = &mx * &my - &my * &mx;
        let via_constants = s.coords_to_matrix(&s.bracket(&x, &y).unwrap()).unwrap();
        prop_assert!((commutator - via_constants).norm() < 1e-12);
    }

    #[test]
    fn jacobi_identity(b in 0..3usize, x in coords(), y in coords(), z in coords()) {
        let s = structure(b);
        let br = |a: &AlgebraVector, c: &AlgebraVector| s.bracket(a, c).unwrap();
        let sum = br(&x, &br(&y, &z)) + br(&y, &br(&z, &x)) + br(&z, &br(&x, &y));
        prop_assert!(sum.norm() < 1e-10);
    }

    #[test]
    fn ad_star_is_metric_dual(b in 0..3usize, a in coords(), x in coords(), c in coords()) {
        let s = structure(b);
        let lhs = s.inner(&s.ad_star(&a, &x).unwrap(), &c).unwrap();
        let rhs = s.inner(&x, &s.bracket(&a, &c).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn alpha_is_metric_compatible(b in 0..3usize, x in coords(), y in coords(), z in coords()) {
        let s = structure(b);
        let lhs = s.inner(&s.connection_alpha(&x, &y).unwrap(), &z).unwrap()
            + s.inner(&y, &s.connection_alpha(&x, &z).unwrap()).unwrap();
        prop_assert!(lhs.abs() < 1e-12);
    }

    #[test]
    fn alpha_is_torsion_free(b in 0..3usize, x in coords(), y in coords()) {
        let s = structure(b);
        let torsion = s.connection_alpha(&x, &y).unwrap()
            - s.connection_alpha(&y, &x).unwrap()
            - s.bracket(&x, &y).unwrap();
        prop_assert!(torsion.norm() < 1e-12);
    }

    #[test]
    fn coordinates_round_trip(b in 0..3usize, x in coords()) {
        let s = structure(b);
        let back = s.matrix_to_coords(&s.coords_to_matrix(&x).unwrap()).unwrap();
        prop_assert!((back - x).norm() < 1e-14);
    }
}

#[test]
fn structure_constants_match_commutator_oracle() {
    for beta in [1.0, 1.5, 2.0] {
        let s = build_se3_structure(beta).unwrap();
        let oracle = common::commutator_constants(s.basis());
        for i in 0..6 {
            for j in 0..6 {
                for k in 0..6 {
                    let diff = (s.structure_constant(i, j, k) - oracle[i][j][k]).abs();
                    assert!(diff < 1e-14, "beta={beta} C[{i}][{j}][{k}] off by {diff}");
                }
            }
        }
    }
}

#[test]
fn structure_constants_are_antisymmetric() {
    let s = build_se3_structure(1.5).unwrap();
    for i in 0..6 {
        for j in 0..6 {
            for k in 0..6 {
                assert_eq!(
                    s.structure_constant(i, j, k),
                    -s.structure_constant(j, i, k)
                );
            }
        }
    }
}

#[test]
fn alpha_matches_structure_constant_formula() {
    for beta in [1.0, 1.5, 2.0] {
        let s = build_se3_structure(beta).unwrap();
        let c = common::commutator_constants(s.basis());
        for i in 0..6 {
            for j in 0..6 {
                let alpha = s.connection_alpha(&s.unit(i), &s.unit(j)).unwrap();
                for k in 0..6 {
                    let expected = 0.5 * (c[i][j][k] - c[j][k][i] + c[k][i][j]);
                    assert!(
                        (alpha[k] - expected).abs() < 1e-12,
                        "beta={beta} ({i},{j},{k})"
                    );
                }
            }
        }
    }
}

#[test]
fn ad_star_brute_force_example() {
    let s = build_se3_structure(1.5).unwrap();
    // <e3, [e1, e_k]> for each k.
    let brute: Vec<f64> = (0..6)
        .map(|k| {
            s.inner(&s.unit(2), &s.bracket(&s.unit(0), &s.unit(k)).unwrap())
                .unwrap()
        })
        .collect();
    let ad = s.ad_star(&s.unit(0), &s.unit(2)).unwrap();
    let expected = [0.0, FRAC_1_SQRT_2, 0.0, 0.0, 0.0, 0.0];
    for k in 0..6 {
        assert!((brute[k] - expected[k]).abs() < 1e-15);
        assert!((ad[k] - brute[k]).abs() < 1e-15);
    }
}
