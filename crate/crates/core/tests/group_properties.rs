mod common;

use std::f64::consts::{PI, SQRT_2};

use lie_transport::prelude::*;
use nalgebra::DMatrix;
use rand::Rng;

#[test]
fn composition_is_associative() {
    let s = build_se3_structure(1.5).unwrap();
    let mut rng = common::rng(1);
    for _ in 0..200 {
        let g: Vec<_> = (0..3)
            .map(|_| group_exp(&s, &common::random_vector(&mut rng, 6, 2.0)).unwrap())
            .collect();
        let left = compose(&compose(&g[0], &g[1]).unwrap(), &g[2]).unwrap();
        let right = compose(&g[0], &compose(&g[1], &g[2]).unwrap()).unwrap();
        assert!((left.matrix() - right.matrix()).norm() < 1e-12);
    }
}

#[test]
fn orthogonality_drift_after_many_compositions() {
    let s = build_se3_structure(1.0).unwrap();
    let mut rng = common::rng(2);
    let mut g = GroupElement::identity(&s);
    for _ in 0..10_000 {
        g = compose(
            &g,
            &group_exp(&s, &common::random_vector(&mut rng, 6, 1.0)).unwrap(),
        )
        .unwrap();
    }
    let drift = g.orthogonality_error();
    println!("orthogonality drift after 10000 compositions: {drift:e}");
    assert!(drift < 1e-8);
    assert!((g.rotation().determinant() - 1.0).abs() < 1e-9);
    assert_eq!(
        g.matrix().row(3).iter().copied().collect::<Vec<_>>(),
        vec![0.0, 0.0, 0.0, 1.0]
    );
}

#[test]
fn exp_log_round_trip() {
    let s = build_se3_structure(2.0).unwrap();
    let mut rng = common::rng(3);
    for _ in 0..1000 {
        let mut x = common::random_vector(&mut rng, 6, 3.0);
        // Rotation angle is |x_rot| / sqrt 2; keep it below 0.9 pi.
        let angle = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt() / SQRT_2;
        let target = rng.random_range(0.0..0.9 * PI);
        if angle > 0.0 {
            let mut c = x.as_slice().to_vec();
            for v in &mut c[..3] {
                *v *= target / angle;
            }
            x = AlgebraVector::from_vec(c);
        }
        let g = group_exp(&s, &x).unwrap();
        let back = group_log(&s, &g).unwrap();
        let again = group_exp(&s, &back).unwrap();
        assert!((again.matrix() - g.matrix()).norm() < 1e-10);
        assert!((back - x).norm() < 1e-9);
    }
}

#[test]
fn exp_matches_dense_series() {
    let mut rng = common::rng(4);
    for s in [build_se3_structure(1.5).unwrap(), build_so3_structure()] {
        for scale in [1e-6, 1e-3, 0.5, 2.0, 4.0] {
            for _ in 0..50 {
                let x = common::random_vector(&mut rng, s.dim(), scale);
                let closed = group_exp(&s, &x).unwrap();
                let dense = common::dense_expm(&s.coords_to_matrix(&x).unwrap());
                let err = (closed.matrix() - &dense).norm();
                assert!(err < 1e-11, "scale {scale}: {err:e}");
            }
        }
    }
}

#[test]
fn half_turn_about_z() {
    let s = build_se3_structure(1.5).unwrap();
    let g = group_exp(&s, &(s.unit(2) * (SQRT_2 * PI))).unwrap();
    let dense = common::dense_expm(&s.coords_to_matrix(&(s.unit(2) * (SQRT_2 * PI))).unwrap());
    assert!((g.matrix() - &dense).norm() < 1e-12);
    assert!((g.rotation_angle() - PI).abs() < 1e-12);
    assert!(group_log(&s, &g).is_err());
}

#[test]
fn maurer_cartan_inverts_left_translation() {
    let s = build_se3_structure(1.5).unwrap();
    let mut rng = common::rng(5);
    for _ in 0..100 {
        let g = group_exp(&s, &common::random_vector(&mut rng, 6, 2.0)).unwrap();
        let x = common::random_vector(&mut rng, 6, 2.0);
        let v = left_translate(&s, &g, &x).unwrap();
        assert!((maurer_cartan(&s, &g, &v).unwrap() - x).norm() < 1e-12);
    }
    let g = GroupElement::identity(&s);
    assert!(maurer_cartan(&s, &g, &DMatrix::identity(4, 4)).is_err());
}
