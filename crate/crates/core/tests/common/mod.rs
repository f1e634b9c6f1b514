//! Independent oracles shared by the integration tests. Nothing here goes
//! through the structure constants or the closed-form exponential.

#![allow(dead_code)]

use lie_transport::prelude::*;
use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> AlgebraVector {
    AlgebraVector::from_vec((0..dim).map(|_| rng.random_range(-scale..scale)).collect())
}

pub fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> AlgebraVector {
    let v = random_vector(rng, dim, 1.0);
    let n = v.norm();
    v * (1.0 / n)
}

/// Dense exponential: 30 Taylor terms after scaling by a power of two.
pub fn dense_expm(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut squarings = 0;
    let mut scaled = m.clone();
    while scaled.norm() > 0.25 {
        scaled /= 2.0;
        squarings += 1;
    }
    let n = m.nrows();
    let mut sum = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=30 {
        term = &term * &scaled / k as f64;
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn dense_expm3(m: &Matrix3<f64>) -> Matrix3<f64> {
    let d = dense_expm(&DMatrix::from_iterator(3, 3, m.iter().copied()));
    Matrix3::from_iterator(d.iter().copied())
}

/// Coordinates of `m` in `basis` by least squares on the vectorised matrices.
pub fn project(basis: &[DMatrix<f64>], m: &DMatrix<f64>) -> DVector<f64> {
    let rows = m.len();
    let a = DMatrix::from_fn(rows, basis.len(), |r, c| basis[c].as_slice()[r]);
    let b = DVector::from_column_slice(m.as_slice());
    a.svd(true, true).solve(&b, 1e-14).unwrap()
}

/// `C[i][j][k]` from matrix commutators.
pub fn commutator_constants(basis: &[DMatrix<f64>]) -> Vec<Vec<Vec<f64>>> {
    let n = basis.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = &basis[i] * &basis[j] - &basis[j] * &basis[i];
                    project(basis, &c).iter().copied().collect()
                })
                .collect()
        })
        .collect()
}

pub fn hat(w: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -w.z, w.y, w.z, 0.0, -w.x, -w.y, w.x, 0.0)
}

pub fn vee(k: &Matrix3<f64>) -> Vector3<f64> {
    Vector3::new(k[(2, 1)], k[(0, 2)], k[(1, 0)])
}

/// Rotational and translational parts of SE(3) coordinates at beta = 1:
/// the rotation vector is `x_rot / sqrt 2`.
pub fn split_se3(x: &AlgebraVector) -> (Vector3<f64>, Vector3<f64>) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (
        Vector3::new(x[0], x[1], x[2]) * s,
        Vector3::new(x[3], x[4], x[5]),
    )
}

pub fn join_se3(w: &Vector3<f64>, u: &Vector3<f64>) -> AlgebraVector {
    let s = std::f64::consts::SQRT_2;
    AlgebraVector::from_slice(&[w.x * s, w.y * s, w.z * s, u.x, u.y, u.z])
}

/// Closed-form SO(3) transport with constant velocity: `Ad_{exp(-w/2)} z`,
/// as rotation vectors, computed by matrix conjugation.
pub fn so3_transport_oracle(w: &Vector3<f64>, z: &Vector3<f64>) -> Vector3<f64> {
    let half = dense_expm3(&(hat(w) * -0.5));
    vee(&(half * hat(z) * half.transpose()))
}

/// Geodesic of SO(3) x R^3 with the product metric, from (R0, t0) with
/// left-angular velocity x. Returns (R1, t1).
pub fn product_exp(
    r0: &Matrix3<f64>,
    t0: &Vector3<f64>,
    x: &AlgebraVector,
) -> (Matrix3<f64>, Vector3<f64>) {
    let (w, u) = split_se3(x);
    (r0 * dense_expm3(&hat(&w)), t0 + r0 * u)
}

/// Parallel transport in SO(3) x R^3 of the left-coordinates `z` along the
/// product geodesic with left-angular velocity `x`, over unit time.
pub fn product_transport(x: &AlgebraVector, z: &AlgebraVector) -> AlgebraVector {
    let (w, _) = split_se3(x);
    let (zw, zu) = split_se3(z);
    let rot = so3_transport_oracle(&w, &zw);
    // The ambient translation vector R(t) z_u(t) is constant.
    let trans = dense_expm3(&hat(&w)).transpose() * zu;
    join_se3(&rot, &trans)
}

/// Product-metric logarithm between two SE(3) elements, at beta = 1.
pub fn product_log(
    r0: &Matrix3<f64>,
    t0: &Vector3<f64>,
    r1: &Matrix3<f64>,
    t1: &Vector3<f64>,
) -> AlgebraVector {
    let rel = r0.transpose() * r1;
    let sin = 0.5 * vee(&(rel - rel.transpose())).norm();
    let cos = 0.5 * (rel.trace() - 1.0);
    let theta = sin.atan2(cos);
    let k = (rel - rel.transpose()) * (0.5 * theta / sin);
    join_se3(&vee(&k), &(r0.transpose() * (t1 - t0)))
}
