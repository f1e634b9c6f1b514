//! Group elements in their matrix representation.
//!
//! SO(3) and SE(3) get closed-form exponential and logarithm (Rodrigues formula
//! and the `V` matrix of the translation part). Other matrix groups fall back to
//! a scaling-and-squaring Taylor series for the exponential.

use nalgebra::{DMatrix, Matrix3, Vector3};

use crate::algebra::{AlgebraVector, GroupKind, LieGroupStructure};
use crate::error::{Error, Result};

/// Below this rotation angle the Rodrigues coefficients switch to Taylor series.
const SMALL_ANGLE: f64 = 1e-4;

/// Margin below pi at which the logarithm refuses to pick a branch.
pub const BRANCH_MARGIN: f64 = 1e-6;

/// A group element as a square matrix. SE(3) uses homogeneous coordinates
/// `[[R, t], [0, 1]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    kind: GroupKind,
    matrix: DMatrix<f64>,
}

impl GroupElement {
    pub fn identity(s: &LieGroupStructure) -> Self {
        Self {
            kind: s.kind(),
            matrix: DMatrix::identity(s.matrix_size(), s.matrix_size()),
        }
    }

    /// Wraps a matrix without validation.
    pub fn from_matrix(s: &LieGroupStructure, matrix: DMatrix<f64>) -> Result<Self> {
        s.check_matrix(&matrix)?;
        Ok(Self {
            kind: s.kind(),
            matrix,
        })
    }

    /// SE(3) element from a rotation and a translation.
    pub fn from_rotation_translation(rotation: &Matrix3<f64>, translation: &Vector3<f64>) -> Self {
        let mut m = DMatrix::identity(4, 4);
        m.view_mut((0, 0), (3, 3)).copy_from(rotation);
        m.view_mut((0, 3), (3, 1)).copy_from(translation);
        Self {
            kind: GroupKind::Se3,
            matrix: m,
        }
    }

    /// SO(3) element from a rotation matrix.
    pub fn from_rotation(rotation: &Matrix3<f64>) -> Self {
        Self {
            kind: GroupKind::So3,
            matrix: DMatrix::from_iterator(3, 3, rotation.iter().copied()),
        }
    }

    pub(crate) fn with_matrix(&self, matrix: DMatrix<f64>) -> Self {
        Self {
            kind: self.kind,
            matrix,
        }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    /// Upper-left 3x3 block (SO(3), SE(3)).
    pub fn rotation(&self) -> Matrix3<f64> {
        self.matrix.fixed_view::<3, 3>(0, 0).into_owned()
    }

    /// Translation column (SE(3) only; zero for SO(3)).
    pub fn translation(&self) -> Vector3<f64> {
        match self.kind {
            GroupKind::Se3 => self.matrix.fixed_view::<3, 1>(0, 3).into_owned(),
            _ => Vector3::zeros(),
        }
    }

    /// Rotation angle in `[0, pi]` of the rotation block.
    pub fn rotation_angle(&self) -> f64 {
        rotation_angle(&self.rotation())
    }

    /// Max-abs deviation of `R^T R` from the identity.
    pub fn orthogonality_error(&self) -> f64 {
        let r = self.rotation();
        (r.transpose() * r - Matrix3::identity()).abs().max()
    }
}

fn rotation_angle(r: &Matrix3<f64>) -> f64 {
    let sin = 0.5 * vee(&(r - r.transpose())).norm();
    let cos = 0.5 * (r.trace() - 1.0);
    sin.atan2(cos)
}

fn check_sizes(a: &GroupElement, b: &GroupElement) -> Result<()> {
    if a.matrix.shape() == b.matrix.shape() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a.matrix.nrows(),
            found: b.matrix.nrows(),
        })
    }
}

/// Group product `a * b`.
pub fn compose(a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    check_sizes(a, b)?;
    Ok(a.with_matrix(&a.matrix * &b.matrix))
}

/// Closed-form inverse: `R^T` for rotations, `(R^T, -R^T t)` for rigid motions.
pub fn inverse(g: &GroupElement) -> GroupElement {
    match g.kind {
        GroupKind::So3 => g.with_matrix(g.matrix.transpose()),
        GroupKind::Se3 => {
            let rt = g.rotation().transpose();
            let t = -(rt * g.translation());
            GroupElement::from_rotation_translation(&rt, &t)
        }
        GroupKind::Matrix => g.with_matrix(
            g.matrix
                .clone()
                .try_inverse()
                .expect("group elements are invertible"),
        ),
    }
}

fn hat(w: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -w.z, w.y, w.z, 0.0, -w.x, -w.y, w.x, 0.0)
}

fn vee(m: &Matrix3<f64>) -> Vector3<f64> {
    Vector3::new(m[(2, 1)], m[(0, 2)], m[(1, 0)])
}

/// `sin(t)/t`, `(1 - cos t)/t^2`, `(t - sin t)/t^3`.
fn rodrigues_coefficients(theta: f64) -> (f64, f64, f64) {
    if theta < SMALL_ANGLE {
        let t2 = theta * theta;
        (
            1.0 - t2 / 6.0 + t2 * t2 / 120.0,
            0.5 - t2 / 24.0 + t2 * t2 / 720.0,
            1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0,
        )
    } else {
        // Half-angle and (1 - A) forms avoid cancellation at small angles.
        let a = theta.sin() / theta;
        let half = (0.5 * theta).sin() / theta;
        (a, 2.0 * half * half, (1.0 - a) / (theta * theta))
    }
}

/// Returns `(R, V)` with `R = exp(hat(w))` and `V` the left Jacobian of SO(3).
fn so3_exp_with_v(w: &Vector3<f64>) -> (Matrix3<f64>, Matrix3<f64>) {
    let theta = w.norm();
    let (a, b, c) = rodrigues_coefficients(theta);
    let k = hat(w);
    let k2 = k * k;
    let id = Matrix3::identity();
    (id + k * a + k2 * b, id + k * b + k2 * c)
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm(m: &DMatrix<f64>) -> DMatrix<f64> {
    let norm = m.norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m / 2f64.powi(squarings as i32);
    let n = m.nrows();
    let mut result = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=20 {
        term = &term * &scaled / k as f64;
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Group exponential of an algebra element (one-parameter subgroup at time 1).
pub fn group_exp(s: &LieGroupStructure, x: &AlgebraVector) -> Result<GroupElement> {
    let m = s.coords_to_matrix(x)?;
    Ok(exp_matrix(s.kind(), &m))
}

pub(crate) fn exp_matrix(kind: GroupKind, m: &DMatrix<f64>) -> GroupElement {
    match kind {
        GroupKind::So3 => {
            let w = vee(&m.fixed_view::<3, 3>(0, 0).into_owned());
            let (r, _) = so3_exp_with_v(&w);
            GroupElement::from_rotation(&r)
        }
        GroupKind::Se3 => {
            let w = vee(&m.fixed_view::<3, 3>(0, 0).into_owned());
            let u = m.fixed_view::<3, 1>(0, 3).into_owned();
            let (r, v) = so3_exp_with_v(&w);
            GroupElement::from_rotation_translation(&r, &(v * u))
        }
        GroupKind::Matrix => GroupElement {
            kind,
            matrix: expm(m),
        },
    }
}

/// Returns `(hat(w), V^-1)` with `R = exp(hat(w))`, principal branch.
fn so3_log_with_vinv(r: &Matrix3<f64>) -> Result<(Matrix3<f64>, Matrix3<f64>)> {
    let theta = rotation_angle(r);
    let limit = std::f64::consts::PI - BRANCH_MARGIN;
    if theta >= limit {
        return Err(Error::BranchCut {
            angle: theta,
            limit,
        });
    }
    let skew = r - r.transpose();
    let t2 = theta * theta;
    let factor = if theta < SMALL_ANGLE {
        0.5 * (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0)
    } else {
        theta / (2.0 * theta.sin())
    };
    let k = skew * factor;
    let (a, b, _) = rodrigues_coefficients(theta);
    let coefficient = if theta < SMALL_ANGLE {
        1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0
    } else {
        (1.0 - a / (2.0 * b)) / t2
    };
    let vinv = Matrix3::identity() - k * 0.5 + k * k * coefficient;
    Ok((k, vinv))
}

/// Principal-branch group logarithm. Rotation angles within
/// [`BRANCH_MARGIN`] of pi are rejected.
pub fn group_log(s: &LieGroupStructure, g: &GroupElement) -> Result<AlgebraVector> {
    s.check_matrix(g.matrix())?;
    let size = s.matrix_size();
    let mut m = DMatrix::zeros(size, size);
    match s.kind() {
        GroupKind::So3 => {
            let (k, _) = so3_log_with_vinv(&g.rotation())?;
            m.copy_from(&k);
        }
        GroupKind::Se3 => {
            let (k, vinv) = so3_log_with_vinv(&g.rotation())?;
            m.view_mut((0, 0), (3, 3)).copy_from(&k);
            m.view_mut((0, 3), (3, 1))
                .copy_from(&(vinv * g.translation()));
        }
        GroupKind::Matrix => return Err(Error::LogUnsupported),
    }
    s.matrix_to_coords(&m)
}

/// Maurer-Cartan form: pulls a tangent matrix at `g` back to the algebra,
/// `theta_g(v) = g^-1 v`.
pub fn maurer_cartan(
    s: &LieGroupStructure,
    g: &GroupElement,
    v: &DMatrix<f64>,
) -> Result<AlgebraVector> {
    s.check_matrix(g.matrix())?;
    s.check_matrix(v)?;
    s.matrix_to_coords(&(inverse(g).matrix * v))
}

/// Differential of left translation: `dL_g x = g * hat(x)`.
pub fn left_translate(
    s: &LieGroupStructure,
    g: &GroupElement,
    x: &AlgebraVector,
) -> Result<DMatrix<f64>> {
    s.check_matrix(g.matrix())?;
    Ok(&g.matrix * s.coords_to_matrix(x)?)
}

/// Snaps the rotation block to the nearest rotation (polar decomposition) and
/// restores the homogeneous bottom row. Generic matrix groups are returned
/// unchanged.
pub fn project_to_group(g: &GroupElement) -> GroupElement {
    if g.kind == GroupKind::Matrix {
        return g.clone();
    }
    let svd = g.rotation().svd(true, true);
    let (mut u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    if (u * vt).determinant() < 0.0 {
        u.column_mut(2).neg_mut();
    }
    let r = u * vt;
    match g.kind {
        GroupKind::Se3 => GroupElement::from_rotation_translation(&r, &g.translation()),
        _ => GroupElement::from_rotation(&r),
    }
}
