//! Lie algebra of a matrix group with a left-invariant metric.
//!
//! Algebra elements are stored as coordinates in a basis that is orthonormal
//! for the metric, so the inner product is the Euclidean dot product of
//! coordinates. Matrices are only a view, obtained through
//! [`LieGroupStructure::coords_to_matrix`].
//!
//! The structure constants `C[i][j][k] = <[e_i, e_j], e_k>` are computed once
//! from matrix commutators when the structure is built, and every bilinear
//! operation (bracket, `ad*`, the connection form) is evaluated from them.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Largest Frobenius residual accepted when projecting a matrix onto the algebra.
pub const SPAN_TOLERANCE: f64 = 1e-9;

/// Which closed forms are available for the group exponential and logarithm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupKind {
    /// Rotations of R^3 as 3x3 matrices.
    So3,
    /// Rigid motions of R^3 in 4x4 homogeneous coordinates.
    Se3,
    /// Any other matrix group. Exponential by scaling and squaring, no logarithm.
    Matrix,
}

/// Coordinates of a Lie algebra element in the orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraVector(DVector<f64>);

impl AlgebraVector {
    pub fn zeros(dim: usize) -> Self {
        Self(DVector::zeros(dim))
    }

    /// The i-th basis vector (0-based).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[i] = 1.0;
        Self(v)
    }

    pub fn from_slice(coords: &[f64]) -> Self {
        Self(DVector::from_column_slice(coords))
    }

    pub fn from_vec(coords: Vec<f64>) -> Self {
        Self(DVector::from_vec(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn into_inner(self) -> DVector<f64> {
        self.0
    }

    /// Euclidean dot product of the coordinates, which is the metric.
    pub fn dot(&self, other: &Self) -> f64 {
        self.0.dot(&other.0)
    }

    /// Metric norm.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    /// `self + factor * other`, in place.
    pub fn axpy(&mut self, factor: f64, other: &Self) {
        self.0.axpy(factor, &other.0, 1.0);
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self(&self.0 * factor)
    }
}

impl From<DVector<f64>> for AlgebraVector {
    fn from(v: DVector<f64>) -> Self {
        Self(v)
    }
}

impl Index<usize> for AlgebraVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Display for AlgebraVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &AlgebraVector {
    type Output = AlgebraVector;

    fn add(self, rhs: &AlgebraVector) -> AlgebraVector {
        AlgebraVector(&self.0 + &rhs.0)
    }
}

impl Add for AlgebraVector {
    type Output = AlgebraVector;

    fn add(self, rhs: AlgebraVector) -> AlgebraVector {
        AlgebraVector(self.0 + rhs.0)
    }
}

impl Add<&AlgebraVector> for AlgebraVector {
    type Output = AlgebraVector;

    fn add(self, rhs: &AlgebraVector) -> AlgebraVector {
        AlgebraVector(self.0 + &rhs.0)
    }
}

impl Add<AlgebraVector> for &AlgebraVector {
    type Output = AlgebraVector;

    fn add(self, rhs: AlgebraVector) -> AlgebraVector {
        AlgebraVector(&self.0 + rhs.0)
    }
}

impl AddAssign<&AlgebraVector> for AlgebraVector {
    fn add_assign(&mut self, rhs: &AlgebraVector) {
        self.0 += &rhs.0;
    }
}

impl Sub for &AlgebraVector {
    type Output = AlgebraVector;

    fn sub(self, rhs: &AlgebraVector) -> AlgebraVector {
        AlgebraVector(&self.0 - &rhs.0)
    }
}

impl Sub for AlgebraVector {
    type Output = AlgebraVector;

    fn sub(self, rhs: AlgebraVector) -> AlgebraVector {
        AlgebraVector(self.0 - rhs.0)
    }
}

impl Sub<&AlgebraVector> for AlgebraVector {
    type Output = AlgebraVector;

    fn sub(self, rhs: &AlgebraVector) -> AlgebraVector {
        AlgebraVector(self.0 - &rhs.0)
    }
}

impl Sub<AlgebraVector> for &AlgebraVector {
    type Output = AlgebraVector;

    fn sub(self, rhs: AlgebraVector) -> AlgebraVector {
        AlgebraVector(&self.0 - rhs.0)
    }
}

impl Neg for &AlgebraVector {
    type Output = AlgebraVector;

    fn neg(self) -> AlgebraVector {
        AlgebraVector(-&self.0)
    }
}

impl Neg for AlgebraVector {
    type Output = AlgebraVector;

    fn neg(self) -> AlgebraVector {
        AlgebraVector(-self.0)
    }
}

impl Mul<f64> for &AlgebraVector {
    type Output = AlgebraVector;

    fn mul(self, rhs: f64) -> AlgebraVector {
        AlgebraVector(&self.0 * rhs)
    }
}

impl Mul<f64> for AlgebraVector {
    type Output = AlgebraVector;

    fn mul(self, rhs: f64) -> AlgebraVector {
        AlgebraVector(self.0 * rhs)
    }
}

impl Mul<&AlgebraVector> for f64 {
    type Output = AlgebraVector;

    fn mul(self, rhs: &AlgebraVector) -> AlgebraVector {
        rhs * self
    }
}

impl Mul<AlgebraVector> for f64 {
    type Output = AlgebraVector;

    fn mul(self, rhs: AlgebraVector) -> AlgebraVector {
        rhs * self
    }
}

/// `m += factor * other`.
pub(crate) fn add_scaled(m: &mut DMatrix<f64>, factor: f64, other: &DMatrix<f64>) {
    m.zip_apply(other, |a, b| *a += factor * b);
}

/// A nonzero structure constant `C[i][j][k]`.
#[derive(Clone, Copy, Debug)]
struct Constant {
    i: usize,
    j: usize,
    k: usize,
    value: f64,
}

/// Immutable description of a matrix Lie group with a left-invariant metric.
#[derive(Clone, Debug)]
pub struct LieGroupStructure {
    kind: GroupKind,
    beta: f64,
    basis: Vec<DMatrix<f64>>,
    /// Frobenius-dual basis: `<dual_i, basis_j>_F = delta_ij`.
    dual: Vec<DMatrix<f64>>,
    constants: Vec<f64>,
    nonzero: Vec<Constant>,
}

/// Rotation generators of so(3): infinitesimal rotations about x, y and z.
fn rotation_generators() -> [nalgebra::Matrix3<f64>; 3] {
    use nalgebra::Matrix3;
    [
        Matrix3::new(0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0),
        Matrix3::new(0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0),
        Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0),
    ]
}

/// Builds SE(3) with the metric `diag(1, 1, 1, beta, 1, 1)`, expressed in the
/// basis that is orthonormal for it.
pub fn build_se3_structure(beta: f64) -> Result<LieGroupStructure> {
    LieGroupStructure::se3(beta)
}

/// Builds SO(3) with its bi-invariant metric.
pub fn build_so3_structure() -> LieGroupStructure {
    LieGroupStructure::so3()
}

impl LieGroupStructure {
    /// SE(3) in homogeneous coordinates. The basis is
    /// `e1..e3 = L_x/sqrt2, L_y/sqrt2, L_z/sqrt2`, `e4 = T_x/sqrt(beta)`,
    /// `e5 = T_y`, `e6 = T_z`, which is orthonormal for the anisotropic metric.
    pub fn se3(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidBeta(beta));
        }
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        let mut basis = Vec::with_capacity(6);
        for gen in rotation_generators() {
            let mut m = DMatrix::zeros(4, 4);
            m.view_mut((0, 0), (3, 3)).copy_from(&(gen * scale));
            basis.push(m);
        }
        for (row, weight) in [(0, 1.0 / beta.sqrt()), (1, 1.0), (2, 1.0)] {
            let mut m = DMatrix::zeros(4, 4);
            m[(row, 3)] = weight;
            basis.push(m);
        }
        Self::from_basis(GroupKind::Se3, basis, beta)
    }

    pub fn so3() -> Self {
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        let basis = rotation_generators()
            .iter()
            .map(|g| DMatrix::from_iterator(3, 3, (g * scale).iter().copied()))
            .collect();
        Self::from_basis(GroupKind::So3, basis, 1.0).expect("so(3) basis is valid")
    }

    /// Builds a structure from an arbitrary basis of matrices, declared
    /// orthonormal for the metric. The basis must be linearly independent and
    /// closed under the commutator.
    pub fn from_basis(kind: GroupKind, basis: Vec<DMatrix<f64>>, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidBeta(beta));
        }
        let Some(first) = basis.first() else {
            return Err(Error::DegenerateBasis("empty basis".into()));
        };
        let size = first.nrows();
        for m in &basis {
            if m.nrows() != size || m.ncols() != size {
                return Err(Error::DegenerateBasis(
                    "basis matrices must be square and of equal size".into(),
                ));
            }
        }
        let dim = basis.len();
        let gram = DMatrix::from_fn(dim, dim, |i, j| basis[i].dot(&basis[j]));
        let gram_inv = gram
            .cholesky()
            .ok_or_else(|| Error::DegenerateBasis("basis matrices are linearly dependent".into()))?
            .inverse();
        let dual = (0..dim)
            .map(|i| {
                let mut d = DMatrix::zeros(size, size);
                for (j, b) in basis.iter().enumerate() {
                    d += b * gram_inv[(i, j)];
                }
                d
            })
            .collect();

        let mut structure = Self {
            kind,
            beta,
            basis,
            dual,
            constants: vec![0.0; dim * dim * dim],
            nonzero: Vec::new(),
        };
        for i in 0..dim {
            for j in 0..dim {
                let commutator = &structure.basis[i] * &structure.basis[j]
                    - &structure.basis[j] * &structure.basis[i];
                let coords = structure.matrix_to_coords(&commutator)?;
                for k in 0..dim {
                    let value = coords[k];
                    structure.constants[(i * dim + j) * dim + k] = value;
                    if value != 0.0 {
                        structure.nonzero.push(Constant { i, j, k, value });
                    }
                }
            }
        }
        Ok(structure)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn matrix_size(&self) -> usize {
        self.basis[0].nrows()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn basis(&self) -> &[DMatrix<f64>] {
        &self.basis
    }

    /// `C[i][j][k] = <[e_i, e_j], e_k>`, 0-based indices.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        let n = self.dim();
        self.constants[(i * n + j) * n + k]
    }

    /// Metric matrix in the basis. Identity by construction.
    pub fn metric_matrix(&self) -> DMatrix<f64> {
        DMatrix::identity(self.dim(), self.dim())
    }

    pub fn zero(&self) -> AlgebraVector {
        AlgebraVector::zeros(self.dim())
    }

    pub fn unit(&self, i: usize) -> AlgebraVector {
        AlgebraVector::unit(self.dim(), i)
    }

    pub(crate) fn check(&self, x: &AlgebraVector) -> Result<()> {
        if x.dim() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            })
        }
    }

    pub(crate) fn check_matrix(&self, m: &DMatrix<f64>) -> Result<()> {
        let size = self.matrix_size();
        if m.nrows() == size && m.ncols() == size {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: size,
                found: if m.nrows() != size {
                    m.nrows()
                } else {
                    m.ncols()
                },
            })
        }
    }

    /// `[x, y]`, evaluated from the structure constants.
    pub fn bracket(&self, x: &AlgebraVector, y: &AlgebraVector) -> Result<AlgebraVector> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &AlgebraVector, y: &AlgebraVector) -> AlgebraVector {
        let mut out = DVector::zeros(self.dim());
        for c in &self.nonzero {
            out[c.k] += x.0[c.i] * y.0[c.j] * c.value;
        }
        AlgebraVector(out)
    }

    /// Metric inner product.
    pub fn inner(&self, x: &AlgebraVector, y: &AlgebraVector) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.dot(y))
    }

    /// Metric dual of the adjoint map: `<ad*_a(b), c> = <b, [a, c]>` for all `c`.
    pub fn ad_star(&self, a: &AlgebraVector, b: &AlgebraVector) -> Result<AlgebraVector> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.ad_star_unchecked(a, b))
    }

    pub(crate) fn ad_star_unchecked(&self, a: &AlgebraVector, b: &AlgebraVector) -> AlgebraVector {
        // (ad*_a b)_k = sum_{i,j} a_i b_j C[i][k][j]
        let mut out = DVector::zeros(self.dim());
        for c in &self.nonzero {
            out[c.j] += a.0[c.i] * b.0[c.k] * c.value;
        }
        AlgebraVector(out)
    }

    /// Levi-Civita connection on left-invariant fields, evaluated at the identity:
    /// `alpha(x, y) = ([x, y] - ad*_x(y) - ad*_y(x)) / 2`.
    pub fn connection_alpha(&self, x: &AlgebraVector, y: &AlgebraVector) -> Result<AlgebraVector> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.connection_alpha_unchecked(x, y))
    }

    pub(crate) fn connection_alpha_unchecked(
        &self,
        x: &AlgebraVector,
        y: &AlgebraVector,
    ) -> AlgebraVector {
        let mut out = DVector::zeros(self.dim());
        for c in &self.nonzero {
            let (i, j, k, v) = (c.i, c.j, c.k, c.value);
            out[k] += x.0[i] * y.0[j] * v;
            out[j] -= (x.0[i] * y.0[k] + y.0[i] * x.0[k]) * v;
        }
        AlgebraVector(out * 0.5)
    }

    /// `sum_i x_i e_i`.
    pub fn coords_to_matrix(&self, x: &AlgebraVector) -> Result<DMatrix<f64>> {
        self.check(x)?;
        Ok(self.coords_to_matrix_unchecked(x))
    }

    pub(crate) fn coords_to_matrix_unchecked(&self, x: &AlgebraVector) -> DMatrix<f64> {
        let size = self.matrix_size();
        let mut m = DMatrix::zeros(size, size);
        for (b, &c) in self.basis.iter().zip(x.0.iter()) {
            if c != 0.0 {
                add_scaled(&mut m, c, b);
            }
        }
        m
    }

    /// Projects a matrix onto the algebra. Fails when the matrix is farther
    /// than [`SPAN_TOLERANCE`] (Frobenius) from the span of the basis.
    pub fn matrix_to_coords(&self, m: &DMatrix<f64>) -> Result<AlgebraVector> {
        self.check_matrix(m)?;
        let coords = AlgebraVector(DVector::from_iterator(
            self.dim(),
            self.dual.iter().map(|d| d.dot(m)),
        ));
        let residual = (m - self.coords_to_matrix_unchecked(&coords)).norm();
        if residual > SPAN_TOLERANCE {
            return Err(Error::NotInAlgebra { residual });
        }
        Ok(coords)
    }
}
