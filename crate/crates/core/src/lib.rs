//! Geodesics and parallel transport on matrix Lie groups with a
//! left-invariant metric.
//!
//! Everything is computed in the Lie algebra: the geodesic equation reduces to
//! `omega' = ad*_omega(omega)` for the left-angular velocity and parallel
//! transport to `zeta' = -alpha(omega, zeta)` for the pulled-back vector. SE(3)
//! with an anisotropic translation weight and SO(3) with its bi-invariant metric
//! are provided; other matrix groups can be described by their basis.
//!
//! ```
//! use lie_transport::prelude::*;
//!
//! let se3 = build_se3_structure(1.5).unwrap();
//! let base = GroupElement::identity(&se3);
//! let direction = AlgebraVector::from_slice(&[0.3, -0.2, 0.5, 1.0, 0.0, 0.4]);
//! let vector = AlgebraVector::from_slice(&[0.0, 1.0, 0.0, 0.5, 0.0, 0.0]);
//! let (end, zeta) =
//!     parallel_transport_geodesic(&se3, &base, &direction, &vector, 100, Scheme::Rk4).unwrap();
//! // Parallel transport is an isometry.
//! assert!((zeta.norm() - vector.norm()).abs() < 1e-10);
//! # let _ = end;
//! ```

pub mod algebra;
pub mod error;
pub mod geometry;
pub mod group;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::algebra::{
        build_se3_structure, build_so3_structure, AlgebraVector, GroupKind, LieGroupStructure,
    };
    pub use crate::error::{Error, Result};
    pub use crate::geometry::{
        curve_velocity_mismatch, geodesic_rhs, integrate_geodesic, integrate_transport,
        parallel_transport_curve, parallel_transport_geodesic, pole_ladder, riemannian_exp,
        riemannian_log, transport_rhs, GeodesicState, Scheme, ShootingOptions, TransportState,
    };
    pub use crate::group::{
        compose, group_exp, group_log, inverse, left_translate, maurer_cartan, project_to_group,
        GroupElement,
    };
}
