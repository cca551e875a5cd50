//! Numerical solver for the planar and spatial Lp Aleksandrov problem on
//! origin-symmetric polytopes in the singular range -1 < p < 0.
//!
//! Given an even discrete measure mu on the sphere, the solver finds an
//! origin-symmetric polytope K = conv { ±rho_i u_i } whose Lp integral
//! curvature matches mu, by maximizing an entropy-type functional over the
//! radii. The library is organized bottom up:
//!
//! * [`geometry`]: symmetric polytopes, hulls, normal fans;
//! * [`curvature`]: Aleksandrov and Lp integral curvature, Monte Carlo cross
//!   checks;
//! * [`entropy`]: the entropy integral and its gradient, adaptive quadrature;
//! * [`solver`]: the maximization itself plus scale recovery and residual
//!   verification;
//! * [`theory`]: finite-dimensional checks of the degeneracy obstruction that
//!   rules out mass concentrating on great subspheres.

pub mod curvature;
pub mod entropy;
pub mod error;
pub mod geometry;
pub mod solver;
pub mod theory;

pub use error::{Error, Result};
pub use geometry::{
    build_polytope, Dim, Direction, DiscreteEvenMeasure, Facet, HullVertex, NormalCone,
    RadialConfig, SymmetricPolytope, VertexStatus,
};
