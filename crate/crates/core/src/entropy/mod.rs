//! The entropy integral E(K) = -int_{S^{n-1}} log h_K(v) dv and its gradient
//! with respect to log-radii.
//!
//! On the normal cone of the vertex rho_i u_i the support function is the
//! linear form v -> rho_i (u_i . v), so E decomposes into per-cone integrals
//! of a smooth integrand; the cones of an antipodal pair contribute equally,
//! hence the factor 2 over stored atoms.

pub mod quad;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::geometry::{Dim, SymmetricPolytope, VertexStatus};

/// Controls for the adaptive quadrature behind [`entropy`].
#[derive(Clone, Copy, Debug)]
pub struct QuadratureSpec {
    /// Gauss-Legendre points per panel (per axis on triangles).
    pub degree: usize,
    /// Maximum dyadic subdivision depth before giving up.
    pub max_subdivision: usize,
    /// Relative error target for the total, with a 1e-10 absolute floor.
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { degree: 16, max_subdivision: 12, rel_tol: 1e-9 }
    }
}

/// Absolute error floor so near-zero entropies do not demand impossible
/// relative accuracy.
pub const ABS_FLOOR: f64 = 1e-10;

/// Unit ball volume and sphere area in dimension n.
#[derive(Clone, Copy, Debug)]
pub struct BallConstants {
    pub dim: usize,
    /// omega_n, the volume of the unit n-ball.
    pub volume: f64,
    /// n omega_n, the area of S^{n-1}.
    pub sphere_area: f64,
}

/// Gamma at half-integer arguments: gamma(half / 2).
fn gamma_half(half: u32) -> f64 {
    if half % 2 == 0 {
        // gamma(k) = (k-1)!
        let k = half / 2;
        (1..k).map(|j| j as f64).product()
    } else {
        // gamma(k + 1/2) = (2k)! / (4^k k!) sqrt(pi)
        let k = (half - 1) / 2;
        let mut v = std::f64::consts::PI.sqrt();
        for j in 1..=k {
            v *= (j as f64) - 0.5;
        }
        v
    }
}

/// omega_n = pi^{n/2} / gamma(n/2 + 1) and the sphere area n omega_n.
pub fn ball_constants(n: usize) -> Result<BallConstants> {
    if n == 0 || n > 16 {
        return Err(Error::BadDimension(n));
    }
    let volume = std::f64::consts::PI.powf(n as f64 / 2.0) / gamma_half(n as u32 + 2);
    Ok(BallConstants { dim: n, volume, sphere_area: n as f64 * volume })
}

/// Signed angle from u to w in the plane, in (-pi, pi].
fn signed_angle_2d(u: Vector3<f64>, w: Vector3<f64>) -> f64 {
    (u.x * w.y - u.y * w.x).atan2(u.dot(&w))
}

/// E(K) via per-cone adaptive quadrature. Errors with
/// [`Error::QuadratureNotConverged`] when some cone exhausts the subdivision
/// budget before meeting its share of the tolerance.
pub fn entropy(poly: &SymmetricPolytope, spec: &QuadratureSpec) -> Result<f64> {
    let integrals = cone_log_integrals(poly, spec)?;
    Ok(-2.0 * integrals.iter().sum::<f64>())
}

/// Per-cone integrals int_{C_i} log(rho_i u_i . v) dv for stored atoms, in
/// atom order (zero for absorbed atoms). Summation order is fixed so results
/// are bit-reproducible.
pub fn cone_log_integrals(poly: &SymmetricPolytope, spec: &QuadratureSpec) -> Result<Vec<f64>> {
    let m = poly.atom_count();
    let mut rough = vec![0.0; m];
    // First a cheap pass to size the absolute budget, then the real pass.
    for i in 0..m {
        rough[i] = cone_integral(poly, i, spec, f64::INFINITY)?.0;
    }
    let scale: f64 = rough.iter().map(|v| v.abs()).sum::<f64>().max(ABS_FLOOR);
    let budget = (spec.rel_tol * scale).max(ABS_FLOOR) / m.max(1) as f64;

    let mut out = vec![0.0; m];
    for i in 0..m {
        let (value, err) = cone_integral(poly, i, spec, budget)?;
        if err > budget {
            return Err(Error::QuadratureNotConverged(format!(
                "cone {i}: error estimate {err:.3e} exceeds budget {budget:.3e} at max_subdivision {}",
                spec.max_subdivision
            )));
        }
        out[i] = value;
    }
    Ok(out)
}

fn cone_integral(
    poly: &SymmetricPolytope,
    atom: usize,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<(f64, f64)> {
    if poly.status()[atom] != VertexStatus::Vertex {
        return Ok((0.0, 0.0));
    }
    let cone = &poly.normal_fan()[atom];
    let u = poly.directions()[atom].vector();
    let rho = poly.radii()[atom];
    let (depth, tol) = if tol.is_finite() {
        (spec.max_subdivision, tol)
    } else {
        (0, f64::INFINITY)
    };
    match poly.dim() {
        Dim::Two => {
            if cone.boundary_normals.len() < 2 {
                return Ok((0.0, 0.0));
            }
            let lo = signed_angle_2d(u, cone.boundary_normals[0]);
            let hi = signed_angle_2d(u, *cone.boundary_normals.last().unwrap());
            let mut f = |d: f64| (rho * d.cos()).ln();
            Ok(quad::integrate_interval(&mut f, lo, hi, spec.degree, depth, tol))
        }
        Dim::Three => {
            let x = u * rho;
            let f = |v: Vector3<f64>| x.dot(&v).ln();
            Ok(quad::integrate_spherical_polygon(
                &f,
                &cone.boundary_normals,
                spec.degree,
                depth,
                tol,
            ))
        }
    }
}

/// Gradient of E with respect to log-radii: dE/d log rho_i = -2 J_i, exact
/// for polytopes (the cone-boundary motion contributes nothing because the
/// support function is continuous across cone walls).
pub fn entropy_gradient(poly: &SymmetricPolytope) -> Vec<f64> {
    poly.normal_fan().iter().map(|c| -2.0 * c.area).collect()
}
