//! Aleksandrov integral curvature of symmetric polytopes and its Lp variant.
//!
//! For a polytope K with the origin interior, the integral curvature of the
//! atom pair ±u_i is the spherical area of the normal cone at the vertex
//! rho_i u_i (zero for absorbed atoms). The curvatures of all vertices tile
//! the sphere, so summed over both signs they add up to the sphere area.

use nalgebra::Vector3;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Dim, DiscreteEvenMeasure, SymmetricPolytope};

/// Lp curvature of every stored atom pair, plus totals over the full
/// antipodal support (twice the stored sums).
#[derive(Clone, Debug)]
pub struct CurvatureResult {
    pub p: f64,
    /// False when p was accepted for exploration outside (-1, 0).
    pub p_in_range: bool,
    /// Aleksandrov curvature J_i per stored atom.
    pub per_atom_j: Vec<f64>,
    /// Lp curvature rho_i^p J_i per stored atom.
    pub per_atom_jp: Vec<f64>,
    /// Total mass of J over both antipodes; equals the sphere area.
    pub total_j: f64,
    pub total_jp: f64,
}

/// Monte Carlo estimate of the per-atom curvature with binomial standard
/// errors; used as an independent cross check of the exact cone areas.
#[derive(Clone, Debug)]
pub struct McCurvature {
    pub estimates: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub samples: u64,
}

/// Area of the unit sphere S^{n-1}: 2 pi for n = 2, 4 pi for n = 3.
pub fn sphere_area(dim: Dim) -> f64 {
    match dim {
        Dim::Two => 2.0 * std::f64::consts::PI,
        Dim::Three => 4.0 * std::f64::consts::PI,
    }
}

/// Aleksandrov curvature J_i of each stored atom: the area of the normal
/// cone at rho_i u_i. Absorbed atoms carry zero.
pub fn integral_curvature(poly: &SymmetricPolytope) -> Vec<f64> {
    poly.normal_fan().iter().map(|c| c.area).collect()
}

/// Lp integral curvature rho_i^p J_i. Any nonzero p is accepted so the
/// CLI can explore outside the contract range; `p_in_range` records whether
/// p lies in (-1, 0).
pub fn lp_curvature(poly: &SymmetricPolytope, p: f64) -> Result<CurvatureResult> {
    if p == 0.0 || !p.is_finite() {
        return Err(Error::PZero);
    }
    let j = integral_curvature(poly);
    let jp: Vec<f64> = j
        .iter()
        .zip(poly.radii())
        .map(|(&ji, &ri)| ri.powf(p) * ji)
        .collect();
    Ok(CurvatureResult {
        p,
        p_in_range: -1.0 < p && p < 0.0,
        total_j: 2.0 * j.iter().sum::<f64>(),
        total_jp: 2.0 * jp.iter().sum::<f64>(),
        per_atom_j: j,
        per_atom_jp: jp,
    })
}

const MC_BATCH: u64 = 1 << 16;

pub(crate) fn sample_sphere<R: Rng>(dim: Dim, rng: &mut R) -> Vector3<f64> {
    loop {
        let x: f64 = rng.gen_range(-1.0..1.0);
        let y: f64 = rng.gen_range(-1.0..1.0);
        let z: f64 = match dim {
            Dim::Two => 0.0,
            Dim::Three => rng.gen_range(-1.0..1.0),
        };
        let v = Vector3::new(x, y, z);
        let n2 = v.norm_squared();
        if n2 > 1e-12 && n2 <= 1.0 {
            return v / n2.sqrt();
        }
    }
}

/// Estimates J_i by sampling uniform sphere directions and assigning each to
/// the atom whose vertex attains the support value there. Batches use
/// independent, stream-indexed generators and are merged in batch order, so
/// the result depends only on `seed` and `samples`, not on thread count.
pub fn mc_curvature_oracle(poly: &SymmetricPolytope, samples: u64, seed: u64) -> McCurvature {
    let m = poly.atom_count();
    let dirs: Vec<Vector3<f64>> = poly.directions().iter().map(|d| d.vector()).collect();
    let radii = poly.radii().to_vec();
    let dim = poly.dim();

    let batches: u64 = samples.div_ceil(MC_BATCH);
    let counts: Vec<Vec<u64>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let todo = MC_BATCH.min(samples - b * MC_BATCH);
            let mut local = vec![0u64; m];
            for _ in 0..todo {
                let v = sample_sphere(dim, &mut rng);
                let mut best = 0usize;
                let mut best_val = f64::NEG_INFINITY;
                for (i, (u, &r)) in dirs.iter().zip(&radii).enumerate() {
                    let val = r * u.dot(&v).abs();
                    if val > best_val {
                        best_val = val;
                        best = i;
                    }
                }
                local[best] += 1;
            }
            local
        })
        .collect();

    let mut total = vec![0u64; m];
    for batch in counts {
        for (t, c) in total.iter_mut().zip(batch) {
            *t += c;
        }
    }

    // A sample lands in the union of both antipodal cones, which has
    // probability 2 J_i / area(S^{n-1}).
    let area = sphere_area(dim);
    let n = samples as f64;
    let estimates: Vec<f64> = total.iter().map(|&c| area * c as f64 / (2.0 * n)).collect();
    let standard_errors: Vec<f64> = total
        .iter()
        .map(|&c| {
            let phat = c as f64 / n;
            area / 2.0 * (phat * (1.0 - phat) / n).sqrt()
        })
        .collect();
    McCurvature { estimates, standard_errors, samples }
}

/// True when the measure's directions span the ambient space; delegates to
/// the rank computed at construction.
pub fn spanning_check(measure: &DiscreteEvenMeasure) -> bool {
    measure.spanning()
}
