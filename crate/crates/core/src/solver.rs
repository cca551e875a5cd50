//! Maximization of the entropy-type functional whose critical points solve
//! the Lp Aleksandrov problem for -1 < p < 0.
//!
//! Phi(Q) = E(Q) / (n omega_n) - (1/p) log(2 sum_i rho_Q(u_i)^{-p} mu_i)
//! is invariant under scaling of Q (degree zero), maximized by projected
//! gradient ascent in log-radii. At a critical point the Lp curvature of the
//! maximizer matches mu after the closed-form scale recovery, which is what
//! [`verify`] checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::curvature::{integral_curvature, sphere_area};
use crate::entropy::{entropy, QuadratureSpec};
use crate::error::{Error, Result};
use crate::geometry::{build_polytope, DiscreteEvenMeasure, RadialConfig, SymmetricPolytope};

/// The data of one solve: target measure, exponent, quadrature controls.
#[derive(Clone, Debug)]
pub struct Objective {
    pub measure: DiscreteEvenMeasure,
    pub p: f64,
    pub quad: QuadratureSpec,
}

impl Objective {
    pub fn new(measure: DiscreteEvenMeasure, p: f64) -> Result<Self> {
        if !(p.is_finite() && -1.0 < p && p < 0.0) {
            return Err(Error::POutOfRange(p));
        }
        measure.require_spanning()?;
        Ok(Objective { measure, p, quad: QuadratureSpec::default() })
    }

    /// Skips the exponent range gate (keeping only p finite and nonzero),
    /// for callers that knowingly run outside the solvable range.
    pub fn with_any_p(measure: DiscreteEvenMeasure, p: f64) -> Result<Self> {
        if !p.is_finite() || p == 0.0 {
            return Err(Error::PZero);
        }
        measure.require_spanning()?;
        Ok(Objective { measure, p, quad: QuadratureSpec::default() })
    }

    pub fn with_quadrature(mut self, quad: QuadratureSpec) -> Self {
        self.quad = quad;
        self
    }

    pub fn polytope(&self, config: &RadialConfig) -> Result<SymmetricPolytope> {
        build_polytope(&self.measure, config)
    }
}

/// Phi at a polytope already built for this objective's measure.
pub fn phi_of(obj: &Objective, poly: &SymmetricPolytope) -> Result<f64> {
    let e = entropy(poly, &obj.quad)?;
    let area = sphere_area(poly.dim());
    Ok(e / area - np_term(obj, poly))
}

/// (1/p) log(2 sum rho_i^{-p} mu_i), the measure-weighted norm part of Phi.
fn np_term(obj: &Objective, poly: &SymmetricPolytope) -> f64 {
    let s: f64 = poly
        .radii()
        .iter()
        .zip(obj.measure.weights())
        .map(|(&r, &w)| r.powf(-obj.p) * w)
        .sum();
    (2.0 * s).ln() / obj.p
}

pub fn phi(obj: &Objective, config: &RadialConfig) -> Result<f64> {
    phi_of(obj, &obj.polytope(config)?)
}

/// Gradient of Phi with respect to log-radii, evaluated at the canonical
/// form: -2 J_i / (n omega_n) + w_i with w the normalized Lp weights.
/// At absorbed atoms (J_i = 0) this is the one-sided derivative in the
/// direction that revives the vertex. Components always sum to zero.
pub fn phi_gradient_of(obj: &Objective, poly: &SymmetricPolytope) -> Vec<f64> {
    let j = integral_curvature(poly);
    let area = sphere_area(poly.dim());
    let lp: Vec<f64> = poly
        .radii()
        .iter()
        .zip(obj.measure.weights())
        .map(|(&r, &w)| r.powf(-obj.p) * w)
        .collect();
    let total: f64 = lp.iter().sum();
    j.iter().zip(&lp).map(|(&ji, &li)| -2.0 * ji / area + li / total).collect()
}

pub fn phi_gradient(obj: &Objective, config: &RadialConfig) -> Result<Vec<f64>> {
    Ok(phi_gradient_of(obj, &obj.polytope(config)?))
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub max_iters: usize,
    /// Convergence threshold on the max-norm of the gradient.
    pub grad_tol: f64,
    pub multistarts: usize,
    pub seed: u64,
    /// Radii below this fraction of the largest trigger the escape move.
    pub collapse_ratio: f64,
    pub armijo_c1: f64,
    pub backtrack: f64,
    pub init_step: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_iters: 5000,
            grad_tol: 1e-8,
            multistarts: 8,
            seed: 0,
            collapse_ratio: 1e-6,
            armijo_c1: 1e-4,
            backtrack: 0.5,
            init_step: 1.0,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SolveStatus {
    Converged,
    /// Iteration or line-search budget exhausted before meeting grad_tol.
    MaxIters,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub status: SolveStatus,
    /// Canonical radii of the best run, scaled so the largest is 1.
    pub radii: Vec<f64>,
    /// Multiplier c with c^p Jp(K, .) = mu at a true solution.
    pub scale_c: f64,
    /// Phi of accepted iterates of the best run; nondecreasing.
    pub phi_trace: Vec<f64>,
    pub phi: f64,
    pub grad_norm: f64,
    /// Relative residuals |c^p rho_i^p J_i - mu_i| / mu_i.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub iterations: usize,
    pub escapes: usize,
    /// Final Phi of every start (NaN where a start failed numerically).
    pub start_phis: Vec<f64>,
    pub best_start: usize,
}

struct RunOutcome {
    phi: f64,
    trace: Vec<f64>,
    radii: Vec<f64>,
    grad_norm: f64,
    iterations: usize,
    escapes: usize,
    converged: bool,
}

fn ascent_run(obj: &Objective, start: &RadialConfig, opts: &SolveOptions) -> Result<RunOutcome> {
    let m = start.len();
    // Work in t = log rho; canonicalize and pin max rho = 1 every iterate
    // (both leave Phi unchanged).
    let mut t: Vec<f64> = start.as_slice().iter().map(|r| r.ln()).collect();
    let mut trace = Vec::new();
    let mut escapes = 0usize;
    let mut iterations = 0usize;
    let mut converged = false;
    let mut cur_phi;
    let mut grad_norm;

    let rebuild = |t: &[f64]| -> Result<(SymmetricPolytope, Vec<f64>)> {
        let cfg = RadialConfig::from_log(t)?;
        let poly = build_polytope(&obj.measure, &cfg)?;
        let mut tc: Vec<f64> = poly.radii().iter().map(|r| r.ln()).collect();
        let tmax = tc.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for v in &mut tc {
            *v -= tmax;
        }
        Ok((poly, tc))
    };

    let (mut poly, tc) = rebuild(&t)?;
    t = tc;
    cur_phi = phi_of(obj, &poly)?;
    trace.push(cur_phi);

    loop {
        let g = phi_gradient_of(obj, &poly);
        grad_norm = g.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        if grad_norm <= opts.grad_tol {
            converged = true;
            break;
        }
        if iterations >= opts.max_iters {
            break;
        }
        iterations += 1;

        // Escape from near-collapsed configurations: lift every tiny radius
        // to a common trial level and keep the best strict improvement.
        let collapsed: Vec<usize> = (0..m).filter(|&i| t[i].exp() < opts.collapse_ratio).collect();
        if !collapsed.is_empty() {
            let mut best: Option<(f64, Vec<f64>)> = None;
            for lift in [1e-4f64, 1e-3, 1e-2, 1e-1] {
                let mut cand = t.clone();
                for &i in &collapsed {
                    cand[i] = lift.ln();
                }
                if let Ok((p2, c2)) = rebuild(&cand) {
                    if let Ok(v) = phi_of(obj, &p2) {
                        if v > cur_phi + 1e-12 && best.as_ref().map_or(true, |(b, _)| v > *b) {
                            best = Some((v, c2));
                        }
                    }
                }
            }
            if let Some((v, tc)) = best {
                t = tc;
                (poly, _) = rebuild(&t)?;
                cur_phi = v;
                trace.push(cur_phi);
                escapes += 1;
                continue;
            }
        }

        let g2: f64 = g.iter().map(|x| x * x).sum();
        let mut alpha = opts.init_step;
        let mut stepped = false;
        while alpha >= 1e-16 {
            let cand: Vec<f64> = t.iter().zip(&g).map(|(ti, gi)| ti + alpha * gi).collect();
            match rebuild(&cand) {
                Ok((p2, c2)) => {
                    if let Ok(v) = phi_of(obj, &p2) {
                        if v >= cur_phi + opts.armijo_c1 * alpha * g2 {
                            t = c2;
                            poly = p2;
                            cur_phi = v;
                            trace.push(cur_phi);
                            stepped = true;
                            break;
                        }
                    }
                }
                Err(_) => {}
            }
            alpha *= opts.backtrack;
        }
        if !stepped {
            break;
        }
    }

    // Endgame once the Armijo phase is done improving Phi: near the maximum
    // the certified increment c1 alpha |g|^2 drops below the quadrature noise
    // in Phi, so the line search stalls (or burns its whole budget) while the
    // iterate is still far from grad_tol. The gradient itself is exact (cone
    // areas and closed-form weights), so switch certificates: accept a step
    // iff the Euclidean gradient norm strictly decreases, which concavity
    // grants for small steps (d/da |g|^2 = 2 g'Hg < 0). Steps are Newton on
    // the exact gradient (finite-difference Hessian, m quadrature-free
    // gradient evaluations each round); plain ascent steps crawl here on
    // ill-conditioned measures. Phi moves by at most noise in this phase and
    // the trace keeps only certified values.
    if !converged {
        let norm2 = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        // Gradient at raw log-radii: Hessian columns must difference exactly
        // the map being probed, with no canonical renormalization between.
        let grad_at = |tt: &[f64]| -> Result<Vec<f64>> {
            let cfg = RadialConfig::from_log(tt)?;
            Ok(phi_gradient_of(obj, &build_polytope(&obj.measure, &cfg)?))
        };
        let mut g = phi_gradient_of(obj, &poly);
        let mut gn = norm2(&g);
        let mut moved = false;
        let mut rounds = 0usize;
        while g.iter().fold(0.0f64, |a, &x| a.max(x.abs())) > opts.grad_tol && rounds < 60 {
            rounds += 1;
            iterations += 1;

            // Central differences: the useful singular values of H sit at
            // sv_max / kappa, and a forward-difference error of order eps
            // buries them on ill-conditioned instances.
            let eps = 1e-4;
            let mut h = nalgebra::DMatrix::<f64>::zeros(m, m);
            let mut h_ok = true;
            for i in 0..m {
                let mut tp = t.clone();
                tp[i] += eps;
                let mut tm = t.clone();
                tm[i] -= eps;
                match (grad_at(&tp), grad_at(&tm)) {
                    (Ok(gp), Ok(gm)) => {
                        for j in 0..m {
                            h[(j, i)] = (gp[j] - gm[j]) / (2.0 * eps);
                        }
                    }
                    _ => {
                        h_ok = false;
                        break;
                    }
                }
            }
            let mut stepped = false;
            if h_ok {
                // Symmetrized Hessian; the pseudo-inverse cutoff sits at the
                // difference scheme's noise floor and drops both the
                // scale-invariance null direction and unresolved directions.
                let hs = (&h + &h.transpose()) * 0.5;
                let svd = hs.svd(true, true);
                let sv_max = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
                let rhs = -nalgebra::DVector::from_column_slice(&g);
                if let Ok(d) = svd.solve(&rhs, sv_max * 1e-9) {
                    let mut beta = 1.0f64;
                    while beta >= 1e-8 {
                        let cand: Vec<f64> = (0..m).map(|i| t[i] + beta * d[i]).collect();
                        if let Ok((p2, c2)) = rebuild(&cand) {
                            let g2 = phi_gradient_of(obj, &p2);
                            let gn2 = norm2(&g2);
                            if gn2 < gn {
                                t = c2;
                                poly = p2;
                                g = g2;
                                gn = gn2;
                                stepped = true;
                                moved = true;
                                break;
                            }
                        }
                        beta *= 0.5;
                    }
                }
            }
            if !stepped {
                // Plain ascent step under the same norm certificate, for
                // iterates where the quadratic model is not trustworthy.
                let mut alpha = opts.init_step;
                while alpha >= 1e-16 {
                    let cand: Vec<f64> = t.iter().zip(&g).map(|(ti, gi)| ti + alpha * gi).collect();
                    if let Ok((p2, c2)) = rebuild(&cand) {
                        let g2 = phi_gradient_of(obj, &p2);
                        let gn2 = norm2(&g2);
                        if gn2 < gn {
                            t = c2;
                            poly = p2;
                            g = g2;
                            gn = gn2;
                            stepped = true;
                            moved = true;
                            break;
                        }
                    }
                    alpha *= opts.backtrack;
                }
            }
            if !stepped {
                break;
            }
        }
        grad_norm = g.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        converged = grad_norm <= opts.grad_tol;
        if moved {
            // Keep the reported Phi consistent with the final radii; a
            // quadrature failure here must not discard the run.
            if let Ok(v) = phi_of(obj, &poly) {
                cur_phi = v;
            }
        }
    }

    Ok(RunOutcome {
        phi: cur_phi,
        trace,
        radii: t.iter().map(|x| x.exp()).collect(),
        grad_norm,
        iterations,
        escapes,
        converged,
    })
}

/// Multistart projected gradient ascent. Start 0 is the uniform config;
/// start k draws log-radii uniformly from [-2, 0] with a stream-k generator,
/// so the whole solve depends only on `opts.seed`. The best run wins by
/// final Phi, ties by lower start index.
pub fn maximize_phi(obj: &Objective, opts: &SolveOptions) -> Result<SolveReport> {
    let m = obj.measure.len();
    let starts: Vec<RadialConfig> = (0..opts.multistarts.max(1))
        .map(|k| {
            if k == 0 {
                RadialConfig::uniform(m)
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                rng.set_stream(k as u64);
                let radii: Vec<f64> = (0..m).map(|_| rng.gen_range(-2.0..0.0f64).exp()).collect();
                RadialConfig::new(radii).unwrap()
            }
        })
        .collect();

    let outcomes: Vec<Result<RunOutcome>> =
        starts.par_iter().map(|s| ascent_run(obj, s, opts)).collect();

    let start_phis: Vec<f64> = outcomes
        .iter()
        .map(|r| r.as_ref().map(|o| o.phi).unwrap_or(f64::NAN))
        .collect();
    let best_start = (0..outcomes.len())
        .filter(|&k| outcomes[k].is_ok())
        .max_by(|&a, &b| {
            start_phis[a]
                .partial_cmp(&start_phis[b])
                .unwrap()
                .then(b.cmp(&a))
        })
        .ok_or_else(|| Error::SolveFailed("every start failed".into()))?;
    let best = outcomes.into_iter().nth(best_start).unwrap().unwrap();

    let config = RadialConfig::new(best.radii.clone())?;
    let poly = build_polytope(&obj.measure, &config)?;
    let c = recover_scale(&poly, &obj.measure, obj.p)?;
    let ver = verify(&poly, c, &obj.measure, obj.p, f64::INFINITY)?;

    Ok(SolveReport {
        status: if best.converged { SolveStatus::Converged } else { SolveStatus::MaxIters },
        radii: poly.canonical_config().normalized().as_slice().to_vec(),
        scale_c: c,
        phi: best.phi,
        phi_trace: best.trace,
        grad_norm: best.grad_norm,
        residuals: ver.residuals,
        max_residual: ver.max_residual,
        iterations: best.iterations,
        escapes: best.escapes,
        start_phis,
        best_start,
    })
}

/// Closed-form scale: c = (|mu| / |Jp(K, .)|)^{1/p}, masses over the full
/// antipodal support.
pub fn recover_scale(poly: &SymmetricPolytope, measure: &DiscreteEvenMeasure, p: f64) -> Result<f64> {
    if p == 0.0 || !p.is_finite() {
        return Err(Error::PZero);
    }
    let jp: f64 = integral_curvature(poly)
        .iter()
        .zip(poly.radii())
        .map(|(&j, &r)| r.powf(p) * j)
        .sum::<f64>()
        * 2.0;
    if jp <= 0.0 {
        return Err(Error::SolveFailed("Lp curvature has zero mass".into()));
    }
    Ok((measure.total_mass() / jp).powf(1.0 / p))
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub pass: bool,
    /// Total curvature over both antipodes; should equal `sphere_area`.
    pub total_j: f64,
    pub sphere_area: f64,
}

/// Relative residuals of c^p Jp(cK, .) = mu per atom. `cK` scales radii by c,
/// so the per-atom identity reads c^p rho_i^p J_i = mu_i.
pub fn verify(
    poly: &SymmetricPolytope,
    c: f64,
    measure: &DiscreteEvenMeasure,
    p: f64,
    tol: f64,
) -> Result<VerifyReport> {
    if measure.len() != poly.atom_count() {
        return Err(Error::LengthMismatch { expected: poly.atom_count(), got: measure.len() });
    }
    let j = integral_curvature(poly);
    let residuals: Vec<f64> = j
        .iter()
        .zip(poly.radii())
        .zip(measure.weights())
        .map(|((&ji, &ri), &wi)| ((c * ri).powf(p) * ji - wi).abs() / wi)
        .collect();
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    Ok(VerifyReport {
        max_residual,
        pass: max_residual <= tol,
        residuals,
        total_j: 2.0 * j.iter().sum::<f64>(),
        sphere_area: sphere_area(poly.dim()),
    })
}
