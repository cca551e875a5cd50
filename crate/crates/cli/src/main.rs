//! Batch front end for the solver library: measure ingestion, the five
//! subcommands (solve, verify, entropy, curvature, theory-check), report
//! documents, and figure exports.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 invalid input,
//! 3 solver non-convergence, 4 I/O trouble.

mod doc;
mod export;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use aleksandrov::curvature::{integral_curvature, lp_curvature, sphere_area};
use aleksandrov::entropy::{entropy, entropy_gradient, QuadratureSpec};
use aleksandrov::geometry::{build_polytope, DiscreteEvenMeasure, RadialConfig};
use aleksandrov::solver::{maximize_phi, verify, Objective, SolveOptions, SolveStatus};
use aleksandrov::theory::{
    degeneracy_gain_check, lower_bound_constants, partition_check, theory_quadrature,
};
use aleksandrov::Error;

use doc::{
    parse_measure, parse_scenario, read_text, write_atomic, write_json, AtomReport, GainPointDoc,
    PartitionDoc, SolveDoc, TheoryDoc, VerdictsDoc,
};

pub enum Failure {
    /// A verification or theory verdict did not hold.
    Check(String),
    Validation(String),
    NonConvergence(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Validation(_) => 2,
            Failure::NonConvergence(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Check(m) | Failure::Validation(m) | Failure::NonConvergence(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::QuadratureNotConverged(_) | Error::SolveFailed(_) => {
                Failure::NonConvergence(e.to_string())
            }
            other => Failure::Validation(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "aleksolve", version, about = "Even Lp Aleksandrov problem solver, -1 < p < 0")]
struct Cli {
    /// Suppress warnings and informational output.
    #[arg(long, global = true)]
    quiet: bool,
    /// Omit timestamps and timings so identical inputs give identical bytes.
    #[arg(long, global = true)]
    stable: bool,
    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve for the polytope whose Lp integral curvature matches a measure.
    Solve {
        measure: PathBuf,
        /// Report destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        multistarts: usize,
        #[arg(long, default_value_t = 1e-8)]
        grad_tol: f64,
        #[arg(long, default_value_t = 16)]
        quad_degree: usize,
        #[arg(long, default_value_t = 5000)]
        max_iters: usize,
        /// svg|obj|csv (next to --out) or an explicit path with that extension; repeatable.
        #[arg(long)]
        export: Vec<String>,
        /// Attempt exponents outside (-1, 0) anyway, downgrading the range
        /// check to a warning.
        #[arg(long)]
        allow_any_p: bool,
    },
    /// Recompute curvature for a reported solution and re-check residuals.
    Verify {
        report: PathBuf,
        measure: PathBuf,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// Entropy E(Q) and its log-radius gradient at given radii.
    Entropy {
        measure: PathBuf,
        /// Comma-separated radii, one per atom; all ones when omitted.
        #[arg(long)]
        radii: Option<String>,
        #[arg(long, default_value_t = 16)]
        quad_degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integral and Lp curvature of the polytope at given radii.
    Curvature {
        measure: PathBuf,
        #[arg(long)]
        radii: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the degeneration gain machinery on a subspace scenario.
    TheoryCheck {
        scenario: PathBuf,
        /// Comma-separated lift heights.
        #[arg(long, default_value = "1e-4,1e-3,1e-2,1e-1")]
        t_grid: String,
        /// Sphere samples per partition check.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Angular grid resolution for the band constants.
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global().ok();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let quiet = cli.quiet;
    let stable = cli.stable;
    match cli.cmd {
        Cmd::Solve {
            measure,
            out,
            seed,
            multistarts,
            grad_tol,
            quad_degree,
            max_iters,
            export,
            allow_any_p,
        } => cmd_solve(
            &measure,
            out.as_deref(),
            seed,
            multistarts,
            grad_tol,
            quad_degree,
            max_iters,
            &export,
            allow_any_p,
            quiet,
            stable,
        ),
        Cmd::Verify { report, measure, tol } => cmd_verify(&report, &measure, tol, quiet),
        Cmd::Entropy { measure, radii, quad_degree, out } => {
            cmd_entropy(&measure, radii.as_deref(), quad_degree, out.as_deref(), quiet)
        }
        Cmd::Curvature { measure, radii, out } => {
            cmd_curvature(&measure, radii.as_deref(), out.as_deref(), quiet)
        }
        Cmd::TheoryCheck { scenario, t_grid, samples, seed, grid, out } => cmd_theory_check(
            &scenario,
            &t_grid,
            samples,
            seed,
            grid,
            out.as_deref(),
            quiet,
            stable,
        ),
    }
}

fn parse_float_list(text: &str, what: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Failure::Validation(format!("{what}: cannot parse `{s}` as a number")))
        })
        .collect()
}

fn radii_from_flag(
    flag: Option<&str>,
    measure: &DiscreteEvenMeasure,
) -> Result<RadialConfig, Failure> {
    let radii = match flag {
        None => return Ok(RadialConfig::uniform(measure.len())),
        Some(text) => parse_float_list(text, "--radii")?,
    };
    if radii.len() != measure.len() {
        return Err(Failure::Validation(format!(
            "--radii lists {} values but the measure has {} atoms",
            radii.len(),
            measure.len()
        )));
    }
    RadialConfig::new(radii).map_err(Failure::from)
}

fn emit<T: serde::Serialize>(out: Option<&Path>, doc: &T) -> Result<(), Failure> {
    match out {
        Some(path) => write_json(path, doc),
        None => {
            let mut body = serde_json::to_string_pretty(doc)
                .map_err(|e| Failure::Io(format!("serialization failed: {e}")))?;
            body.push('\n');
            print!("{body}");
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    measure_path: &Path,
    out: Option<&Path>,
    seed: u64,
    multistarts: usize,
    grad_tol: f64,
    quad_degree: usize,
    max_iters: usize,
    export: &[String],
    allow_any_p: bool,
    quiet: bool,
    stable: bool,
) -> Result<(), Failure> {
    let (measure, p) = parse_measure(measure_path, quiet)?;
    let in_range = -1.0 < p && p < 0.0;
    if !in_range {
        if !allow_any_p {
            return Err(Failure::Validation(format!(
                "p = {p} is outside (-1, 0); pass --allow-any-p to attempt it anyway"
            )));
        }
        if !quiet {
            eprintln!("warning: p = {p} is outside (-1, 0); a solution is not guaranteed");
        }
    }
    let obj = if in_range {
        Objective::new(measure.clone(), p)?
    } else {
        Objective::with_any_p(measure.clone(), p)?
    }
    .with_quadrature(QuadratureSpec { degree: quad_degree, ..QuadratureSpec::default() });
    let opts = SolveOptions { multistarts, seed, grad_tol, max_iters, ..SolveOptions::default() };

    let t0 = Instant::now();
    let rep = maximize_phi(&obj, &opts)?;
    let solve_ms = t0.elapsed().as_millis();

    let poly = obj.polytope(&RadialConfig::new(rep.radii.clone())?)?;
    let j = integral_curvature(&poly);
    let n = measure.dim().ambient();

    let atoms: Vec<AtomReport> = (0..measure.len())
        .map(|i| {
            let u = measure.dirs()[i].vector();
            AtomReport {
                u: if n == 2 { vec![u.x, u.y] } else { vec![u.x, u.y, u.z] },
                w: measure.weights()[i],
                radius: poly.radii()[i],
                curvature: j[i],
                lp_curvature: poly.radii()[i].powf(p) * j[i],
                residual: rep.residuals[i],
            }
        })
        .collect();

    let sdoc = SolveDoc {
        tool: format!("aleksolve {}", env!("CARGO_PKG_VERSION")),
        created_unix: (!stable).then(doc::now_unix),
        seed,
        n,
        p,
        status: match rep.status {
            SolveStatus::Converged => "converged".into(),
            SolveStatus::MaxIters => "max-iters".into(),
        },
        iterations: rep.iterations,
        escapes: rep.escapes,
        phi: rep.phi,
        grad_norm: rep.grad_norm,
        scale_c: rep.scale_c,
        radii: rep.radii.clone(),
        atoms,
        max_residual: rep.max_residual,
        total_curvature: 2.0 * j.iter().sum::<f64>(),
        sphere_area: sphere_area(measure.dim()),
        phi_trace: rep.phi_trace.clone(),
        start_phis: rep.start_phis.iter().map(|&x| x.is_finite().then_some(x)).collect(),
        best_start: rep.best_start,
        solve_ms: (!stable).then_some(solve_ms),
    };

    emit(out, &sdoc)?;
    for spec in export {
        let (kind, path) = export_target(spec, out, measure_path)?;
        let body = match kind {
            "svg" => export::render_svg(&poly, &sdoc)?,
            "obj" => export::render_obj(&poly)?,
            "csv" => export::render_csv(&sdoc),
            _ => unreachable!(),
        };
        write_atomic(&path, &body)?;
        if !quiet {
            eprintln!("wrote {}", path.display());
        }
    }

    if rep.status != SolveStatus::Converged {
        return Err(Failure::NonConvergence(format!(
            "gradient ascent hit the iteration cap (grad norm {:.3e})",
            rep.grad_norm
        )));
    }
    if rep.max_residual > 1e-3 {
        return Err(Failure::NonConvergence(format!(
            "converged but max residual {:.3e} exceeds 1e-3",
            rep.max_residual
        )));
    }
    Ok(())
}

/// `--export svg` lands next to the report (or the measure when the report
/// goes to stdout); `--export path.svg` is used as given.
fn export_target<'a>(
    spec: &'a str,
    out: Option<&Path>,
    measure_path: &Path,
) -> Result<(&'a str, PathBuf), Failure> {
    let bare = matches!(spec, "svg" | "obj" | "csv");
    if bare {
        let base = out.unwrap_or(measure_path);
        return Ok((spec, base.with_extension(spec)));
    }
    let path = PathBuf::from(spec);
    match path.extension().and_then(|e| e.to_str()) {
        Some("svg") => Ok(("svg", path)),
        Some("obj") => Ok(("obj", path)),
        Some("csv") => Ok(("csv", path)),
        _ => Err(Failure::Validation(format!(
            "--export takes svg, obj, csv, or a path ending in one of those, got `{spec}`"
        ))),
    }
}

fn cmd_verify(report: &Path, measure_path: &Path, tol: f64, quiet: bool) -> Result<(), Failure> {
    let (measure, file_p) = parse_measure(measure_path, quiet)?;
    let text = read_text(report)?;
    let rep: SolveDoc = serde_json::from_str(&text)
        .map_err(|e| Failure::Validation(format!("{}: {e}", report.display())))?;
    if rep.n != measure.dim().ambient() {
        return Err(Failure::Validation(format!(
            "report is {}-dimensional, measure is {}-dimensional",
            rep.n,
            measure.dim().ambient()
        )));
    }
    if rep.radii.len() != measure.len() {
        return Err(Failure::Validation(format!(
            "report has {} radii, measure has {} atoms",
            rep.radii.len(),
            measure.len()
        )));
    }
    if rep.p != file_p {
        return Err(Failure::Validation(format!(
            "report solved p = {}, measure file says p = {file_p}",
            rep.p
        )));
    }
    let poly = build_polytope(&measure, &RadialConfig::new(rep.radii.clone())?)?;
    let vr = verify(&poly, rep.scale_c, &measure, rep.p, tol)?;
    println!("total curvature {} expected {}", vr.total_j, vr.sphere_area);
    if !quiet {
        println!("max residual {:.6e} (tol {tol:.1e})", vr.max_residual);
    }
    if vr.pass {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "verification failed: max residual {:.6e} > {tol:.1e}",
            vr.max_residual
        )))
    }
}

#[derive(serde::Serialize)]
struct EntropyDoc {
    entropy: f64,
    /// d E / d log rho_i, equal to -2 J_i.
    gradient: Vec<f64>,
}

fn cmd_entropy(
    measure_path: &Path,
    radii: Option<&str>,
    quad_degree: usize,
    out: Option<&Path>,
    quiet: bool,
) -> Result<(), Failure> {
    let (measure, _) = parse_measure(measure_path, quiet)?;
    let config = radii_from_flag(radii, &measure)?;
    let poly = build_polytope(&measure, &config)?;
    let spec = QuadratureSpec { degree: quad_degree, ..QuadratureSpec::default() };
    let e = entropy(&poly, &spec)?;
    emit(out, &EntropyDoc { entropy: e, gradient: entropy_gradient(&poly) })
}

#[derive(serde::Serialize)]
struct CurvatureDoc {
    p: f64,
    p_in_range: bool,
    curvature: Vec<f64>,
    lp_curvature: Vec<f64>,
    total_curvature: f64,
    total_lp_curvature: f64,
    sphere_area: f64,
}

fn cmd_curvature(
    measure_path: &Path,
    radii: Option<&str>,
    out: Option<&Path>,
    quiet: bool,
) -> Result<(), Failure> {
    let (measure, p) = parse_measure(measure_path, quiet)?;
    let config = radii_from_flag(radii, &measure)?;
    let poly = build_polytope(&measure, &config)?;
    let cr = lp_curvature(&poly, p)?;
    emit(
        out,
        &CurvatureDoc {
            p: cr.p,
            p_in_range: cr.p_in_range,
            curvature: cr.per_atom_j,
            lp_curvature: cr.per_atom_jp,
            total_curvature: cr.total_j,
            total_lp_curvature: cr.total_jp,
            sphere_area: sphere_area(measure.dim()),
        },
    )
}

#[allow(clippy::too_many_arguments)]
fn cmd_theory_check(
    scenario_path: &Path,
    t_grid: &str,
    samples: u64,
    seed: u64,
    grid: usize,
    out: Option<&Path>,
    quiet: bool,
    stable: bool,
) -> Result<(), Failure> {
    let sc = parse_scenario(scenario_path, quiet)?;
    let grid_t = parse_float_list(t_grid, "--t-grid")?;
    if grid_t.is_empty() {
        return Err(Failure::Validation("--t-grid is empty".into()));
    }
    let lb = lower_bound_constants(&sc, grid)?;
    let rep = degeneracy_gain_check(&sc, &lb, &grid_t, &theory_quadrature())?;

    let mut partition = Vec::new();
    let mut partition_ok = true;
    for (k, pt) in rep.points.iter().enumerate().filter(|(_, pt)| pt.admissible) {
        let pr = partition_check(&sc, &lb, pt.t, samples, seed.wrapping_add(k as u64))?;
        partition_ok &= pr.pass;
        partition.push(PartitionDoc {
            t: pt.t,
            samples: pr.samples,
            far: pr.counts[0],
            near: pr.counts[1],
            mid: pr.counts[2],
            violations: pr.violations,
            max_violation: pr.max_violation,
            pass: pr.pass,
        });
    }

    let points: Vec<GainPointDoc> = rep
        .points
        .iter()
        .map(|pt| {
            let keep = |x: f64| pt.admissible.then_some(x);
            GainPointDoc {
                t: pt.t,
                admissible: pt.admissible,
                note: (!pt.admissible)
                    .then(|| format!("skipped: t outside the admissible range (0, {})", rep.t_max)),
                g1: keep(pt.g1),
                g2: keep(pt.g2),
                g: keep(pt.g),
                lhs: keep(pt.lhs),
                entropy_term: keep(pt.entropy_term),
                margin: keep(pt.margin),
            }
        })
        .collect();

    let verdicts = VerdictsDoc {
        gain_inequality: rep.gain_inequality_ok,
        g_positive_somewhere: rep.g_positive_somewhere,
        g_increasing_near_zero: rep.g_increasing_near_zero,
        g1_bound: rep.g1_bound_ok,
        g1_consistency: rep.g1_consistency_ok,
        partition: partition_ok,
        pass: rep.pass && partition_ok,
    };
    let pass = verdicts.pass;
    let failed: Vec<&str> = [
        (!verdicts.gain_inequality).then_some("gain_inequality"),
        (!verdicts.g_positive_somewhere).then_some("g_positive_somewhere"),
        (!verdicts.g_increasing_near_zero).then_some("g_increasing_near_zero"),
        (!verdicts.g1_bound).then_some("g1_bound"),
        (!verdicts.g1_consistency).then_some("g1_consistency"),
        (!verdicts.partition).then_some("partition"),
    ]
    .into_iter()
    .flatten()
    .collect();

    let tdoc = TheoryDoc {
        tool: format!("aleksolve {}", env!("CARGO_PKG_VERSION")),
        created_unix: (!stable).then(doc::now_unix),
        seed,
        n: sc.measure().dim().ambient(),
        p: sc.p(),
        c_f: rep.c_f,
        delta0: rep.delta0,
        t_max: rep.t_max,
        coefficient: rep.coefficient,
        a: rep.a,
        b: rep.b,
        e_limit: rep.e_limit,
        phi_limit: rep.phi_limit,
        points,
        partition,
        verdicts,
    };
    emit(out, &tdoc)?;

    if pass {
        Ok(())
    } else {
        Err(Failure::Check(format!("failed verdicts: {}", failed.join(", "))))
    }
}
