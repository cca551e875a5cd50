//! File formats: the measure, scenario, and report documents, all JSON.
//! Floats use serde_json's shortest round-trip rendering, so parse(write(x))
//! is exact. Writes go through a sibling temp file and a rename.

use std::fs;
use std::path::Path;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use aleksandrov::geometry::{Dim, DiscreteEvenMeasure};
use aleksandrov::theory::SubspaceScenario;

use crate::Failure;

#[derive(Serialize, Deserialize, Clone)]
pub struct AtomDoc {
    pub u: Vec<f64>,
    pub w: f64,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct MeasureDoc {
    pub n: usize,
    pub p: f64,
    pub atoms: Vec<AtomDoc>,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct ScenarioDoc {
    pub n: usize,
    pub p: f64,
    pub atoms: Vec<AtomDoc>,
    /// Atoms before this index span the subspace and keep `limit_radii`.
    pub split: usize,
    pub limit_radii: Vec<f64>,
    pub radius_bound: f64,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct AtomReport {
    pub u: Vec<f64>,
    pub w: f64,
    pub radius: f64,
    pub curvature: f64,
    pub lp_curvature: f64,
    pub residual: f64,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct SolveDoc {
    pub tool: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub created_unix: Option<u64>,
    pub seed: u64,
    pub n: usize,
    pub p: f64,
    pub status: String,
    pub iterations: usize,
    pub escapes: usize,
    pub phi: f64,
    pub grad_norm: f64,
    pub scale_c: f64,
    pub radii: Vec<f64>,
    pub atoms: Vec<AtomReport>,
    pub max_residual: f64,
    pub total_curvature: f64,
    pub sphere_area: f64,
    pub phi_trace: Vec<f64>,
    /// Final phi of each start; null when that start failed.
    pub start_phis: Vec<Option<f64>>,
    pub best_start: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solve_ms: Option<u128>,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct GainPointDoc {
    pub t: f64,
    pub admissible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy_term: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct PartitionDoc {
    pub t: f64,
    pub samples: u64,
    pub far: u64,
    pub near: u64,
    pub mid: u64,
    pub violations: u64,
    pub max_violation: f64,
    pub pass: bool,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct VerdictsDoc {
    pub gain_inequality: bool,
    pub g_positive_somewhere: bool,
    pub g_increasing_near_zero: bool,
    pub g1_bound: bool,
    pub g1_consistency: bool,
    pub partition: bool,
    pub pass: bool,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct TheoryDoc {
    pub tool: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub created_unix: Option<u64>,
    pub seed: u64,
    pub n: usize,
    pub p: f64,
    pub c_f: f64,
    pub delta0: f64,
    pub t_max: f64,
    pub coefficient: f64,
    pub a: f64,
    pub b: f64,
    pub e_limit: f64,
    pub phi_limit: f64,
    pub points: Vec<GainPointDoc>,
    pub partition: Vec<PartitionDoc>,
    pub verdicts: VerdictsDoc,
}

pub fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

/// Write via temp file + rename so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    let name = path
        .file_name()
        .ok_or_else(|| Failure::Io(format!("not a file path: {}", path.display())))?;
    let tmp = match dir {
        Some(d) => d.join(format!(".{}.tmp", name.to_string_lossy())),
        None => Path::new(&format!(".{}.tmp", name.to_string_lossy())).to_path_buf(),
    };
    fs::write(&tmp, contents)
        .map_err(|e| Failure::Io(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|e| Failure::Io(format!("cannot move report into {}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, doc: &T) -> Result<(), Failure> {
    let mut body = serde_json::to_string_pretty(doc)
        .map_err(|e| Failure::Io(format!("serialization failed: {e}")))?;
    body.push('\n');
    write_atomic(path, &body)
}

/// Norm deviation above this is an error; below, the vector is renormalized.
const NORM_REJECT: f64 = 1e-3;
/// Deviation above this (and below the reject line) draws a warning.
const NORM_WARN: f64 = 1e-6;

pub fn atoms_to_measure(
    n: usize,
    atoms: &[AtomDoc],
    quiet: bool,
    what: &str,
) -> Result<DiscreteEvenMeasure, Failure> {
    let dim = Dim::from_ambient(n)
        .map_err(|_| Failure::Validation(format!("{what}: n must be 2 or 3, got {n}")))?;
    if atoms.is_empty() {
        return Err(Failure::Validation(format!("{what}: no atoms")));
    }
    let mut pairs = Vec::with_capacity(atoms.len());
    let mut worst_dev: f64 = 0.0;
    for (i, a) in atoms.iter().enumerate() {
        if a.u.len() != n {
            return Err(Failure::Validation(format!(
                "{what}: atom {i} has {} coordinates, expected {n}",
                a.u.len()
            )));
        }
        let v = Vector3::new(a.u[0], a.u[1], if n == 3 { a.u[2] } else { 0.0 });
        let norm = v.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_REJECT {
            return Err(Failure::Validation(format!(
                "{what}: atom {i} direction has norm {norm}, more than {NORM_REJECT} from 1"
            )));
        }
        worst_dev = worst_dev.max((norm - 1.0).abs());
        pairs.push((v / norm, a.w));
    }
    if worst_dev > NORM_WARN && !quiet {
        eprintln!("warning: {what}: renormalized directions off unit length by up to {worst_dev:.3e}");
    }
    let measure = DiscreteEvenMeasure::new(dim, &pairs)
        .map_err(|e| Failure::Validation(format!("{what}: {e}")))?;
    if measure.len() < atoms.len() && !quiet {
        eprintln!(
            "warning: {what}: merged {} duplicate or antipodal atoms (weights summed)",
            atoms.len() - measure.len()
        );
    }
    Ok(measure)
}

pub fn parse_measure(path: &Path, quiet: bool) -> Result<(DiscreteEvenMeasure, f64), Failure> {
    let text = read_text(path)?;
    let doc: MeasureDoc = serde_json::from_str(&text)
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    if !doc.p.is_finite() || doc.p == 0.0 {
        return Err(Failure::Validation(format!(
            "{}: p must be finite and nonzero, got {}",
            path.display(),
            doc.p
        )));
    }
    let m = atoms_to_measure(doc.n, &doc.atoms, quiet, &path.display().to_string())?;
    Ok((m, doc.p))
}

pub fn parse_scenario(path: &Path, quiet: bool) -> Result<SubspaceScenario, Failure> {
    let text = read_text(path)?;
    let doc: ScenarioDoc = serde_json::from_str(&text)
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    let m = atoms_to_measure(doc.n, &doc.atoms, quiet, &path.display().to_string())?;
    if m.len() != doc.atoms.len() {
        return Err(Failure::Validation(format!(
            "{}: duplicate atoms would shift the split index; deduplicate the scenario",
            path.display()
        )));
    }
    if doc.p <= -1.0 && !quiet {
        eprintln!(
            "warning: {}: p = {} is outside (-1, 0); gain verdicts are expected to fail",
            path.display(),
            doc.p
        );
    }
    SubspaceScenario::with_any_negative_p(
        m,
        doc.split,
        doc.limit_radii.clone(),
        doc.radius_bound,
        doc.p,
    )
    .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

pub fn now_unix() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
