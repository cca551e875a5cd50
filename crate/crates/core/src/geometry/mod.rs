//! Origin-symmetric polytopes spanned by weighted direction atoms.
//!
//! A polytope here is always `conv { ±rho_i * u_i }` for unit directions u_i
//! and positive radii rho_i. Everything downstream (curvature, entropy, the
//! solver) works with the canonical form produced by [`build_polytope`]:
//! facets closed under antipodal reflection, radii replaced by the radial
//! function, and each atom classified as a hull vertex or absorbed.

mod hull2;
mod hull3;

use nalgebra::{Matrix3xX, Vector3};

use crate::error::{Error, Result};

/// Angular tolerance for merging duplicate or antipodal measure atoms.
pub const ATOM_MERGE_ANGLE: f64 = 1e-10;
/// Angular tolerance for merging coplanar facets and duplicate cone normals.
pub const COPLANAR_ANGLE: f64 = 1e-9;
/// Singular values above this count toward the spanning rank.
pub const SPAN_SV_TOL: f64 = 1e-10;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn ambient(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    pub fn from_ambient(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            other => Err(Error::BadDimension(other)),
        }
    }
}

/// Unit vector; for `Dim::Two` the z component is exactly zero.
#[derive(Clone, Copy, Debug)]
pub struct Direction(Vector3<f64>);

impl Direction {
    pub fn new(dim: Dim, v: Vector3<f64>) -> Result<Self> {
        if !v.iter().all(|c| c.is_finite()) {
            return Err(Error::BadAtom { index: 0, reason: "direction has non-finite entries".into() });
        }
        if dim == Dim::Two && v.z != 0.0 {
            return Err(Error::BadAtom { index: 0, reason: "planar direction has a z component".into() });
        }
        let norm = v.norm();
        if norm < 1e-12 {
            return Err(Error::BadAtom { index: 0, reason: "direction is the zero vector".into() });
        }
        Ok(Direction(v / norm))
    }

    pub fn vector(&self) -> Vector3<f64> {
        self.0
    }
}

/// Angle between the axes spanned by two unit vectors, sign-insensitive.
pub fn axis_angle(u: Vector3<f64>, v: Vector3<f64>) -> f64 {
    u.cross(&v).norm().atan2(u.dot(&v).abs())
}

/// Angle between two unit vectors, sign-sensitive.
pub fn vec_angle(u: Vector3<f64>, v: Vector3<f64>) -> f64 {
    u.cross(&v).norm().atan2(u.dot(&v))
}

/// Even discrete measure on the sphere: atom i stands for the antipodal pair
/// {u_i, -u_i}, each carrying weight w_i. Construction merges duplicate and
/// antipodal directions and records whether the directions span the space.
#[derive(Clone, Debug)]
pub struct DiscreteEvenMeasure {
    dim: Dim,
    dirs: Vec<Direction>,
    weights: Vec<f64>,
    spanning: bool,
}

impl DiscreteEvenMeasure {
    pub fn new(dim: Dim, atoms: &[(Vector3<f64>, f64)]) -> Result<Self> {
        let mut dirs: Vec<Direction> = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        for (index, &(v, w)) in atoms.iter().enumerate() {
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::BadAtom { index, reason: format!("weight must be positive and finite, got {w}") });
            }
            let dir = Direction::new(dim, v).map_err(|e| match e {
                Error::BadAtom { reason, .. } => Error::BadAtom { index, reason },
                other => other,
            })?;
            match dirs.iter().position(|d| axis_angle(d.vector(), dir.vector()) <= ATOM_MERGE_ANGLE) {
                Some(k) => weights[k] += w,
                None => {
                    dirs.push(dir);
                    weights.push(w);
                }
            }
        }

        let spanning = {
            let cols: Vec<Vector3<f64>> = dirs.iter().map(|d| d.vector()).collect();
            if cols.is_empty() {
                false
            } else {
                let m = Matrix3xX::from_columns(&cols);
                let sv = m.svd(false, false).singular_values;
                let rank = sv.iter().filter(|&&s| s > SPAN_SV_TOL).count();
                rank >= dim.ambient()
            }
        };

        Ok(DiscreteEvenMeasure { dim, dirs, weights, spanning })
    }

    pub fn from_2d(atoms: &[([f64; 2], f64)]) -> Result<Self> {
        let lifted: Vec<(Vector3<f64>, f64)> =
            atoms.iter().map(|&([x, y], w)| (Vector3::new(x, y, 0.0), w)).collect();
        Self::new(Dim::Two, &lifted)
    }

    pub fn from_3d(atoms: &[([f64; 3], f64)]) -> Result<Self> {
        let lifted: Vec<(Vector3<f64>, f64)> =
            atoms.iter().map(|&([x, y, z], w)| (Vector3::new(x, y, z), w)).collect();
        Self::new(Dim::Three, &lifted)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn dirs(&self) -> &[Direction] {
        &self.dirs
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn spanning(&self) -> bool {
        self.spanning
    }

    /// Total mass over both members of every antipodal pair.
    pub fn total_mass(&self) -> f64 {
        2.0 * self.weights.iter().sum::<f64>()
    }

    /// Errors unless the directions span the ambient space.
    pub fn require_spanning(&self) -> Result<()> {
        if self.spanning {
            Ok(())
        } else {
            let cols: Vec<Vector3<f64>> = self.dirs.iter().map(|d| d.vector()).collect();
            let rank = if cols.is_empty() {
                0
            } else {
                let m = Matrix3xX::from_columns(&cols);
                m.svd(false, false).singular_values.iter().filter(|&&s| s > SPAN_SV_TOL).count()
            };
            Err(Error::NotSpanning { rank, dim: self.dim.ambient() })
        }
    }
}

/// Positive radii, one per stored atom.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialConfig(Vec<f64>);

impl RadialConfig {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        for (index, &r) in radii.iter().enumerate() {
            if !r.is_finite() || r <= 0.0 {
                return Err(Error::BadRadius { index, value: r });
            }
        }
        Ok(RadialConfig(radii))
    }

    pub fn uniform(len: usize) -> Self {
        RadialConfig(vec![1.0; len])
    }

    pub fn from_log(t: &[f64]) -> Result<Self> {
        Self::new(t.iter().map(|x| x.exp()).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.0.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.0.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Same shape scaled so the largest radius is 1.
    pub fn normalized(&self) -> RadialConfig {
        let m = self.max();
        RadialConfig(self.0.iter().map(|r| r / m).collect())
    }
}

/// Supporting halfspace { x : normal . x <= offset } with unit normal and
/// positive offset (the origin is interior).
#[derive(Clone, Copy, Debug)]
pub struct Facet {
    pub normal: Vector3<f64>,
    pub offset: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VertexStatus {
    Vertex,
    Absorbed,
}

/// Normal cone of the hull vertex rho_i u_i, intersected with the sphere.
/// `boundary_normals` walks the incident facet normals counterclockwise as
/// seen from outside along u_i; absorbed atoms get an empty cone.
#[derive(Clone, Debug)]
pub struct NormalCone {
    pub atom: usize,
    pub boundary_normals: Vec<Vector3<f64>>,
    pub area: f64,
}

/// A vertex of the hull: `point = sign * rho_atom * u_atom`.
#[derive(Clone, Copy, Debug)]
pub struct HullVertex {
    pub atom: usize,
    pub positive: bool,
    pub point: Vector3<f64>,
}

#[derive(Clone, Debug)]
pub struct SymmetricPolytope {
    dim: Dim,
    dirs: Vec<Direction>,
    radii: Vec<f64>,
    facets: Vec<Facet>,
    // Per facet, the indices of the hull points on it (2i = +rho_i u_i,
    // 2i+1 = -rho_i u_i), straight from the hull combinatorics.
    facet_members: Vec<Vec<usize>>,
    status: Vec<VertexStatus>,
    cones: Vec<NormalCone>,
}

/// Builds the hull of { ±rho_i u_i }, merges coplanar facets, enforces exact
/// antipodal facet pairing, canonicalizes radii to the radial function and
/// classifies atoms. Errors when the input is degenerate (atoms not spanning,
/// all points coplanar, ...).
pub fn build_polytope(measure: &DiscreteEvenMeasure, config: &RadialConfig) -> Result<SymmetricPolytope> {
    measure.require_spanning()?;
    if config.len() != measure.len() {
        return Err(Error::LengthMismatch { expected: measure.len(), got: config.len() });
    }
    let dim = measure.dim();
    let dirs = measure.dirs().to_vec();
    let rho = config.as_slice();

    let mut points: Vec<Vector3<f64>> = Vec::with_capacity(2 * dirs.len());
    for (d, &r) in dirs.iter().zip(rho) {
        points.push(d.vector() * r);
        points.push(-(d.vector() * r));
    }

    let (mut facets, members) = match dim {
        Dim::Two => {
            let hull = hull2::convex_hull(&points)?;
            edges_to_facets(&points, &hull)
        }
        Dim::Three => {
            let tris = hull3::convex_hull(&points)?;
            merge_triangles(&points, &tris)
        }
    };
    symmetrize_facets(&mut facets)?;

    // Incidence comes from the hull combinatorics: facet k touches atom i when
    // the hull kept the point +rho_i u_i (index 2i) on that facet. Re-deriving
    // this numerically from offset quotients misjudges needle-like hulls,
    // where facet normals come out of nearly parallel cross products and carry
    // more relative tilt than any fixed slack absorbs.
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); dirs.len()];
    for (k, mem) in members.iter().enumerate() {
        for &pt in mem {
            if pt % 2 == 0 {
                incident[pt / 2].push(k);
            }
        }
    }

    let status: Vec<VertexStatus> = (0..dirs.len())
        .map(|i| {
            if incident[i].len() >= dim.ambient() {
                VertexStatus::Vertex
            } else {
                VertexStatus::Absorbed
            }
        })
        .collect();

    // Canonical radii: distance to the boundary along each atom direction.
    // A hull vertex sits exactly at rho_i u_i, so the input radius is already
    // the radial function there; the facet quotient decides absorbed atoms.
    let mut radii = Vec::with_capacity(dirs.len());
    for (i, d) in dirs.iter().enumerate() {
        if status[i] == VertexStatus::Vertex {
            radii.push(rho[i]);
            continue;
        }
        let u = d.vector();
        let mut best = f64::INFINITY;
        for f in &facets {
            let s = f.normal.dot(&u);
            if s > 1e-12 {
                best = best.min(f.offset / s);
            }
        }
        if !best.is_finite() {
            return Err(Error::DegenerateHull("no facet supports an atom ray".into()));
        }
        radii.push(best);
    }

    let cones: Vec<NormalCone> = (0..dirs.len())
        .map(|i| {
            if status[i] != VertexStatus::Vertex {
                return NormalCone { atom: i, boundary_normals: Vec::new(), area: 0.0 };
            }
            let normals: Vec<Vector3<f64>> = incident[i].iter().map(|&k| facets[k].normal).collect();
            match dim {
                Dim::Two => cone_2d(i, dirs[i].vector(), normals),
                Dim::Three => cone_3d(i, dirs[i].vector(), normals),
            }
        })
        .collect();

    Ok(SymmetricPolytope { dim, dirs, radii, facets, facet_members: members, status, cones })
}

/// One facet per hull edge, each paired with the two point indices it joins.
fn edges_to_facets(points: &[Vector3<f64>], hull: &[usize]) -> (Vec<Facet>, Vec<Vec<usize>>) {
    let m = hull.len();
    let mut facets = Vec::with_capacity(m);
    let mut members = Vec::with_capacity(m);
    for k in 0..m {
        let (ia, ib) = (hull[k], hull[(k + 1) % m]);
        let a = points[ia];
        let d = points[ib] - a;
        let n = Vector3::new(d.y, -d.x, 0.0).normalize();
        facets.push(Facet { normal: n, offset: n.dot(&a) });
        members.push(vec![ia, ib]);
    }
    (facets, members)
}

/// Groups hull triangles into maximal coplanar facets. Neighbors join a group
/// when their normal is within [`COPLANAR_ANGLE`] of the group's area-weighted
/// mean normal; large triangles seed first so slivers cannot skew a group.
/// Each facet is paired with the deduplicated point indices of its triangles.
fn merge_triangles(points: &[Vector3<f64>], tris: &[[usize; 3]]) -> (Vec<Facet>, Vec<Vec<usize>>) {
    use std::collections::HashMap;

    let raw: Vec<(Vector3<f64>, f64, Vector3<f64>)> = tris
        .iter()
        .map(|t| {
            let (a, b, c) = (points[t[0]], points[t[1]], points[t[2]]);
            let cr = (b - a).cross(&(c - a));
            let area2 = cr.norm();
            let n = if area2 > 0.0 { cr / area2 } else { Vector3::zeros() };
            (n, area2 / 2.0, (a + b + c) / 3.0)
        })
        .collect();

    let mut edge_face: HashMap<(usize, usize), usize> = HashMap::new();
    for (fi, t) in tris.iter().enumerate() {
        for k in 0..3 {
            edge_face.insert((t[k], t[(k + 1) % 3]), fi);
        }
    }
    let neighbors = |fi: usize| -> [usize; 3] {
        let t = tris[fi];
        [
            edge_face[&(t[1], t[0])],
            edge_face[&(t[2], t[1])],
            edge_face[&(t[0], t[2])],
        ]
    };

    let mut order: Vec<usize> = (0..tris.len()).collect();
    order.sort_by(|&a, &b| raw[b].1.partial_cmp(&raw[a].1).unwrap());

    let mut group = vec![usize::MAX; tris.len()];
    let mut facets: Vec<Facet> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for &seed in &order {
        if group[seed] != usize::MAX {
            continue;
        }
        let gid = facets.len();
        group[seed] = gid;
        let mut sum_n = raw[seed].0 * raw[seed].1;
        let mut sum_area = raw[seed].1;
        let mut sum_off = raw[seed].0.dot(&raw[seed].2) * raw[seed].1;
        let mut mem: Vec<usize> = tris[seed].to_vec();
        let mut queue = vec![seed];
        while let Some(fi) = queue.pop() {
            for nb in neighbors(fi) {
                if group[nb] != usize::MAX {
                    continue;
                }
                let mean = sum_n.normalize();
                if raw[nb].1 > 0.0 && vec_angle(mean, raw[nb].0) <= COPLANAR_ANGLE {
                    group[nb] = gid;
                    sum_n += raw[nb].0 * raw[nb].1;
                    sum_area += raw[nb].1;
                    sum_off += raw[nb].0.dot(&raw[nb].2) * raw[nb].1;
                    mem.extend_from_slice(&tris[nb]);
                    queue.push(nb);
                }
            }
        }
        let normal = sum_n.normalize();
        mem.sort_unstable();
        mem.dedup();
        facets.push(Facet { normal, offset: sum_off / sum_area });
        members.push(mem);
    }
    (facets, members)
}

/// Rewrites the facet list so antipodal pairs mirror each other exactly:
/// paired facets end up with bitwise-negated normals and identical offsets.
fn symmetrize_facets(facets: &mut Vec<Facet>) -> Result<()> {
    let m = facets.len();
    let mut mate = vec![usize::MAX; m];
    for i in 0..m {
        if mate[i] != usize::MAX {
            continue;
        }
        let mut best = (f64::INFINITY, usize::MAX);
        for j in 0..m {
            if j == i || mate[j] != usize::MAX {
                continue;
            }
            let ang = vec_angle(facets[i].normal, -facets[j].normal);
            if ang < best.0 {
                best = (ang, j);
            }
        }
        let (ang, j) = best;
        if j == usize::MAX || ang > 1e-6 {
            return Err(Error::DegenerateHull("facets are not antipodally paired".into()));
        }
        mate[i] = j;
        mate[j] = i;
        let n = (facets[i].normal - facets[j].normal).normalize();
        let b = 0.5 * (facets[i].offset + facets[j].offset);
        facets[i] = Facet { normal: n, offset: b };
        facets[j] = Facet { normal: -n, offset: b };
    }
    Ok(())
}

/// Planar cone: incident normals sorted by signed angle from the atom axis.
fn cone_2d(atom: usize, u: Vector3<f64>, mut normals: Vec<Vector3<f64>>) -> NormalCone {
    let base = u.y.atan2(u.x);
    let delta = |n: &Vector3<f64>| {
        let mut d = n.y.atan2(n.x) - base;
        while d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        }
        while d < -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        d
    };
    normals.sort_by(|a, b| delta(a).partial_cmp(&delta(b)).unwrap());
    normals.dedup_by(|b, a| vec_angle(*a, *b) <= COPLANAR_ANGLE);
    let area = if normals.len() >= 2 {
        delta(normals.last().unwrap()) - delta(normals.first().unwrap())
    } else {
        0.0
    };
    NormalCone { atom, boundary_normals: normals, area }
}

/// Spatial cone: incident normals ordered counterclockwise (seen from outside
/// along u) via gnomonic projection onto the tangent plane at u, then the
/// spherical polygon area by the angle-excess formula.
fn cone_3d(atom: usize, u: Vector3<f64>, normals: Vec<Vector3<f64>>) -> NormalCone {
    let e1 = {
        let z = Vector3::z();
        let c = z.cross(&u);
        if c.norm() > 1e-8 {
            c.normalize()
        } else {
            Vector3::x().cross(&u).normalize()
        }
    };
    let e2 = u.cross(&e1);

    // All incident normals satisfy n . u > 0 (the cone sits in the open
    // hemisphere around u), so the projection is well defined; the projected
    // polygon is convex and we sort around its centroid because u itself
    // need not lie inside the cone.
    let proj: Vec<(f64, f64)> = normals
        .iter()
        .map(|n| {
            let q = n / n.dot(&u);
            (q.dot(&e1), q.dot(&e2))
        })
        .collect();
    let cx = proj.iter().map(|p| p.0).sum::<f64>() / proj.len() as f64;
    let cy = proj.iter().map(|p| p.1).sum::<f64>() / proj.len() as f64;

    let mut order: Vec<usize> = (0..normals.len()).collect();
    order.sort_by(|&a, &b| {
        let ta = (proj[a].1 - cy).atan2(proj[a].0 - cx);
        let tb = (proj[b].1 - cy).atan2(proj[b].0 - cx);
        ta.partial_cmp(&tb).unwrap()
    });
    let mut sorted: Vec<Vector3<f64>> = order.into_iter().map(|k| normals[k]).collect();
    sorted.dedup_by(|b, a| vec_angle(*a, *b) <= COPLANAR_ANGLE);
    while sorted.len() > 1 && vec_angle(sorted[0], *sorted.last().unwrap()) <= COPLANAR_ANGLE {
        sorted.pop();
    }

    let area = spherical_polygon_area(&sorted);
    NormalCone { atom, boundary_normals: sorted, area }
}

/// Area of a geodesically convex spherical polygon by angle excess:
/// sum of interior angles minus (m - 2) pi. Vertices must be cyclically
/// ordered counterclockwise; polygons with fewer than 3 distinct vertices
/// have area zero.
pub fn spherical_polygon_area(verts: &[Vector3<f64>]) -> f64 {
    let m = verts.len();
    if m < 3 {
        return 0.0;
    }
    let mut sum = 0.0;
    for j in 0..m {
        let prev = verts[(j + m - 1) % m];
        let cur = verts[j];
        let next = verts[(j + 1) % m];
        let a = prev - cur * prev.dot(&cur);
        let b = next - cur * next.dot(&cur);
        let (na, nb) = (a.norm(), b.norm());
        if na < 1e-14 || nb < 1e-14 {
            // Coincident neighbors contribute a straight angle.
            sum += std::f64::consts::PI;
            continue;
        }
        let (a, b) = (a / na, b / nb);
        sum += a.cross(&b).norm().atan2(a.dot(&b));
    }
    (sum - (m as f64 - 2.0) * std::f64::consts::PI).max(0.0)
}

impl SymmetricPolytope {
    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn atom_count(&self) -> usize {
        self.dirs.len()
    }

    pub fn directions(&self) -> &[Direction] {
        &self.dirs
    }

    /// Canonical radii: the radial function evaluated at each atom direction.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn canonical_config(&self) -> RadialConfig {
        RadialConfig(self.radii.clone())
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn status(&self) -> &[VertexStatus] {
        &self.status
    }

    pub fn normal_fan(&self) -> &[NormalCone] {
        &self.cones
    }

    /// Support function h(v) = max_i rho_i |u_i . v| for any v (not
    /// necessarily unit). Canonical radii make absorbed atoms harmless here.
    pub fn support(&self, v: Vector3<f64>) -> f64 {
        self.dirs
            .iter()
            .zip(&self.radii)
            .map(|(d, &r)| r * d.vector().dot(&v).abs())
            .fold(0.0, f64::max)
    }

    /// Radial function rho(u) = max { t : t u in K } for unit u.
    pub fn radial(&self, u: Vector3<f64>) -> f64 {
        self.facets
            .iter()
            .filter_map(|f| {
                let s = f.normal.dot(&u);
                (s > 1e-12).then(|| f.offset / s)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Hull vertices, both members of every vertex pair.
    pub fn hull_vertices(&self) -> Vec<HullVertex> {
        let mut out = Vec::new();
        for i in 0..self.dirs.len() {
            if self.status[i] == VertexStatus::Vertex {
                let p = self.dirs[i].vector() * self.radii[i];
                out.push(HullVertex { atom: i, positive: true, point: p });
                out.push(HullVertex { atom: i, positive: false, point: -p });
            }
        }
        out
    }

    /// For each facet, the cyclic list of hull-vertex indices on it,
    /// counterclockwise seen from outside. Indexes into [`Self::hull_vertices`].
    pub fn facet_loops(&self) -> Vec<Vec<usize>> {
        let verts = self.hull_vertices();
        let mut by_point = vec![usize::MAX; 2 * self.dirs.len()];
        for (k, hv) in verts.iter().enumerate() {
            by_point[2 * hv.atom + usize::from(!hv.positive)] = k;
        }
        self.facets
            .iter()
            .zip(&self.facet_members)
            .map(|(f, mem)| {
                // Points of absorbed atoms sit on edge or facet interiors;
                // they are not polygon corners and drop out here.
                let mut members: Vec<usize> =
                    mem.iter().map(|&pt| by_point[pt]).filter(|&k| k != usize::MAX).collect();
                if members.len() < 2 {
                    return members;
                }
                let e1 = {
                    let z = Vector3::z();
                    let c = z.cross(&f.normal);
                    if c.norm() > 1e-8 {
                        c.normalize()
                    } else {
                        Vector3::x().cross(&f.normal).normalize()
                    }
                };
                let e2 = f.normal.cross(&e1);
                let cx = members.iter().map(|&k| verts[k].point).sum::<Vector3<f64>>() / members.len() as f64;
                members.sort_by(|&a, &b| {
                    let pa = verts[a].point - cx;
                    let pb = verts[b].point - cx;
                    let ta = pa.dot(&e2).atan2(pa.dot(&e1));
                    let tb = pb.dot(&e2).atan2(pb.dot(&e1));
                    ta.partial_cmp(&tb).unwrap()
                });
                members
            })
            .collect()
    }
}
