//! Incremental convex hull in three dimensions with exact orientation tests.
//!
//! Visibility decisions go through Shewchuk-style adaptive predicates
//! (the `robust` crate), so the face set stays a closed manifold no matter
//! how flat the input gets. Points exactly on a face plane count as not
//! visible, which absorbs coplanar points instead of fracturing the facet.

use std::collections::HashMap;

use nalgebra::Vector3;
use robust::{orient3d, Coord3D};

use crate::error::{Error, Result};

fn c3(p: Vector3<f64>) -> Coord3D<f64> {
    Coord3D { x: p.x, y: p.y, z: p.z }
}

/// Positive exactly when `d` is strictly outside the oriented triangle
/// (a, b, c), where outside is the side the triangle winds counterclockwise
/// when seen from.
fn above(points: &[Vector3<f64>], t: [usize; 3], d: usize) -> f64 {
    -orient3d(c3(points[t[0]]), c3(points[t[1]]), c3(points[t[2]]), c3(points[d]))
}

fn initial_simplex(points: &[Vector3<f64>]) -> Result<[usize; 4]> {
    let n = points.len();
    let i0 = 0;
    let i1 = (0..n)
        .max_by(|&a, &b| {
            let da = (points[a] - points[i0]).norm_squared();
            let db = (points[b] - points[i0]).norm_squared();
            da.partial_cmp(&db).unwrap()
        })
        .unwrap();
    if (points[i1] - points[i0]).norm_squared() == 0.0 {
        return Err(Error::DegenerateHull("all points coincide".into()));
    }
    let e = points[i1] - points[i0];
    let i2 = (0..n)
        .max_by(|&a, &b| {
            let da = e.cross(&(points[a] - points[i0])).norm_squared();
            let db = e.cross(&(points[b] - points[i0])).norm_squared();
            da.partial_cmp(&db).unwrap()
        })
        .unwrap();
    if e.cross(&(points[i2] - points[i0])).norm_squared() == 0.0 {
        return Err(Error::DegenerateHull("points are collinear".into()));
    }
    let base = [i0, i1, i2];
    let i3 = (0..n)
        .max_by(|&a, &b| {
            above(points, base, a)
                .abs()
                .partial_cmp(&above(points, base, b).abs())
                .unwrap()
        })
        .unwrap();
    if above(points, base, i3) == 0.0 {
        return Err(Error::DegenerateHull("points are coplanar".into()));
    }
    Ok([i0, i1, i2, i3])
}

/// Returns outward-oriented triangles (counterclockwise from outside).
///
/// The result triangulates the hull boundary; coplanar input points that are
/// not vertices of the hull appear in no triangle.
pub fn convex_hull(points: &[Vector3<f64>]) -> Result<Vec<[usize; 3]>> {
    if points.len() < 4 {
        return Err(Error::DegenerateHull(format!(
            "need at least 4 points, got {}",
            points.len()
        )));
    }
    let [i0, i1, i2, i3] = initial_simplex(points)?;

    // Orient the base so i3 lies inside, then close the tetrahedron.
    let base = if above(points, [i0, i1, i2], i3) > 0.0 {
        [i0, i2, i1]
    } else {
        [i0, i1, i2]
    };
    let mut faces: Vec<[usize; 3]> = vec![
        base,
        [base[0], i3, base[1]],
        [base[1], i3, base[2]],
        [base[2], i3, base[0]],
    ];
    debug_assert!(faces.iter().all(|f| {
        let inner = [i0, i1, i2, i3]
            .into_iter()
            .find(|v| !f.contains(v))
            .unwrap();
        above(points, *f, inner) < 0.0
    }));

    let simplex = [i0, i1, i2, i3];
    for q in 0..points.len() {
        if simplex.contains(&q) {
            continue;
        }
        let visible: Vec<bool> = faces.iter().map(|&f| above(points, f, q) > 0.0).collect();
        if visible.iter().all(|v| !v) {
            continue;
        }

        // Map each directed edge to the face carrying it; the mate of a
        // horizon edge is the invisible face across it.
        let mut edge_face: HashMap<(usize, usize), usize> = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..3 {
                edge_face.insert((f[k], f[(k + 1) % 3]), fi);
            }
        }

        let mut next: Vec<[usize; 3]> = Vec::with_capacity(faces.len());
        for (fi, &f) in faces.iter().enumerate() {
            if !visible[fi] {
                next.push(f);
                continue;
            }
            for k in 0..3 {
                let (u, v) = (f[k], f[(k + 1) % 3]);
                let mate = edge_face[&(v, u)];
                if !visible[mate] {
                    // Horizon edge, walked in the visible face's winding:
                    // (u, v, q) is outward oriented.
                    next.push([u, v, q]);
                }
            }
        }
        faces = next;
    }

    validate_closed(points.len(), &faces)?;
    Ok(faces)
}

/// Closed-manifold check: every directed edge appears exactly once and the
/// Euler count V - E + F equals 2.
fn validate_closed(npoints: usize, faces: &[[usize; 3]]) -> Result<()> {
    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    let mut used = vec![false; npoints];
    for f in faces {
        for k in 0..3 {
            let e = (f[k], f[(k + 1) % 3]);
            *directed.entry(e).or_insert(0) += 1;
            used[f[k]] = true;
        }
    }
    for (&(u, v), &cnt) in &directed {
        if cnt != 1 || !directed.contains_key(&(v, u)) {
            return Err(Error::DegenerateHull(format!(
                "edge ({u}, {v}) is not matched, hull boundary is not closed"
            )));
        }
    }
    let v = used.iter().filter(|&&u| u).count() as i64;
    let e = directed.len() as i64 / 2;
    let f = faces.len() as i64;
    if v - e + f != 2 {
        return Err(Error::DegenerateHull(format!(
            "Euler count {v} - {e} + {f} != 2"
        )));
    }
    Ok(())
}
