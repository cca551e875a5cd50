//! Planar convex hull of a centrally symmetric point cloud.
//!
//! The origin is interior by construction (the input contains ±x for every x
//! and spans the plane), so every point has a well defined angle and the hull
//! is a subsequence of the angularly sorted cloud.

use nalgebra::Vector3;
use robust::{orient2d, Coord};

use crate::error::{Error, Result};

fn c2(p: Vector3<f64>) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

/// Exact sign of the turn a -> b -> c; positive is a left (counterclockwise) turn.
fn turn(points: &[Vector3<f64>], a: usize, b: usize, c: usize) -> f64 {
    orient2d(c2(points[a]), c2(points[b]), c2(points[c]))
}

/// Returns hull vertex indices in counterclockwise order.
///
/// Collinear points interior to an edge are dropped, which is what classifies
/// the corresponding atoms as absorbed. Errors when the cloud is degenerate
/// (fewer than 3 hull vertices).
pub fn convex_hull(points: &[Vector3<f64>]) -> Result<Vec<usize>> {
    if points.len() < 4 {
        return Err(Error::DegenerateHull(format!(
            "need at least 4 points, got {}",
            points.len()
        )));
    }

    let mut idx: Vec<usize> = (0..points.len()).collect();
    // Sort by angle; ties (same ray from the origin) put the farther point
    // first so the scan keeps it and pops the nearer one.
    idx.sort_by(|&a, &b| {
        let ta = points[a].y.atan2(points[a].x);
        let tb = points[b].y.atan2(points[b].x);
        ta.partial_cmp(&tb)
            .unwrap()
            .then(points[b].norm_squared().partial_cmp(&points[a].norm_squared()).unwrap())
    });

    // A point of maximal norm is always a hull vertex: start the scan there.
    let start = (0..idx.len())
        .max_by(|&a, &b| {
            points[idx[a]]
                .norm_squared()
                .partial_cmp(&points[idx[b]].norm_squared())
                .unwrap()
        })
        .unwrap();
    idx.rotate_left(start);

    let mut stack: Vec<usize> = Vec::with_capacity(idx.len());
    for &i in &idx {
        while stack.len() >= 2
            && turn(points, stack[stack.len() - 2], stack[stack.len() - 1], i) <= 0.0
        {
            stack.pop();
        }
        stack.push(i);
    }
    // Wrap around: the scan above never re-examines the first vertex.
    while stack.len() > 2
        && turn(points, stack[stack.len() - 2], stack[stack.len() - 1], stack[0]) <= 0.0
    {
        stack.pop();
    }

    if stack.len() < 3 {
        return Err(Error::DegenerateHull(
            "points are collinear, polygon has empty interior".into(),
        ));
    }
    Ok(stack)
}
