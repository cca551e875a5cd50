//! Figure and table exports. The SVG is a planar picture of the solved
//! polygon with atom rays and the normal fan; the OBJ is the facet mesh of
//! a spatial solution; the CSV carries the per-atom table plus the phi
//! trace as a second section.

use std::fmt::Write as _;

use nalgebra::Vector3;

use aleksandrov::geometry::{Dim, SymmetricPolytope, VertexStatus};

use crate::doc::SolveDoc;
use crate::Failure;

fn angle_of(v: Vector3<f64>) -> f64 {
    v.y.atan2(v.x)
}

/// Wrap to (-pi, pi].
fn wrap(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut a = a % two_pi;
    if a <= -std::f64::consts::PI {
        a += two_pi;
    } else if a > std::f64::consts::PI {
        a -= two_pi;
    }
    a
}

/// Planar figure: polygon outline, atom rays, and one arc sector per normal
/// cone at fixed radius, colored by the sign of c^p rho^p J - mu.
pub fn render_svg(poly: &SymmetricPolytope, doc: &SolveDoc) -> Result<String, Failure> {
    if poly.dim() != Dim::Two {
        return Err(Failure::Validation(
            "svg export is only available for planar measures (n = 2)".into(),
        ));
    }
    let rmax = poly.radii().iter().cloned().fold(0.0, f64::max);
    let fan_r = 1.18 * rmax;
    let view = 1.45 * rmax;
    let scale = 300.0 / view;

    let mut vertices: Vec<Vector3<f64>> = poly.hull_vertices().iter().map(|h| h.point).collect();
    vertices.sort_by(|a, b| angle_of(*a).partial_cmp(&angle_of(*b)).unwrap());

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" viewBox=\"0 0 640 640\">"
    );
    let _ = writeln!(s, "<g transform=\"translate(320,320) scale(1,-1)\">");

    // Polygon.
    let mut pts = String::new();
    for v in &vertices {
        let _ = write!(pts, "{:.3},{:.3} ", v.x * scale, v.y * scale);
    }
    let _ = writeln!(
        s,
        "<polygon points=\"{}\" fill=\"#e8eef7\" stroke=\"#33415c\" stroke-width=\"1.5\"/>",
        pts.trim_end()
    );

    // Atom rays through the origin; dashed when the atom is absorbed.
    for (i, d) in poly.directions().iter().enumerate() {
        let v = d.vector() * poly.radii()[i] * scale;
        let dash = if poly.status()[i] == VertexStatus::Vertex { "" } else { " stroke-dasharray=\"4 3\"" };
        let _ = writeln!(
            s,
            "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"#8a94a6\" stroke-width=\"1\"{dash}/>",
            -v.x, -v.y, v.x, v.y
        );
    }

    // Normal-cone sectors for both members of each vertex pair.
    for cone in poly.normal_fan() {
        let i = cone.atom;
        let residual_sign =
            doc.scale_c.powf(doc.p) * poly.radii()[i].powf(doc.p) * doc.atoms[i].curvature
                - doc.atoms[i].w;
        let color = if residual_sign >= 0.0 { "#2a7de1" } else { "#d1495b" };
        let base = angle_of(poly.directions()[i].vector());
        let mut deltas: Vec<f64> =
            cone.boundary_normals.iter().map(|n| wrap(angle_of(*n) - base)).collect();
        deltas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let (d0, d1) = (deltas[0], deltas[deltas.len() - 1]);
        for flip in [0.0, std::f64::consts::PI] {
            let a0 = base + flip + d0;
            let a1 = base + flip + d1;
            let r = fan_r * scale;
            let (x0, y0) = (r * a0.cos(), r * a0.sin());
            let (x1, y1) = (r * a1.cos(), r * a1.sin());
            // Under the y-flip a mathematically counterclockwise arc needs
            // sweep flag 0; cones of a symmetric body span less than pi so
            // the small-arc flag stays 0.
            let _ = writeln!(
                s,
                "<path d=\"M 0 0 L {x0:.3} {y0:.3} A {r:.3} {r:.3} 0 0 0 {x1:.3} {y1:.3} Z\" fill=\"{color}\" fill-opacity=\"0.18\" stroke=\"{color}\" stroke-width=\"1\"/>"
            );
        }
    }

    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        "<text x=\"12\" y=\"22\" font-family=\"monospace\" font-size=\"13\">p = {} max residual = {:.3e}</text>",
        doc.p, doc.max_residual
    );
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

/// Wavefront mesh of the facet structure (n = 3 only).
pub fn render_obj(poly: &SymmetricPolytope) -> Result<String, Failure> {
    if poly.dim() != Dim::Three {
        return Err(Failure::Validation(
            "obj export is only available for spatial measures (n = 3)".into(),
        ));
    }
    let verts = poly.hull_vertices();
    let mut s = String::from("o aleksolve\n");
    for v in &verts {
        let _ = writeln!(s, "v {} {} {}", v.point.x, v.point.y, v.point.z);
    }
    for unordered in poly.facet_loops() {
        if unordered.len() < 3 {
            continue;
        }
        let _ = write!(s, "f");
        for idx in &unordered {
            let _ = write!(s, " {}", idx + 1);
        }
        let _ = writeln!(s);
    }
    Ok(s)
}

/// Per-atom table, a blank line, then the phi trace.
pub fn render_csv(doc: &SolveDoc) -> String {
    let mut s = String::from("atom,ux,uy,uz,weight,radius,curvature,lp_curvature,residual\n");
    for (i, a) in doc.atoms.iter().enumerate() {
        let z = if a.u.len() > 2 { a.u[2] } else { 0.0 };
        let _ = writeln!(
            s,
            "{i},{},{},{},{},{},{},{},{}",
            a.u[0], a.u[1], z, a.w, a.radius, a.curvature, a.lp_curvature, a.residual
        );
    }
    s.push('\n');
    s.push_str("iteration,phi\n");
    for (k, phi) in doc.phi_trace.iter().enumerate() {
        let _ = writeln!(s, "{k},{phi}");
    }
    s
}
