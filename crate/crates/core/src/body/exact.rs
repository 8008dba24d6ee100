//! Exact vertex enumeration for 2-D and 3-D halfspace polytopes.
//!
//! Vertices are intersections of halfspace boundaries (pairs in 2-D,
//! triples in 3-D) filtered by feasibility against every stored halfspace
//! and deduplicated. This is O(m^3)/O(m^4) in the facet count, which is
//! fine at the desk scale this path serves; the quadrature pipeline never
//! calls it.

use super::{BodyError, HalfspacePolytope};
use crate::numeric::{dot, distance, norm, normalized, sub};

/// Skip nearly singular intersections outright; feasibility would only
/// admit wild points through rounding.
const DET_TOL: f64 = 1e-10;

fn feas_tol(x: &[f64]) -> f64 {
    1e-9 * (1.0 + norm(x))
}

pub(super) fn enumerate_vertices(p: &HalfspacePolytope) -> Result<Vec<Vec<f64>>, BodyError> {
    match p.dim() {
        2 => vertices_2d(p),
        3 => vertices_3d(p),
        d => Err(BodyError::ExactUnsupported(d)),
    }
}

fn feasible(p: &HalfspacePolytope, x: &[f64]) -> bool {
    let tol = feas_tol(x);
    p.normals()
        .iter()
        .zip(p.offsets())
        .all(|(v, &h)| dot(v, x) <= h + tol)
}

fn push_dedup(verts: &mut Vec<Vec<f64>>, x: Vec<f64>) {
    let tol = 1e-9 * (1.0 + norm(&x));
    if verts.iter().all(|y| distance(y, &x) > tol) {
        verts.push(x);
    }
}

fn vertices_2d(p: &HalfspacePolytope) -> Result<Vec<Vec<f64>>, BodyError> {
    let normals = p.normals();
    let offsets = p.offsets();
    let m = normals.len();
    let mut verts: Vec<Vec<f64>> = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            let (a, b) = (&normals[i], &normals[j]);
            let det = a[0] * b[1] - a[1] * b[0];
            if det.abs() <= DET_TOL {
                continue;
            }
            let x = vec![
                (offsets[i] * b[1] - offsets[j] * a[1]) / det,
                (a[0] * offsets[j] - b[0] * offsets[i]) / det,
            ];
            if feasible(p, &x) {
                push_dedup(&mut verts, x);
            }
        }
    }
    if verts.len() < 3 {
        return Err(BodyError::Degenerate(format!(
            "2-D intersection has only {} vertices",
            verts.len()
        )));
    }
    // Counterclockwise loop around the interior origin.
    verts.sort_by(|u, v| {
        let au = u[1].atan2(u[0]);
        let av = v[1].atan2(v[0]);
        au.partial_cmp(&av).unwrap()
    });
    Ok(verts)
}

fn vertices_3d(p: &HalfspacePolytope) -> Result<Vec<Vec<f64>>, BodyError> {
    let normals = p.normals();
    let offsets = p.offsets();
    let m = normals.len();
    let mut verts: Vec<Vec<f64>> = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            for k in (j + 1)..m {
                let (a, b, c) = (&normals[i], &normals[j], &normals[k]);
                let det = det3(a, b, c);
                if det.abs() <= DET_TOL {
                    continue;
                }
                // Cramer's rule, column-replaced determinants.
                let rhs = [offsets[i], offsets[j], offsets[k]];
                let x = vec![
                    det3_cols(rhs, [a[1], b[1], c[1]], [a[2], b[2], c[2]]) / det,
                    det3_cols([a[0], b[0], c[0]], rhs, [a[2], b[2], c[2]]) / det,
                    det3_cols([a[0], b[0], c[0]], [a[1], b[1], c[1]], rhs) / det,
                ];
                if feasible(p, &x) {
                    push_dedup(&mut verts, x);
                }
            }
        }
    }
    if verts.len() < 4 {
        return Err(BodyError::Degenerate(format!(
            "3-D intersection has only {} vertices",
            verts.len()
        )));
    }
    Ok(verts)
}

fn det3(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

fn det3_cols(c0: [f64; 3], c1: [f64; 3], c2: [f64; 3]) -> f64 {
    c0[0] * (c1[1] * c2[2] - c1[2] * c2[1]) - c1[0] * (c0[1] * c2[2] - c0[2] * c2[1])
        + c2[0] * (c0[1] * c1[2] - c0[2] * c1[1])
}

/// Vertex indices lying on each facet plane, ordered counterclockwise
/// around the facet's outward normal. Redundant facets get an empty list.
pub(super) fn facet_polygons(p: &HalfspacePolytope) -> Result<Vec<Vec<usize>>, BodyError> {
    if p.dim() != 3 {
        return Err(BodyError::ExactUnsupported(p.dim()));
    }
    let verts = p.vertices()?;
    let mut polys = Vec::with_capacity(p.facet_count());
    for (v, &h) in p.normals().iter().zip(p.offsets()) {
        let mut on_facet: Vec<usize> = verts
            .iter()
            .enumerate()
            .filter(|(_, x)| (dot(x, v) - h).abs() <= feas_tol(x))
            .map(|(idx, _)| idx)
            .collect();
        if on_facet.len() < 3 {
            polys.push(Vec::new());
            continue;
        }
        // In-plane basis around the centroid.
        let seed = if v[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let t1 = normalized(&sub(&seed, &crate::numeric::scaled(v, dot(&seed, v))))
            .ok_or_else(|| BodyError::Degenerate("facet basis".into()))?;
        let t2 = crate::numeric::cross3(v, &t1);
        let centroid: Vec<f64> = (0..3)
            .map(|c| on_facet.iter().map(|&i| verts[i][c]).sum::<f64>() / on_facet.len() as f64)
            .collect();
        on_facet.sort_by(|&i, &j| {
            let di = sub(&verts[i], &centroid);
            let dj = sub(&verts[j], &centroid);
            let ai = dot(&di, &t2).atan2(dot(&di, &t1));
            let aj = dot(&dj, &t2).atan2(dot(&dj, &t1));
            ai.partial_cmp(&aj).unwrap()
        });
        polys.push(on_facet);
    }
    Ok(polys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::HalfspacePolytope;

    #[test]
    fn square_vertices_ccw() {
        let sq = HalfspacePolytope::axis_cube(2, 1.0).unwrap();
        let verts = sq.vertices().unwrap();
        assert_eq!(verts.len(), 4);
        // CCW starting in the third quadrant (atan2 order from -pi).
        let angles: Vec<f64> = verts.iter().map(|v| v[1].atan2(v[0])).collect();
        assert!(angles.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cube_facet_polygons_are_quads() {
        let c = HalfspacePolytope::axis_cube(3, 1.0).unwrap();
        let polys = facet_polygons(&c).unwrap();
        assert_eq!(polys.len(), 6);
        for poly in polys {
            assert_eq!(poly.len(), 4);
        }
    }

    #[test]
    fn octahedron_corner_dedup() {
        // Cross-polytope |x|+|y|+|z| <= 1: 8 facets, 6 vertices; each
        // vertex lies on four planes, so dedup must collapse 4 triples.
        let s = 3f64.sqrt().recip();
        let mut normals = Vec::new();
        for sx in [1.0, -1.0] {
            for sy in [1.0, -1.0] {
                for sz in [1.0, -1.0] {
                    normals.push(vec![s * sx, s * sy, s * sz]);
                }
            }
        }
        let body = HalfspacePolytope::new(3, normals, vec![s; 8]).unwrap();
        let verts = body.vertices().unwrap();
        assert_eq!(verts.len(), 6);
    }

    #[test]
    fn simplex_has_four_vertices() {
        let s = 3f64.sqrt().recip();
        let normals = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![-s, -s, -s],
        ];
        let body = HalfspacePolytope::new(3, normals, vec![1.0, 1.0, 1.0, s]).unwrap();
        let verts = body.vertices().unwrap();
        assert_eq!(verts.len(), 4);
        assert!(verts.iter().any(|v| distance(v, &[1.0, 1.0, 1.0]) < 1e-9));
        assert!(verts.iter().any(|v| distance(v, &[1.0, 1.0, -3.0]) < 1e-9));
    }
}
