//! Geometry interchange: OBJ meshes for 3-D bodies, CSV vertex loops for
//! 2-D bodies. Both come from the exact vertex path.

use super::{exact, BodyError, HalfspacePolytope};

/// Wavefront OBJ text for a 3-D body: one `v` line per vertex, one `f`
/// polygon per non-redundant facet (indices are 1-based per the format).
pub fn to_obj(p: &HalfspacePolytope) -> Result<String, BodyError> {
    if p.dim() != 3 {
        return Err(BodyError::ExactUnsupported(p.dim()));
    }
    let verts = p.vertices()?;
    let polys = exact::facet_polygons(p)?;
    let mut out = String::new();
    for v in verts {
        out.push_str(&format!("v {} {} {}\n", v[0], v[1], v[2]));
    }
    for poly in polys {
        if poly.len() < 3 {
            continue;
        }
        out.push('f');
        for idx in poly {
            out.push_str(&format!(" {}", idx + 1));
        }
        out.push('\n');
    }
    Ok(out)
}

/// CSV vertex loop for a 2-D body: `x,y` rows in counterclockwise order.
pub fn to_csv_loop(p: &HalfspacePolytope) -> Result<String, BodyError> {
    if p.dim() != 2 {
        return Err(BodyError::ExactUnsupported(p.dim()));
    }
    let verts = p.vertices()?;
    let mut out = String::from("x,y\n");
    for v in verts {
        out.push_str(&format!("{},{}\n", v[0], v[1]));
    }
    Ok(out)
}
