//! Detecting whether a set of directions is contained in a closed hemisphere.
//!
//! A direction set `{v_i}` lies in a closed hemisphere iff some nonzero `xi`
//! has `v_i . xi <= 0` for every `i`, which happens iff the origin is *not*
//! an interior point of `conv{v_i}`. The 2-D case is decided exactly by the
//! largest angular gap, the 3-D case (for small sets) exactly by scanning
//! supporting planes through point triples; larger sets and higher
//! dimensions fall back to a rank test, Gilbert's nearest-point iteration
//! (which certifies strict separation), and a projection search for a
//! feasible `xi`.

use crate::numeric::{cross3, dot, norm, normalized, scaled, sub};

/// Largest 3-D set that still goes through the exact supporting-plane scan.
const MAX_EXACT_3D: usize = 220;

/// Searches for a witness `xi` with `max_i v_i . xi <= tol`. Returns `None`
/// when the directions provably (2-D, small 3-D) or heuristically span all
/// hemispheres.
pub(crate) fn hemisphere_witness(dirs: &[Vec<f64>], tol: f64) -> Option<Vec<f64>> {
    if dirs.is_empty() {
        return None;
    }
    let dim = dirs[0].len();

    if let Some(xi) = rank_deficiency_witness(dirs, dim) {
        return Some(xi);
    }

    match dim {
        2 => witness_2d(dirs, tol),
        3 if dirs.len() <= MAX_EXACT_3D => witness_3d_exact(dirs, tol),
        3 if subset_interior_certificate_3d(dirs) => None,
        _ => {
            if let Some(xi) = gilbert_separation(dirs) {
                return Some(xi);
            }
            projection_search(dirs, tol)
        }
    }
}

/// Fast sound pass for large 3-D sets (quadrature grids): if the extreme
/// points along a fixed direction fan already surround the origin
/// strictly, so does the full set. Inconclusive (`false`) falls through to
/// the search path.
fn subset_interior_certificate_3d(dirs: &[Vec<f64>]) -> bool {
    let s = 3f64.sqrt().recip();
    let probes: [[f64; 3]; 14] = [
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
        [s, s, s],
        [s, s, -s],
        [s, -s, s],
        [s, -s, -s],
        [-s, s, s],
        [-s, s, -s],
        [-s, -s, s],
        [-s, -s, -s],
    ];
    let mut subset: Vec<Vec<f64>> = Vec::with_capacity(probes.len());
    for p in &probes {
        let mut best = f64::NEG_INFINITY;
        let mut arg = 0;
        for (i, v) in dirs.iter().enumerate() {
            let d = dot(v, p);
            if d > best {
                best = d;
                arg = i;
            }
        }
        let v = dirs[arg].clone();
        if subset.iter().all(|w| crate::numeric::distance(w, &v) > 1e-12) {
            subset.push(v);
        }
    }
    subset.len() >= 4
        && rank_deficiency_witness(&subset, 3).is_none()
        && witness_3d_exact(&subset, 1e-6).is_none()
}

/// If the directions span a proper subspace, any unit vector orthogonal to
/// that subspace bounds a closed hemisphere containing all of them.
fn rank_deficiency_witness(dirs: &[Vec<f64>], dim: usize) -> Option<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for v in dirs {
        let mut r = v.clone();
        for b in &basis {
            let c = dot(&r, b);
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= c * bi;
            }
        }
        if norm(&r) > 1e-9 {
            basis.push(normalized(&r)?);
            if basis.len() == dim {
                return None;
            }
        }
    }
    // Project each coordinate axis onto the orthogonal complement and take
    // the first that survives.
    for axis in 0..dim {
        let mut r = vec![0.0; dim];
        r[axis] = 1.0;
        for b in &basis {
            let c = dot(&r, b);
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= c * bi;
            }
        }
        if norm(&r) > 1e-9 {
            return normalized(&r);
        }
    }
    None
}

/// Exact 2-D decision via the largest cyclic gap between sorted angles: the
/// set fits in a closed half-plane iff some gap reaches pi.
fn witness_2d(dirs: &[Vec<f64>], tol: f64) -> Option<Vec<f64>> {
    let mut angles: Vec<f64> = dirs.iter().map(|v| v[1].atan2(v[0])).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = angles.len();
    let mut best_gap = f64::NEG_INFINITY;
    let mut gap_start = 0.0;
    for i in 0..m {
        let next = if i + 1 == m {
            angles[0] + 2.0 * std::f64::consts::PI
        } else {
            angles[i + 1]
        };
        let gap = next - angles[i];
        if gap > best_gap {
            best_gap = gap;
            gap_start = angles[i];
        }
    }
    // Midpoint of the arc actually covered by the directions; its negation
    // is the candidate hemisphere pole.
    let covered_mid = gap_start + best_gap / 2.0 + std::f64::consts::PI;
    let xi = vec![-covered_mid.cos(), -covered_mid.sin()];
    certify(dirs, xi, tol)
}

/// Exact 3-D decision: the origin is interior to the hull iff every
/// supporting plane through a point triple has strictly positive offset.
fn witness_3d_exact(dirs: &[Vec<f64>], tol: f64) -> Option<Vec<f64>> {
    let m = dirs.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for i in 0..m {
        for j in (i + 1)..m {
            let eij = sub(&dirs[j], &dirs[i]);
            for k in (j + 1)..m {
                let eik = sub(&dirs[k], &dirs[i]);
                let n = cross3(&eij, &eik);
                let nn = norm(&n);
                if nn < 1e-12 {
                    continue;
                }
                for orient in [1.0, -1.0] {
                    let plane: Vec<f64> = n.iter().map(|x| orient * x / nn).collect();
                    let b = dot(&plane, &dirs[i]);
                    // Supporting plane: all points on its nonpositive side.
                    if dirs.iter().all(|v| dot(&plane, v) <= b + 1e-10) {
                        match &best {
                            Some((bb, _)) if *bb <= b => {}
                            _ => best = Some((b, plane.clone())),
                        }
                    }
                }
            }
        }
    }
    match best {
        Some((b, plane)) if b <= tol => certify(dirs, plane, tol),
        _ => None,
    }
}

/// Gilbert's nearest-point iteration on `conv{v_i}`. Produces a direction
/// that strictly separates the hull from the origin when one exists; `None`
/// means the origin appears to lie in the hull.
fn gilbert_separation(dirs: &[Vec<f64>]) -> Option<Vec<f64>> {
    let mut x = dirs[0].clone();
    for _ in 0..400 {
        let nx = norm(&x);
        if nx < 1e-9 {
            return None;
        }
        let (mut vmin, mut dmin) = (0, f64::INFINITY);
        for (i, v) in dirs.iter().enumerate() {
            let d = dot(&x, v);
            if d < dmin {
                dmin = d;
                vmin = i;
            }
        }
        if dmin > 0.0 {
            // Every hull point has positive dot with x: -x/|x| is a witness.
            return normalized(&scaled(&x, -1.0));
        }
        let v = &dirs[vmin];
        let diff = sub(&x, v);
        let denom = dot(&diff, &diff);
        if denom < 1e-18 {
            return None;
        }
        let t = (dot(&x, &diff) / denom).clamp(0.0, 1.0);
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi += t * (vi - *xi);
        }
    }
    None
}

/// Deterministic multi-start projection search for `xi` with
/// `v_i . xi <= tol` for all `i`. Used where no exact path exists.
fn projection_search(dirs: &[Vec<f64>], tol: f64) -> Option<Vec<f64>> {
    let dim = dirs[0].len();
    let mut starts: Vec<Vec<f64>> = Vec::new();
    for v in dirs.iter().take(8) {
        starts.push(scaled(v, -1.0));
    }
    for axis in 0..dim {
        for sgn in [1.0, -1.0] {
            let mut e = vec![0.0; dim];
            e[axis] = sgn;
            starts.push(e);
        }
    }
    for mut xi in starts {
        for _ in 0..300 {
            let (mut imax, mut dmax) = (0, f64::NEG_INFINITY);
            for (i, v) in dirs.iter().enumerate() {
                let d = dot(&xi, v);
                if d > dmax {
                    dmax = d;
                    imax = i;
                }
            }
            if dmax <= tol * 0.5 {
                break;
            }
            // Project onto the violated halfspace {xi : v . xi <= 0}.
            for (x, v) in xi.iter_mut().zip(&dirs[imax]) {
                *x -= dmax * v;
            }
            match normalized(&xi) {
                Some(n) => xi = n,
                None => break,
            }
        }
        if let Some(found) = certify(dirs, xi, tol) {
            return Some(found);
        }
    }
    None
}

/// Accepts a candidate only if it genuinely bounds a closed hemisphere
/// containing every direction.
fn certify(dirs: &[Vec<f64>], xi: Vec<f64>, tol: f64) -> Option<Vec<f64>> {
    let xi = normalized(&xi)?;
    if dirs.iter().all(|v| dot(v, &xi) <= tol) {
        Some(xi)
    } else {
        None
    }
}
