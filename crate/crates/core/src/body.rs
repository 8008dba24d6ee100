//! Convex bodies in `K_0^n` (origin interior) as halfspace polytopes, with
//! the geometric primitives everything else is built on: radial and support
//! functions, polar duality, Wulff shapes, convex hulls of radial samples,
//! the radial Gauss (facet) assignment, dilation, and the radial metric.
//!
//! Measure-theoretic operations (radial function, facet assignment,
//! dilation, distances) are dimension-generic because they only need the
//! halfspace data. Exact vertex geometry — support function, polar body,
//! OBJ/CSV export — is implemented for dimensions 2 and 3, where desk-scale
//! verification lives; higher dimensions use grid-sampled surrogates.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hemisphere::hemisphere_witness;
use crate::numeric::{dot, is_unit, norm};
use crate::quadrature::{GridError, SphericalGrid};

mod exact;
pub mod export;

/// Node-count * facet-count above which per-node evaluation fans out to the
/// rayon pool. Below it the sequential loop wins.
const PAR_WORK_THRESHOLD: usize = 1_000_000;

/// Relative band inside which two facet ratios count as tied; ties go to
/// the smallest facet index so runs are reproducible.
const TIE_REL_BAND: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum BodyError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("normals and offsets differ in length: {normals} vs {offsets}")]
    LengthMismatch { normals: usize, offsets: usize },
    #[error("need at least {need} halfspaces in dimension {dim}, got {got}")]
    TooFewHalfspaces { need: usize, dim: usize, got: usize },
    #[error("normal {0} is not a unit vector")]
    NotUnit(usize),
    #[error("normal {index} has dimension {got}, expected {expected}")]
    WrongDimension { index: usize, got: usize, expected: usize },
    #[error("offset {index} must be a positive finite number, got {value}")]
    NonPositiveOffset { index: usize, value: f64 },
    #[error("directions are contained in a closed hemisphere; the body would be unbounded")]
    HemisphereViolation,
    #[error("bodies have different dimensions: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dilation factor must be a positive finite number, got {0}")]
    NonPositiveScale(f64),
    #[error("degenerate body: {0}")]
    Degenerate(String),
    #[error("exact vertex geometry is only available in dimensions 2 and 3, got {0}")]
    ExactUnsupported(usize),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Convex body `K = {x : x . v_i <= h_i for all i}` with unit outer normals
/// `v_i` and strictly positive support numbers `h_i`.
///
/// The normals may not fit in a closed hemisphere (that would leave the
/// intersection unbounded). Construction does not remove redundant
/// halfspaces; see [`pruned`](Self::pruned). Bodies are immutable and all
/// operations are pure, so sharing across threads is unrestricted.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawPolytope")]
pub struct HalfspacePolytope {
    dim: usize,
    normals: Vec<Vec<f64>>,
    offsets: Vec<f64>,
    #[serde(skip)]
    vertex_cache: OnceLock<Vec<Vec<f64>>>,
}

#[derive(Deserialize)]
struct RawPolytope {
    dim: usize,
    normals: Vec<Vec<f64>>,
    offsets: Vec<f64>,
}

impl TryFrom<RawPolytope> for HalfspacePolytope {
    type Error = BodyError;
    fn try_from(raw: RawPolytope) -> Result<Self, Self::Error> {
        HalfspacePolytope::new(raw.dim, raw.normals, raw.offsets)
    }
}

impl PartialEq for HalfspacePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.normals == other.normals && self.offsets == other.offsets
    }
}

impl HalfspacePolytope {
    pub fn new(dim: usize, normals: Vec<Vec<f64>>, offsets: Vec<f64>) -> Result<Self, BodyError> {
        if dim < 2 {
            return Err(BodyError::DimensionTooSmall(dim));
        }
        if normals.len() != offsets.len() {
            return Err(BodyError::LengthMismatch { normals: normals.len(), offsets: offsets.len() });
        }
        if normals.len() < dim + 1 {
            return Err(BodyError::TooFewHalfspaces { need: dim + 1, dim, got: normals.len() });
        }
        for (i, v) in normals.iter().enumerate() {
            if v.len() != dim {
                return Err(BodyError::WrongDimension { index: i, got: v.len(), expected: dim });
            }
            if !is_unit(v, 1e-9) {
                return Err(BodyError::NotUnit(i));
            }
        }
        for (i, &h) in offsets.iter().enumerate() {
            if !(h > 0.0) || !h.is_finite() {
                return Err(BodyError::NonPositiveOffset { index: i, value: h });
            }
        }
        if hemisphere_witness(&normals, 1e-10).is_some() {
            return Err(BodyError::HemisphereViolation);
        }
        Ok(Self { dim, normals, offsets, vertex_cache: OnceLock::new() })
    }

    /// The Wulff shape `[f]` of positive values `f` on a direction set: the
    /// body with normals = directions and offsets = values. Its support
    /// function satisfies `h_[f] <= f` per stored direction, with equality
    /// exactly on the non-redundant ones.
    pub fn wulff_shape(
        dim: usize,
        directions: Vec<Vec<f64>>,
        values: Vec<f64>,
    ) -> Result<Self, BodyError> {
        Self::new(dim, directions, values)
    }

    /// Axis-aligned cube `[-a, a]^n` in halfspace form.
    pub fn axis_cube(dim: usize, half_width: f64) -> Result<Self, BodyError> {
        let mut normals = Vec::with_capacity(2 * dim);
        for axis in 0..dim {
            for sgn in [1.0, -1.0] {
                let mut v = vec![0.0; dim];
                v[axis] = sgn;
                normals.push(v);
            }
        }
        let offsets = vec![half_width; 2 * dim];
        Self::new(dim, normals, offsets)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facet_count(&self) -> usize {
        self.normals.len()
    }

    pub fn normals(&self) -> &[Vec<f64>] {
        &self.normals
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    /// Radial function `rho(u) = min over {i : u . v_i > 0} of h_i/(u . v_i)`
    /// together with the minimizing facet index. Ties within a relative
    /// band (nodes on the radial projection of a ridge) break toward the
    /// smallest index.
    pub fn radial_with_facet(&self, u: &[f64]) -> (f64, usize) {
        debug_assert_eq!(u.len(), self.dim);
        let mut best = f64::INFINITY;
        for (v, &h) in self.normals.iter().zip(&self.offsets) {
            let d = dot(u, v);
            if d > 0.0 {
                let ratio = h / d;
                if ratio < best {
                    best = ratio;
                }
            }
        }
        assert!(
            best.is_finite(),
            "radial function unbounded: normals span all hemispheres by construction"
        );
        let band = best * (1.0 + TIE_REL_BAND);
        for (i, (v, &h)) in self.normals.iter().zip(&self.offsets).enumerate() {
            let d = dot(u, v);
            if d > 0.0 && h / d <= band {
                return (best, i);
            }
        }
        unreachable!("the minimizing facet is always inside its own tie band");
    }

    pub fn radial(&self, u: &[f64]) -> f64 {
        self.radial_with_facet(u).0
    }

    /// Radial samples at every grid node, in node order.
    pub fn radial_samples(&self, grid: &SphericalGrid) -> Result<Vec<f64>, BodyError> {
        Ok(self.assign_and_sample(grid)?.1)
    }

    /// Discrete radial Gauss map: grid node -> index of the facet containing
    /// its radial boundary point.
    pub fn facet_assignment(&self, grid: &SphericalGrid) -> Result<Vec<usize>, BodyError> {
        Ok(self.assign_and_sample(grid)?.0)
    }

    /// Facet assignment and radial samples in one pass over the grid.
    pub fn assign_and_sample(
        &self,
        grid: &SphericalGrid,
    ) -> Result<(Vec<usize>, Vec<f64>), BodyError> {
        if grid.dim() != self.dim {
            return Err(BodyError::DimensionMismatch(self.dim, grid.dim()));
        }
        let nodes = grid.nodes();
        let eval = |u: &Vec<f64>| {
            let (rho, facet) = self.radial_with_facet(u);
            (facet, rho)
        };
        let parts: Vec<(usize, f64)> = if nodes.len() * self.facet_count() >= PAR_WORK_THRESHOLD {
            nodes.par_iter().map(eval).collect()
        } else {
            nodes.iter().map(eval).collect()
        };
        Ok(parts.into_iter().unzip())
    }

    /// Drops every halfspace that no node of `grid` selects. The pruning
    /// grid is conventionally a refinement (4x) of the working grid, so
    /// that zero-area facets, which must carry zero curvature mass, are
    /// removed.
    pub fn pruned(&self, grid: &SphericalGrid) -> Result<Self, BodyError> {
        let assignment = self.facet_assignment(grid)?;
        let mut keep = vec![false; self.facet_count()];
        for &a in &assignment {
            keep[a] = true;
        }
        if keep.iter().all(|&k| k) {
            return Ok(self.clone());
        }
        let normals: Vec<Vec<f64>> = self
            .normals
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(v, _)| v.clone())
            .collect();
        let offsets: Vec<f64> = self
            .offsets
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(&h, _)| h)
            .collect();
        Self::new(self.dim, normals, offsets)
    }

    /// `lambda K`: offsets scaled, normals unchanged, so
    /// `rho_{lambda K} = lambda rho_K` pointwise and the facet assignment
    /// is invariant.
    pub fn dilate(&self, lambda: f64) -> Result<Self, BodyError> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(BodyError::NonPositiveScale(lambda));
        }
        Ok(Self {
            dim: self.dim,
            normals: self.normals.clone(),
            offsets: self.offsets.iter().map(|h| h * lambda).collect(),
            vertex_cache: OnceLock::new(),
        })
    }

    /// Grid surrogate of the radial metric `sup_u |rho_P(u) - rho_Q(u)|`.
    pub fn radial_distance(&self, other: &Self, grid: &SphericalGrid) -> Result<f64, BodyError> {
        if self.dim != other.dim {
            return Err(BodyError::DimensionMismatch(self.dim, other.dim));
        }
        let a = self.radial_samples(grid)?;
        let b = other.radial_samples(grid)?;
        Ok(a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max))
    }

    /// Exact vertex set (dimensions 2 and 3), computed once and cached.
    /// In 2-D the vertices come back in counterclockwise order.
    pub fn vertices(&self) -> Result<&[Vec<f64>], BodyError> {
        if let Some(v) = self.vertex_cache.get() {
            return Ok(v);
        }
        let computed = exact::enumerate_vertices(self)?;
        Ok(self.vertex_cache.get_or_init(|| computed))
    }

    /// Vertex indices of each facet polygon (3-D only), counterclockwise
    /// around the outward normal. Redundant facets yield an empty polygon.
    pub fn facet_polygons(&self) -> Result<Vec<Vec<usize>>, BodyError> {
        exact::facet_polygons(self)
    }

    /// Support function `h(u) = max {x . u : x in K}`, exact via the vertex
    /// set. Available in dimensions 2 and 3; see
    /// [`support_sampled`](Self::support_sampled) above that.
    pub fn support(&self, u: &[f64]) -> Result<f64, BodyError> {
        let verts = self.vertices()?;
        Ok(verts
            .iter()
            .map(|x| dot(x, u))
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Dimension-generic support estimate `1/rho_{K*}(u)` through the
    /// sampled polar; approximate at the grid's resolution. For repeated
    /// queries build [`polar`](Self::polar) once and reuse it.
    pub fn support_sampled(&self, u: &[f64], grid: &SphericalGrid) -> Result<f64, BodyError> {
        let polar = self.polar_sampled(grid)?;
        Ok(1.0 / polar.radial(u))
    }

    /// Polar body `K* = {y : y . x <= 1 for all x in K}`. Exact in
    /// dimensions 2 and 3 (each vertex `x` of `K` becomes the halfspace
    /// `y . x/|x| <= 1/|x|`); sampled through the grid otherwise.
    pub fn polar(&self, grid: &SphericalGrid) -> Result<Self, BodyError> {
        match self.dim {
            2 | 3 => self.polar_exact(),
            _ => self.polar_sampled(grid),
        }
    }

    /// Exact polar via vertex enumeration (dimensions 2 and 3 only).
    pub fn polar_exact(&self) -> Result<Self, BodyError> {
        let verts = self.vertices()?;
        let mut normals = Vec::with_capacity(verts.len());
        let mut offsets = Vec::with_capacity(verts.len());
        for x in verts {
            let r = norm(x);
            if r < 1e-12 {
                return Err(BodyError::Degenerate("vertex at the origin".into()));
            }
            normals.push(x.iter().map(|c| c / r).collect());
            offsets.push(1.0 / r);
        }
        Self::new(self.dim, normals, offsets)
    }

    /// Sampled polar: the Wulff shape of `1/rho_K` on the grid nodes,
    /// pruned on the same grid (a sampled facet is redundant exactly when
    /// no node selects it).
    pub fn polar_sampled(&self, grid: &SphericalGrid) -> Result<Self, BodyError> {
        let rho = self.radial_samples(grid)?;
        let offsets: Vec<f64> = rho.iter().map(|r| 1.0 / r).collect();
        let body = Self::wulff_shape(self.dim, grid.nodes().to_vec(), offsets)?;
        body.pruned(grid)
    }
}

/// Radial point cloud `{r(u) u}` representing the convex hull
/// `<r> = conv{r(u) u}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawRadialBody")]
pub struct RadialSampleBody {
    dim: usize,
    directions: Vec<Vec<f64>>,
    radii: Vec<f64>,
}

#[derive(Deserialize)]
struct RawRadialBody {
    dim: usize,
    directions: Vec<Vec<f64>>,
    radii: Vec<f64>,
}

impl TryFrom<RawRadialBody> for RadialSampleBody {
    type Error = BodyError;
    fn try_from(raw: RawRadialBody) -> Result<Self, Self::Error> {
        RadialSampleBody::new(raw.dim, raw.directions, raw.radii)
    }
}

impl RadialSampleBody {
    pub fn new(dim: usize, directions: Vec<Vec<f64>>, radii: Vec<f64>) -> Result<Self, BodyError> {
        if dim < 2 {
            return Err(BodyError::DimensionTooSmall(dim));
        }
        if directions.len() != radii.len() {
            return Err(BodyError::LengthMismatch {
                normals: directions.len(),
                offsets: radii.len(),
            });
        }
        if directions.len() < dim + 1 {
            return Err(BodyError::TooFewHalfspaces { need: dim + 1, dim, got: directions.len() });
        }
        for (i, v) in directions.iter().enumerate() {
            if v.len() != dim {
                return Err(BodyError::WrongDimension { index: i, got: v.len(), expected: dim });
            }
            if !is_unit(v, 1e-9) {
                return Err(BodyError::NotUnit(i));
            }
        }
        for (i, &r) in radii.iter().enumerate() {
            if !(r > 0.0) || !r.is_finite() {
                return Err(BodyError::NonPositiveOffset { index: i, value: r });
            }
        }
        if hemisphere_witness(&directions, 1e-10).is_some() {
            return Err(BodyError::HemisphereViolation);
        }
        Ok(Self { dim, directions, radii })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// The convex hull `<r>` in halfspace form, via the duality
    /// `<r> = [1/r]*`: build the Wulff shape of the reciprocal samples and
    /// take its exact polar. Dimensions 2 and 3.
    pub fn convex_hull(&self) -> Result<HalfspacePolytope, BodyError> {
        let reciprocal: Vec<f64> = self.radii.iter().map(|r| 1.0 / r).collect();
        let wulff =
            HalfspacePolytope::wulff_shape(self.dim, self.directions.clone(), reciprocal)?;
        wulff.polar_exact()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{GridRule, SphericalGrid};
    use proptest::prelude::*;

    fn unit2(theta: f64) -> Vec<f64> {
        vec![theta.cos(), theta.sin()]
    }

    fn square() -> HalfspacePolytope {
        HalfspacePolytope::axis_cube(2, 1.0).unwrap()
    }

    fn cube() -> HalfspacePolytope {
        HalfspacePolytope::axis_cube(3, 1.0).unwrap()
    }

    /// Discretized ball of radius `r`: Wulff shape of the constant `r` on a
    /// symmetric direction set.
    fn ball_2d(r: f64, facets: usize) -> HalfspacePolytope {
        let dirs: Vec<Vec<f64>> = (0..facets)
            .map(|k| unit2(2.0 * std::f64::consts::PI * k as f64 / facets as f64))
            .collect();
        HalfspacePolytope::wulff_shape(2, dirs, vec![r; facets]).unwrap()
    }

    #[test]
    fn radial_function_cube_axis_and_corner() {
        let c = cube();
        assert!((c.radial(&[1.0, 0.0, 0.0]) - 1.0).abs() < 1e-15);

        // Corner direction: brute-force oracle over the six facets.
        let s = 3f64.sqrt().recip();
        let u = [s, s, s];
        let mut oracle = f64::INFINITY;
        for (v, &h) in c.normals().iter().zip(c.offsets()) {
            let d = crate::numeric::dot(&u, v);
            if d > 0.0 {
                oracle = oracle.min(h / d);
            }
        }
        assert!((oracle - 3f64.sqrt()).abs() < 1e-12);
        assert!((c.radial(&u) - oracle).abs() < 1e-15);
    }

    #[test]
    fn radial_function_discretized_ball() {
        let b = ball_2d(2.5, 256);
        // Between normals the radial function dips by O(gap^2).
        for theta in [0.0, 0.1, 1.0, 3.0, 5.5] {
            let rho = b.radial(&unit2(theta));
            assert!((rho - 2.5).abs() < 2.5 * 1e-3, "rho = {rho}");
        }
    }

    #[test]
    fn support_square_and_cube() {
        let sq = square();
        assert!((sq.support(&[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);

        // Cube corner: the vertex (1,1,1) realizes the maximum.
        let c = cube();
        let s = 3f64.sqrt().recip();
        let h = c.support(&[s, s, s]).unwrap();
        assert!((h - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn vertices_of_cube() {
        let c = cube();
        let verts = c.vertices().unwrap();
        assert_eq!(verts.len(), 8);
        for v in verts {
            for &coord in v {
                assert!((coord.abs() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn polar_of_square_is_cross_polytope() {
        let sq = square();
        let polar = sq.polar_exact().unwrap();
        // Vertices of the square are (+-1, +-1); the polar has four facets
        // with normals (+-1, +-1)/sqrt(2) and offsets 1/sqrt(2).
        assert_eq!(polar.facet_count(), 4);
        let s = 0.5f64.sqrt();
        for (v, &h) in polar.normals().iter().zip(polar.offsets()) {
            assert!((h - s).abs() < 1e-12);
            assert!((v[0].abs() - s).abs() < 1e-12);
            assert!((v[1].abs() - s).abs() < 1e-12);
        }
    }

    #[test]
    fn polar_of_ball_inverts_radius() {
        let b = ball_2d(2.0, 128);
        let grid = SphericalGrid::build(2, GridRule::EqualAngle2d, 512, None).unwrap();
        let p = b.polar(&grid).unwrap();
        for theta in [0.2, 1.3, 4.0] {
            let rho = p.radial(&unit2(theta));
            assert!((rho - 0.5).abs() < 0.5 * 1e-2);
        }
    }

    #[test]
    fn bipolar_returns_the_cube() {
        let c = cube();
        let grid = SphericalGrid::build(3, GridRule::Fibonacci3d, 2000, None).unwrap();
        let back = c.polar_exact().unwrap().polar_exact().unwrap();
        let dist = c.radial_distance(&back, &grid).unwrap();
        assert!(dist <= 1e-9, "bipolar distance {dist}");
    }

    #[test]
    fn duality_identity_on_grid_nodes() {
        let c = cube();
        let grid = SphericalGrid::build(3, GridRule::Fibonacci3d, 1000, None).unwrap();
        let polar = c.polar_exact().unwrap();
        for u in grid.nodes() {
            let lhs = polar.radial(u) * c.support(u).unwrap();
            assert!((lhs - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn wulff_of_support_samples_recovers_cube() {
        let c = cube();
        let grid = SphericalGrid::build(3, GridRule::Fibonacci3d, 1500, None).unwrap();
        let values: Vec<f64> = c
            .normals()
            .iter()
            .map(|v| c.support(v).unwrap())
            .collect();
        let w =
            HalfspacePolytope::wulff_shape(3, c.normals().to_vec(), values).unwrap();
        let dist = c.radial_distance(&w, &grid).unwrap();
        assert!(dist <= 1e-9, "[h_K] != K: distance {dist}");
    }

    #[test]
    fn wulff_constant_is_ball() {
        let b = ball_2d(0.7, 64);
        for theta in [0.0, 0.5, 2.2] {
            let rho = b.radial(&unit2(theta));
            assert!((rho - 0.7).abs() < 0.7 * 2e-3);
        }
    }

    #[test]
    fn wulff_support_bound() {
        // h_[f] <= f per stored direction; strict slack only on facets a
        // pruning grid never selects.
        let mut dirs: Vec<Vec<f64>> = (0..16)
            .map(|k| unit2(2.0 * std::f64::consts::PI * k as f64 / 16.0))
            .collect();
        let mut vals = vec![1.0; 16];
        // An extra direction pushed far out: clearly redundant.
        dirs.push(unit2(0.1));
        vals.push(5.0);
        let w = HalfspacePolytope::wulff_shape(2, dirs.clone(), vals.clone()).unwrap();
        for (v, &f) in dirs.iter().zip(&vals) {
            let h = w.support(v).unwrap();
            assert!(h <= f + 1e-12, "support bound violated: {h} > {f}");
        }
        let grid = SphericalGrid::build(2, GridRule::EqualAngle2d, 1024, None).unwrap();
        let pruned = w.pruned(&grid).unwrap();
        assert_eq!(pruned.facet_count(), 16);
        for (v, &h) in pruned.normals().iter().zip(pruned.offsets()) {
            let support = pruned.support(v).unwrap();
            assert!((support - h).abs() <= 1e-9, "non-redundant facet not tight");
        }
    }

    #[test]
    fn hull_of_radial_samples_recovers_cube() {
        // Vertex enumeration is cubic in the direction count, so the cloud
        // stays at desk scale; the corners are the last thing to converge.
        let c = cube();
        let grid = SphericalGrid::build(3, GridRule::Fibonacci3d, 600, None).unwrap();
        let radii: Vec<f64> = grid.nodes().iter().map(|u| c.radial(u)).collect();
        let cloud = RadialSampleBody::new(3, grid.nodes().to_vec(), radii.clone()).unwrap();
        let hull = cloud.convex_hull().unwrap();

        // Inscribed in the cube, and exact at every sampled direction
        // (sample points lie on both boundaries).
        let fine = SphericalGrid::build(3, GridRule::Fibonacci3d, 4000, None).unwrap();
        for u in fine.nodes() {
            assert!(hull.radial(u) <= c.radial(u) + 1e-9);
        }
        for (u, &r) in grid.nodes().iter().zip(&radii) {
            assert!((hull.radial(u) - r).abs() <= 1e-6 * r, "sampled direction not on hull");
        }
        // Corner clipping bounds the global radial gap at this sampling.
        let dist = c.radial_distance(&hull, &fine).unwrap();
        assert!(dist < 0.2, "hull distance {dist}");
    }

    #[test]
    fn hull_of_constant_radial_is_ball() {
        let dirs: Vec<Vec<f64>> = (0..64)
            .map(|k| unit2(2.0 * std::f64::consts::PI * k as f64 / 64.0))
            .collect();
        let cloud = RadialSampleBody::new(2, dirs, vec![1.5; 64]).unwrap();
        let hull = cloud.convex_hull().unwrap();
        // The hull of boundary samples inscribes the ball.
        for theta in [0.0, 0.7, 2.9] {
            let rho = hull.radial(&unit2(theta));
            assert!(rho <= 1.5 + 1e-12 && rho > 1.5 * (1.0 - 3e-3), "rho = {rho}");
        }
    }

    #[test]
    fn antipodal_directions_rejected() {
        let dirs = vec![vec![1.0, 0.0], vec![-1.0, 0.0]];
        let err = RadialSampleBody::new(2, dirs, vec![1.0, 1.0]).unwrap_err();
        assert!(matches!(
            err,
            BodyError::HemisphereViolation | BodyError::TooFewHalfspaces { .. }
        ));
    }

    #[test]
    fn assignment_square_at_30_degrees() {
        let sq = square();
        let u = unit2(30f64.to_radians());
        // Facet normals in axis_cube order: +e1, -e1, +e2, -e2.
        let (_, facet) = sq.radial_with_facet(&u);
        assert_eq!(facet, 0);
    }

    #[test]
    fn assignment_square_tie_at_45_degrees() {
        let sq = square();
        let u = unit2(45f64.to_radians());
        let (_, facet) = sq.radial_with_facet(&u);
        // Ridge direction: facets +e1 (index 0) and +e2 (index 2) tie;
        // the smaller index wins.
        assert_eq!(facet, 0);
    }

    #[test]
    fn assignment_covers_exactly_the_pruned_facets() {
        let mut dirs: Vec<Vec<f64>> = (0..12)
            .map(|k| unit2(2.0 * std::f64::consts::PI * k as f64 / 12.0))
            .collect();
        let mut vals = vec![1.0; 12];
        dirs.push(unit2(0.2));
        vals.push(3.0); // redundant
        let body = HalfspacePolytope::wulff_shape(2, dirs, vals).unwrap();
        let grid = SphericalGrid::build(2, GridRule::EqualAngle2d, 2048, None).unwrap();
        let pruned = body.pruned(&grid).unwrap();
        assert_eq!(pruned.facet_count(), 12);
        let assigned: std::collections::BTreeSet<usize> =
            pruned.facet_assignment(&grid).unwrap().into_iter().collect();
        let all: std::collections::BTreeSet<usize> = (0..pruned.facet_count()).collect();
        assert_eq!(assigned, all);
    }

    #[test]
    fn dilation_scales_offsets_and_radials() {
        let c = cube();
        let d = c.dilate(2.0).unwrap();
        assert!((d.radial(&[1.0, 0.0, 0.0]) - 2.0).abs() < 1e-15);
        for &h in d.offsets() {
            assert_eq!(h, 2.0);
        }
        // Inverse scaling by exact powers of two round-trips bitwise.
        let back = d.dilate(0.5).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn radial_distance_basics() {
        let grid = SphericalGrid::build(2, GridRule::EqualAngle2d, 512, None).unwrap();
        let b1 = ball_2d(1.0, 128);
        assert_eq!(b1.radial_distance(&b1, &grid).unwrap(), 0.0);

        let b2 = b1.dilate(2.0).unwrap();
        let d = b1.radial_distance(&b2, &grid).unwrap();
        // rho doubles everywhere, so the gap equals rho itself (about 1).
        assert!((d - 1.0).abs() < 5e-3, "distance {d}");
    }

    #[test]
    fn radial_distance_cube_dilation_peaks_at_corners() {
        let c = cube();
        let delta = 0.05;
        let d = c.dilate(1.0 + delta).unwrap();
        let grid = SphericalGrid::build(3, GridRule::Fibonacci3d, 20_000, None).unwrap();
        let dist = c.radial_distance(&d, &grid).unwrap();
        let expect = delta * 3f64.sqrt();
        assert!((dist - expect).abs() < expect * 1e-2, "distance {dist} vs {expect}");
    }

    #[test]
    fn sampled_polar_4d_inverts_support() {
        // Above dimension 3 the polar is the sampled Wulff form of 1/rho;
        // the duality rho_{K*} h_K = 1 then holds at grid accuracy. For
        // the 4-cube h(u) is the l1 norm of u.
        let c = HalfspacePolytope::axis_cube(4, 1.0).unwrap();
        let grid = SphericalGrid::build(4, GridRule::MonteCarlo, 20_000, Some(5)).unwrap();
        let polar = c.polar(&grid).unwrap();
        assert!(polar.facet_count() <= grid.len());
        // The sampled Wulff drops continuum constraints, so it circumscribes
        // the true polar (rho h >= 1) and overshoots most near the sharp
        // cross-polytope vertices; Monte Carlo spacing in 4-D is coarse.
        let probe = SphericalGrid::build(4, GridRule::MonteCarlo, 64, Some(9)).unwrap();
        let mut worst: f64 = 0.0;
        let mut mean = 0.0;
        for u in probe.nodes() {
            let h = u.iter().map(|x| x.abs()).sum::<f64>();
            let product = polar.radial(u) * h;
            assert!(product >= 1.0 - 1e-9, "sampled polar must circumscribe: {product}");
            worst = worst.max(product - 1.0);
            mean += (product - 1.0) / 64.0;
        }
        assert!(worst < 0.1, "worst overshoot {worst}");
        assert!(mean < 0.05, "mean overshoot {mean}");
        let s = c.support_sampled(&probe.nodes()[0], &grid).unwrap();
        let h = probe.nodes()[0].iter().map(|x| x.abs()).sum::<f64>();
        assert!((s - h).abs() < 0.1 * h, "sampled support {s} vs {h}");
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(matches!(
            HalfspacePolytope::new(2, vec![vec![1.0, 0.0]], vec![1.0]),
            Err(BodyError::TooFewHalfspaces { .. })
        ));
        let err = HalfspacePolytope::new(
            2,
            vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.5, 0.5]],
            vec![1.0, 1.0, 1.0],
        )
        .unwrap_err();
        assert!(matches!(err, BodyError::NotUnit(2)));

        let err = HalfspacePolytope::axis_cube(2, -1.0).unwrap_err();
        assert!(matches!(err, BodyError::NonPositiveOffset { .. }));

        let dirs = vec![
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            unit2(std::f64::consts::FRAC_PI_4),
        ];
        let err = HalfspacePolytope::new(2, dirs, vec![1.0; 3]).unwrap_err();
        assert!(matches!(err, BodyError::HemisphereViolation));
    }

    #[test]
    fn body_json_round_trip_is_bit_exact() {
        let c = cube();
        let text = serde_json::to_string(&c).unwrap();
        let back: HalfspacePolytope = serde_json::from_str(&text).unwrap();
        assert_eq!(c, back);
    }

    proptest! {
        #[test]
        fn dilation_preserves_assignment(lambda in 0.01f64..100.0, seed in 0u64..200) {
            // Random 2-D polytope from seeded offsets on a fixed normal fan.
            let m = 10usize;
            let dirs: Vec<Vec<f64>> = (0..m)
                .map(|k| unit2(2.0 * std::f64::consts::PI * k as f64 / m as f64 + 0.05))
                .collect();
            let vals: Vec<f64> = (0..m)
                .map(|k| 0.5 + ((seed.wrapping_mul(2654435761).wrapping_add(k as u64 * 97)) % 1000) as f64 / 500.0)
                .collect();
            let body = HalfspacePolytope::wulff_shape(2, dirs, vals).unwrap();
            let grid = SphericalGrid::build(2, GridRule::EqualAngle2d, 256, None).unwrap();
            let a = body.facet_assignment(&grid).unwrap();
            let b = body.dilate(lambda).unwrap().facet_assignment(&grid).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
