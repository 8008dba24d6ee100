//! Dual Orlicz curvature measures and the dual Orlicz-Minkowski problem,
//! computed on convex polytopes.
//!
//! The library represents a convex body `K` (origin interior) as an
//! intersection of halfspaces `x . v_i <= h_i` and discretizes every
//! spherical integral with a fixed quadrature grid, so that
//!
//! - the dual Orlicz quermassintegral `V~_phi(K) = (1/n) int phi(rho_K) du`
//!   becomes a weighted sum over grid nodes,
//! - the dual Orlicz curvature measure `C~_varphi(K, .)` becomes a vector of
//!   per-facet masses obtained by assigning each grid node to the facet that
//!   realizes the radial function there, and
//! - the dual Orlicz-Minkowski problem — given a discrete measure `mu` on the
//!   sphere, find `K` with `mu/|mu| = C~_varphi(K,.)/V~_varphi(K)` — becomes a
//!   finite-dimensional constrained maximization over the support numbers of
//!   `K` at the atoms of `mu`, driven by the variational identity
//!   `d/dt V~_phi([h e^{tg}]) = -int g dC~_varphi`.
//!
//! Modules follow that pipeline: [`quadrature`] builds grids, [`orlicz`]
//! models the function pair `(phi, varphi)`, [`body`] supplies the polytope
//! geometry (radial/support functions, polar duality, Wulff shapes),
//! [`measure`] computes the measures and integrals, and [`solver`] runs the
//! constrained ascent. [`verify`] bundles the cross-checking identity suite
//! used by the CLI.

pub mod body;
mod hemisphere;
pub mod measure;
pub mod numeric;
pub mod orlicz;
pub mod quadrature;
pub mod roots;
pub mod solver;
pub mod verify;

pub use body::{HalfspacePolytope, RadialSampleBody};
pub use measure::{ConcentrationCheck, CurvatureMeasure, DiscreteSphericalMeasure};
pub use orlicz::{OrliczPair, PairFamily, RadialAdditionSpec, ValidationReport};
pub use quadrature::{GridRule, SphericalGrid};
pub use solver::{SolveReport, SolverConfig, Termination};
