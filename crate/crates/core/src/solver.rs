//! Numerical solution of the dual Orlicz-Minkowski problem: given a
//! discrete measure `mu` on the sphere and a decreasing-family pair
//! `(phi, varphi)`, find a polytope `K` with
//! `mu/|mu| = C~_varphi(K,.)/V~_varphi(K)`.
//!
//! The unknown is the vector of support numbers of `K` at the atom
//! directions of `mu` — perturbing the support function anywhere else
//! cannot increase the objective, since the Wulff shape of any function
//! dominates it. The solver maximizes
//! `Phi(h) = -(1/|mu|) sum_j mu_j log h_j` subject to
//! `V~_phi([h]) = |mu|` by projected gradient ascent in `log h`:
//!
//! 1. the first variation `d/dt V~_phi([h e^{tg}]) = -sum_j g_j c_j`
//!    (with `c_j` the curvature masses of `[h]`) gives the constraint
//!    normal, so the ascent direction is the residual gradient projected
//!    to first-order constraint preservation (`sum_j d_j c_j = 0`);
//! 2. each trial step is restored to exact feasibility by dilation, a
//!    strictly monotone 1-D root find (closed-form for homogeneous pairs);
//! 3. backtracking accepts the first step that does not decrease the
//!    feasible objective.
//!
//! Stationarity of the limit is certified directly: on convergence
//! `max_j |mu_j/|mu| - c_j/V~_varphi| <= tol_residual` and
//! `tau = |mu|/V~_varphi(K)` reproduces `mu = tau C~_varphi(K,.)` at grid
//! precision. A facet that loses all quadrature mass during iteration gets
//! `c_j = 0`, which makes its gradient component push `h_j` back inward
//! relative to the rest; no special-casing is needed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::body::{BodyError, HalfspacePolytope};
use crate::measure::{
    dual_orlicz_curvature_measure, dual_orlicz_quermassintegral, hemisphere_concentration_check,
    ConcentrationCheck, DiscreteSphericalMeasure, MeasureError,
};
use crate::numeric::{distance, kahan_sum};
use crate::orlicz::{OrliczPair, PairFamily};
use crate::quadrature::{sphere_measure, GridError, GridRule, SphericalGrid};
use crate::roots::{solve_monotone_positive, BracketPolicy, RootError};

const MAX_BACKTRACKS: usize = 30;
/// Multiplicative jitter scale (in log h) for seeded initializations.
const INIT_JITTER: f64 = 0.1;
/// Accepted steps may decrease the feasible objective by at most this much.
const ASCENT_SLACK: f64 = 1e-12;
/// Iterations without a 1% best-residual improvement before the run is
/// declared stalled at the grid's resolution floor.
const STALL_WINDOW: usize = 300;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("facet count {facets} does not match atom count {atoms}")]
    FacetAtomMismatch { facets: usize, atoms: usize },
    #[error("facet {0} normal does not coincide with atom {0} direction")]
    FacetAtomMisaligned(usize),
    #[error("support numbers must be positive (entry {0})")]
    NonPositiveSupport(usize),
    #[error("constraint rescaling requires a decreasing-family (A) pair")]
    PairNotDecreasing,
    #[error("constraint rescaling failed: {0}")]
    RescaleBracket(RootError),
    #[error("invalid solver config: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Body(#[from] BodyError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Solver parameters. `Default` matches dimension 2; use
/// [`default_for_dim`](Self::default_for_dim) elsewhere.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverConfig {
    pub grid_rule: GridRule,
    pub grid_resolution: usize,
    /// Seed for Monte Carlo grids (dimensions above 3).
    pub grid_seed: Option<u64>,
    /// Initial ascent step in log-space.
    pub step_size: f64,
    /// Step shrink factor in (0, 1) for backtracking.
    pub backtracking_factor: f64,
    /// Stationarity tolerance on `max_j |mu_j/|mu| - c_j/V~_varphi|`.
    pub tol_residual: f64,
    /// Relative constraint tolerance on `|V~_phi - |mu||`.
    pub tol_constraint: f64,
    pub max_iterations: usize,
    /// Initial bracket for the dilation root find.
    pub rescale_bracket: (f64, f64),
    /// Seed for the randomized initialization; `None` starts from the
    /// feasible ball.
    pub seed: Option<u64>,
    /// Central-difference step for gradient audits.
    pub fd_step: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self::default_for_dim(2)
    }
}

impl SolverConfig {
    /// Defaults tuned so the residual tolerance sits at the grid's
    /// resolution floor: equal-angle 4096 in the plane, Fibonacci 1e5 on
    /// the 2-sphere, Monte Carlo 2e4 above.
    pub fn default_for_dim(dim: usize) -> Self {
        let (grid_rule, grid_resolution, grid_seed) = match dim {
            2 => (GridRule::EqualAngle2d, 4096, None),
            3 => (GridRule::Fibonacci3d, 100_000, None),
            _ => (GridRule::MonteCarlo, 20_000, Some(0)),
        };
        Self {
            grid_rule,
            grid_resolution,
            grid_seed,
            step_size: 0.5,
            backtracking_factor: 0.5,
            tol_residual: 1e-5,
            tol_constraint: 1e-8,
            max_iterations: 5000,
            rescale_bracket: (1e-6, 1e6),
            seed: None,
            fd_step: 1e-5,
        }
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        if !(self.step_size > 0.0) {
            return Err(SolveError::BadConfig("step_size must be positive".into()));
        }
        if !(self.backtracking_factor > 0.0 && self.backtracking_factor < 1.0) {
            return Err(SolveError::BadConfig("backtracking_factor must lie in (0,1)".into()));
        }
        if !(self.tol_residual > 0.0) || !(self.tol_constraint > 0.0) {
            return Err(SolveError::BadConfig("tolerances must be positive".into()));
        }
        if self.max_iterations < 1 {
            return Err(SolveError::BadConfig("max_iterations must be at least 1".into()));
        }
        if !(self.rescale_bracket.0 > 0.0 && self.rescale_bracket.1 > self.rescale_bracket.0) {
            return Err(SolveError::BadConfig("rescale_bracket must satisfy 0 < lo < hi".into()));
        }
        if !(self.fd_step > 0.0) {
            return Err(SolveError::BadConfig("fd_step must be positive".into()));
        }
        Ok(())
    }

    pub fn build_grid(&self, dim: usize) -> Result<SphericalGrid, GridError> {
        SphericalGrid::build(dim, self.grid_rule, self.grid_resolution, self.grid_seed)
    }
}

/// Why the solver stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxIters,
    DegenerateMeasure,
    InvalidPair,
}

/// Solver outcome and trajectory. On `Converged` the body satisfies
/// `max_j |r_j| <= tol_residual` and `|V~_phi - |mu|| <= tol_constraint |mu|`.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub termination: Termination,
    pub body: Option<HalfspacePolytope>,
    /// Multiplier `tau = |mu| / V~_varphi(body)`.
    pub tau: Option<f64>,
    /// Per-atom stationarity residuals `mu_j/|mu| - c_j/V~_varphi`.
    pub residuals: Vec<f64>,
    pub phi_trace: Vec<f64>,
    pub vphi_trace: Vec<f64>,
    pub iterations: usize,
    /// Hemisphere witness when the measure is degenerate. Diagnostic only;
    /// not part of the report document.
    #[serde(skip)]
    pub witness: Option<Vec<f64>>,
}

impl SolveReport {
    fn empty(termination: Termination) -> Self {
        Self {
            termination,
            body: None,
            tau: None,
            residuals: Vec::new(),
            phi_trace: Vec::new(),
            vphi_trace: Vec::new(),
            iterations: 0,
            witness: None,
        }
    }
}

/// Objective `Phi(h) = -(1/|mu|) sum_j mu_j log h_j`, evaluated on the raw
/// support numbers at the atoms of `mu`.
pub fn objective_phi(h: &[f64], mu: &DiscreteSphericalMeasure) -> Result<f64, SolveError> {
    if h.len() != mu.len() {
        return Err(SolveError::FacetAtomMismatch { facets: h.len(), atoms: mu.len() });
    }
    if let Some(i) = h.iter().position(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(SolveError::NonPositiveSupport(i));
    }
    let total = mu.total_mass();
    Ok(-kahan_sum(mu.atoms().iter().zip(h).map(|(a, &hj)| a.mass * hj.ln())) / total)
}

fn objective_from_logs(log_h: &[f64], masses: &[f64], mu_total: f64) -> f64 {
    -kahan_sum(masses.iter().zip(log_h).map(|(m, lh)| m * lh)) / mu_total
}

/// First variation of the constraint along a facet-indexed perturbation
/// `g` of `log h`: `d/dt V~_phi([h e^{tg}])|_0 = -sum_j g_j c_j` for a
/// decreasing-family pair (the increasing family flips the sign of the
/// same expression).
pub fn constraint_directional_derivative(
    p: &HalfspacePolytope,
    pair: &OrliczPair,
    grid: &SphericalGrid,
    g: &[f64],
) -> Result<f64, SolveError> {
    let curvature = dual_orlicz_curvature_measure(p, pair, grid)?;
    Ok(-curvature.integrate_against(g)?)
}

/// Finds the unique `lambda` with `V~_phi(lambda P) = target` (decreasing
/// family: the map is strictly monotone in `lambda`). Homogeneous pairs
/// solve in closed form; otherwise a bracketed log-space bisection runs on
/// radial samples computed once.
pub fn rescale_to_constraint(
    p: &HalfspacePolytope,
    pair: &OrliczPair,
    grid: &SphericalGrid,
    target: f64,
) -> Result<(f64, HalfspacePolytope), SolveError> {
    rescale_with(p, pair, grid, target, (1e-6, 1e6))
}

fn rescale_with(
    p: &HalfspacePolytope,
    pair: &OrliczPair,
    grid: &SphericalGrid,
    target: f64,
    bracket: (f64, f64),
) -> Result<(f64, HalfspacePolytope), SolveError> {
    if pair.family() != PairFamily::ADecreasing {
        return Err(SolveError::PairNotDecreasing);
    }
    let n = p.dim() as f64;
    let rho = p.radial_samples(grid)?;
    let weights = grid.weights();
    let value_at = |lambda: f64| {
        kahan_sum(rho.iter().zip(weights).map(|(&r, &w)| w * pair.phi(lambda * r))) / n
    };

    if let Some(q) = pair.homogeneity() {
        let v1 = value_at(1.0);
        let lambda = (target / v1).powf(1.0 / q);
        if lambda.is_finite() && lambda > 0.0 && (value_at(lambda) - target).abs() <= 1e-9 * target
        {
            return Ok((lambda, p.dilate(lambda)?));
        }
    }

    let lambda = solve_monotone_positive(
        value_at,
        target,
        bracket.0,
        bracket.1,
        1e-13,
        BracketPolicy::default(),
    )
    .map_err(SolveError::RescaleBracket)?;
    Ok((lambda, p.dilate(lambda)?))
}

/// Multiplier and per-atom stationarity residuals of a candidate body:
/// `tau = |mu|/V~_varphi(P)` and `r_j = mu_j/|mu| - c_j/V~_varphi`.
/// The body's facets must coincide with the measure's atoms, in order.
pub fn stationarity_residual(
    mu: &DiscreteSphericalMeasure,
    p: &HalfspacePolytope,
    pair: &OrliczPair,
    grid: &SphericalGrid,
) -> Result<(f64, Vec<f64>), SolveError> {
    if p.facet_count() != mu.len() {
        return Err(SolveError::FacetAtomMismatch { facets: p.facet_count(), atoms: mu.len() });
    }
    for (j, (v, atom)) in p.normals().iter().zip(mu.atoms()).enumerate() {
        if distance(v, &atom.direction) > 1e-9 {
            return Err(SolveError::FacetAtomMisaligned(j));
        }
    }
    let curvature = dual_orlicz_curvature_measure(p, pair, grid)?;
    let v_varphi = curvature.total();
    let mu_total = mu.total_mass();
    let tau = mu_total / v_varphi;
    let residuals = mu
        .atoms()
        .iter()
        .zip(curvature.masses())
        .map(|(a, &c)| a.mass / mu_total - c / v_varphi)
        .collect();
    Ok((tau, residuals))
}

/// Runs the constrained ascent. Input validation failures surface as
/// report terminations (`InvalidPair`, `DegenerateMeasure`) so callers can
/// branch on solvability; hard errors are reserved for malformed
/// configuration or internal failures.
pub fn solve_dual_orlicz_minkowski(
    mu: &DiscreteSphericalMeasure,
    pair: &OrliczPair,
    config: &SolverConfig,
) -> Result<SolveReport, SolveError> {
    config.validate()?;

    if !pair.solver_admissible() {
        return Ok(SolveReport::empty(Termination::InvalidPair));
    }
    match hemisphere_concentration_check(mu)? {
        ConcentrationCheck::Fail { witness } => {
            let mut report = SolveReport::empty(Termination::DegenerateMeasure);
            report.witness = Some(witness);
            return Ok(report);
        }
        ConcentrationCheck::Pass => {}
    }

    let dim = mu.dim();
    let grid = config.build_grid(dim)?;
    let dirs = mu.directions();
    let masses = mu.masses();
    let mu_total = mu.total_mass();
    let m = dirs.len();

    // Feasible symmetric start: the ball radius solving
    // V~_phi(r B) = phi(r) |S^{n-1}| / n = |mu|.
    let phi_target = dim as f64 * mu_total / sphere_measure(dim);
    let r0 = solve_monotone_positive(
        |t| pair.phi(t),
        phi_target,
        config.rescale_bracket.0,
        config.rescale_bracket.1,
        1e-13,
        BracketPolicy::default(),
    )
    .map_err(SolveError::RescaleBracket)?;
    let mut log_h = vec![r0.ln(); m];
    if let Some(seed) = config.seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for lh in log_h.iter_mut() {
            let z: f64 = StandardNormal.sample(&mut rng);
            *lh += INIT_JITTER * z;
        }
    }

    let body_of = |log_h: &[f64]| -> Result<HalfspacePolytope, SolveError> {
        let h: Vec<f64> = log_h.iter().map(|lh| lh.exp()).collect();
        Ok(HalfspacePolytope::wulff_shape(dim, dirs.clone(), h)?)
    };

    // Restore exact feasibility before the first iteration.
    {
        let body = body_of(&log_h)?;
        let (lambda, _) = rescale_with(&body, pair, &grid, mu_total, config.rescale_bracket)?;
        let shift = lambda.ln();
        for lh in log_h.iter_mut() {
            *lh += shift;
        }
    }

    let mut phi_trace = Vec::new();
    let mut vphi_trace = Vec::new();
    let mut iterations = 0;
    let mut termination = Termination::MaxIters;
    let mut best_residual = f64::INFINITY;
    let mut last_improvement = 0usize;

    for iter in 1..=config.max_iterations {
        iterations = iter;
        let body = body_of(&log_h)?;
        let curvature = dual_orlicz_curvature_measure(&body, pair, &grid)?;
        let c = curvature.masses();
        let v_varphi = curvature.total();
        let v_phi = dual_orlicz_quermassintegral(&body, |t| pair.phi(t), &grid)?;
        let phi_val = objective_from_logs(&log_h, &masses, mu_total);
        phi_trace.push(phi_val);
        vphi_trace.push(v_phi);

        let res_max = masses
            .iter()
            .zip(c)
            .map(|(mj, cj)| (mj / mu_total - cj / v_varphi).abs())
            .fold(0.0, f64::max);
        if res_max <= config.tol_residual
            && (v_phi - mu_total).abs() <= config.tol_constraint * mu_total
        {
            termination = Termination::Converged;
            break;
        }
        if res_max < 0.99 * best_residual {
            best_residual = res_max;
            last_improvement = iter;
        } else if iter - last_improvement >= STALL_WINDOW {
            // The residual stopped moving: the target shares are not
            // attainable at this grid resolution (facet masses change in
            // single-node quanta). Report honestly instead of burning the
            // remaining budget.
            break;
        }

        // Ascent direction: residual gradient of Phi projected onto the
        // tangent of the constraint (sum_j d_j c_j = 0).
        let a: Vec<f64> = masses.iter().map(|mj| -mj / mu_total).collect();
        let ac = kahan_sum(a.iter().zip(c).map(|(aj, cj)| aj * cj));
        let cc = kahan_sum(c.iter().map(|cj| cj * cj));
        let d: Vec<f64> = a.iter().zip(c).map(|(aj, cj)| aj - (ac / cc) * cj).collect();

        let mut alpha = config.step_size;
        let mut accepted = false;
        for _ in 0..MAX_BACKTRACKS {
            let mut trial: Vec<f64> =
                log_h.iter().zip(&d).map(|(lh, dj)| lh + alpha * dj).collect();
            let trial_body = body_of(&trial)?;
            let (lambda, _) =
                rescale_with(&trial_body, pair, &grid, mu_total, config.rescale_bracket)?;
            let shift = lambda.ln();
            for lh in trial.iter_mut() {
                *lh += shift;
            }
            let phi_trial = objective_from_logs(&trial, &masses, mu_total);
            if phi_trial >= phi_val - ASCENT_SLACK {
                log_h = trial;
                accepted = true;
                break;
            }
            alpha *= config.backtracking_factor;
        }
        if !accepted {
            // The step floor is below any move the merit can register;
            // the grid cannot resolve further progress.
            break;
        }
    }

    let body = body_of(&log_h)?;
    let curvature = dual_orlicz_curvature_measure(&body, pair, &grid)?;
    let v_varphi = curvature.total();
    let tau = mu_total / v_varphi;
    let residuals: Vec<f64> = masses
        .iter()
        .zip(curvature.masses())
        .map(|(mj, cj)| mj / mu_total - cj / v_varphi)
        .collect();

    Ok(SolveReport {
        termination,
        body: Some(body),
        tau: Some(tau),
        residuals,
        phi_trace,
        vphi_trace,
        iterations,
        witness: None,
    })
}
