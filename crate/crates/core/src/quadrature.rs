//! Deterministic quadrature grids on the unit sphere `S^{n-1}`.
//!
//! Every spherical integral in the crate is a weighted sum over a fixed
//! [`SphericalGrid`]: `int f du ~= sum_k w_k f(u_k)`. Three rules are built
//! in, all with uniform weights so downstream measure computations stay
//! plain weighted counts:
//!
//! - `equal_angle_2d`: nodes at angles `2 pi k / N` on the circle,
//! - `fibonacci_3d`: the Fibonacci (golden-angle) lattice on `S^2`,
//! - `monte_carlo`: seeded uniform directions in any dimension `n >= 2`.
//!
//! Node order is deterministic (angle order, lattice index, RNG stream), so
//! facet-assignment tie-breaking downstream is reproducible.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hemisphere::hemisphere_witness;
use crate::numeric::{is_unit, kahan_sum};

#[derive(Debug, Error)]
pub enum GridError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("resolution must be at least 4, got {0}")]
    ResolutionTooSmall(usize),
    #[error("rule {rule:?} requires dimension {required}, got {got}")]
    RuleDimensionMismatch { rule: GridRule, required: usize, got: usize },
    #[error("monte_carlo rule requires a seed")]
    MissingSeed,
    #[error("expected {expected} node values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite integrand value at node {index}")]
    NonFiniteValue { index: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

/// Built-in quadrature rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridRule {
    EqualAngle2d,
    Fibonacci3d,
    MonteCarlo,
}

impl GridRule {
    pub fn as_str(&self) -> &'static str {
        match self {
            GridRule::EqualAngle2d => "equal_angle_2d",
            GridRule::Fibonacci3d => "fibonacci_3d",
            GridRule::MonteCarlo => "monte_carlo",
        }
    }
}

impl std::str::FromStr for GridRule {
    type Err = GridError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "equal_angle_2d" => Ok(GridRule::EqualAngle2d),
            "fibonacci_3d" => Ok(GridRule::Fibonacci3d),
            "monte_carlo" => Ok(GridRule::MonteCarlo),
            other => Err(GridError::InvalidGrid(format!("unknown grid rule '{other}'"))),
        }
    }
}

/// Total spherical measure `|S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)`.
pub fn sphere_measure(dim: usize) -> f64 {
    use std::f64::consts::PI;
    let n = dim as f64;
    let gamma_half_n = if dim % 2 == 0 {
        (1..dim / 2).map(|k| k as f64).product::<f64>()
    } else {
        let mut g = PI.sqrt();
        let mut x = 0.5;
        while x + 0.75 < n / 2.0 {
            g *= x;
            x += 1.0;
        }
        g
    };
    2.0 * PI.powf(n / 2.0) / gamma_half_n
}

/// Quadrature nodes and weights on `S^{n-1}`.
///
/// Invariants enforced on construction and deserialization: unit nodes
/// (within 1e-12), strictly positive weights summing to `|S^{n-1}|` (within
/// 1e-9 for built-in rules), and nodes not all contained in a closed
/// hemisphere. Grids are immutable; share them freely across threads.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct SphericalGrid {
    dim: usize,
    rule: GridRule,
    resolution: usize,
    seed: Option<u64>,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

#[derive(Deserialize)]
struct RawGrid {
    dim: usize,
    rule: GridRule,
    resolution: usize,
    seed: Option<u64>,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl TryFrom<RawGrid> for SphericalGrid {
    type Error = GridError;
    fn try_from(raw: RawGrid) -> Result<Self, Self::Error> {
        let grid = SphericalGrid {
            dim: raw.dim,
            rule: raw.rule,
            resolution: raw.resolution,
            seed: raw.seed,
            nodes: raw.nodes,
            weights: raw.weights,
        };
        grid.validate()?;
        Ok(grid)
    }
}

impl SphericalGrid {
    /// Builds a grid for the given rule. `seed` is required (and only used)
    /// by `monte_carlo`.
    pub fn build(
        dim: usize,
        rule: GridRule,
        resolution: usize,
        seed: Option<u64>,
    ) -> Result<Self, GridError> {
        if dim < 2 {
            return Err(GridError::DimensionTooSmall(dim));
        }
        if resolution < 4 {
            return Err(GridError::ResolutionTooSmall(resolution));
        }
        let nodes = match rule {
            GridRule::EqualAngle2d => {
                if dim != 2 {
                    return Err(GridError::RuleDimensionMismatch { rule, required: 2, got: dim });
                }
                equal_angle_nodes(resolution)
            }
            GridRule::Fibonacci3d => {
                if dim != 3 {
                    return Err(GridError::RuleDimensionMismatch { rule, required: 3, got: dim });
                }
                fibonacci_nodes(resolution)
            }
            GridRule::MonteCarlo => {
                let seed = seed.ok_or(GridError::MissingSeed)?;
                monte_carlo_nodes(dim, resolution, seed)
            }
        };
        let w = sphere_measure(dim) / resolution as f64;
        let grid = SphericalGrid {
            dim,
            rule,
            resolution,
            seed: if rule == GridRule::MonteCarlo { seed } else { None },
            weights: vec![w; nodes.len()],
            nodes,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Default rule for a dimension: equal-angle on the circle, Fibonacci on
    /// the 2-sphere, Monte Carlo above.
    pub fn default_rule(dim: usize) -> GridRule {
        match dim {
            2 => GridRule::EqualAngle2d,
            3 => GridRule::Fibonacci3d,
            _ => GridRule::MonteCarlo,
        }
    }

    /// Same rule and seed at `factor` times the resolution. Used for the
    /// pruning grid, conventionally 4x the working grid.
    pub fn refined(&self, factor: usize) -> Result<Self, GridError> {
        Self::build(self.dim, self.rule, self.resolution * factor, self.seed)
    }

    fn validate(&self) -> Result<(), GridError> {
        if self.dim < 2 {
            return Err(GridError::DimensionTooSmall(self.dim));
        }
        if self.nodes.len() != self.weights.len() {
            return Err(GridError::LengthMismatch {
                expected: self.nodes.len(),
                got: self.weights.len(),
            });
        }
        if self.nodes.is_empty() {
            return Err(GridError::InvalidGrid("empty grid".into()));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if node.len() != self.dim {
                return Err(GridError::InvalidGrid(format!(
                    "node {i} has dimension {}, expected {}",
                    node.len(),
                    self.dim
                )));
            }
            if !is_unit(node, 1e-12) {
                return Err(GridError::InvalidGrid(format!("node {i} is not a unit vector")));
            }
        }
        if self.weights.iter().any(|&w| !(w > 0.0)) {
            return Err(GridError::InvalidGrid("weights must be strictly positive".into()));
        }
        let total = kahan_sum(self.weights.iter().copied());
        let expected = sphere_measure(self.dim);
        if (total - expected).abs() > 1e-9 {
            return Err(GridError::InvalidGrid(format!(
                "weights sum to {total}, expected |S^{{n-1}}| = {expected}"
            )));
        }
        if hemisphere_witness(&self.nodes, 1e-10).is_some() {
            return Err(GridError::InvalidGrid(
                "nodes are contained in a closed hemisphere".into(),
            ));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rule(&self) -> GridRule {
        self.rule
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Quadrature of node-indexed values: `sum_k w_k f_k`, compensated, in
    /// node order.
    pub fn integrate(&self, values: &[f64]) -> Result<f64, GridError> {
        if values.len() != self.nodes.len() {
            return Err(GridError::LengthMismatch { expected: self.nodes.len(), got: values.len() });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(GridError::NonFiniteValue { index });
        }
        Ok(kahan_sum(self.weights.iter().zip(values).map(|(w, f)| w * f)))
    }

    /// Convenience: integrate a function of the node direction.
    pub fn integrate_fn(&self, f: impl Fn(&[f64]) -> f64) -> Result<f64, GridError> {
        let values: Vec<f64> = self.nodes.iter().map(|u| f(u)).collect();
        self.integrate(&values)
    }
}

fn equal_angle_nodes(resolution: usize) -> Vec<Vec<f64>> {
    use std::f64::consts::PI;
    (0..resolution)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / resolution as f64;
            vec![theta.cos(), theta.sin()]
        })
        .collect()
}

fn fibonacci_nodes(resolution: usize) -> Vec<Vec<f64>> {
    use std::f64::consts::PI;
    let golden_angle = PI * (3.0 - 5.0_f64.sqrt());
    let n = resolution as f64;
    (0..resolution)
        .map(|k| {
            let z = 1.0 - (2 * k + 1) as f64 / n;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let az = golden_angle * k as f64;
            vec![r * az.cos(), r * az.sin(), z]
        })
        .collect()
}

fn monte_carlo_nodes(dim: usize, resolution: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = Vec::with_capacity(resolution);
    while nodes.len() < resolution {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let n = crate::numeric::norm(&v);
        if n > 1e-9 {
            nodes.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    nodes
}
