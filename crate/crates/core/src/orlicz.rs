//! The Orlicz function pair `(phi, varphi)` and the linear Orlicz radial
//! addition.
//!
//! A pair belongs to one of two families, linked by the same relation with
//! opposite sign:
//!
//! - family `A_decreasing`: `phi` strictly decreasing, `phi(0+) = inf`,
//!   `phi(inf) = 0`, `phi' < 0`, and `varphi(t) = -phi'(t) t`;
//! - family `B_increasing`: `phi` strictly increasing, `phi(0+) = 0`,
//!   `phi(inf) = inf`, `phi' > 0`, and `varphi(t) = phi'(t) t`.
//!
//! Pairs are supplied as `(phi, phi', varphi)` triples rather than deriving
//! the derivative numerically; [`OrliczPair::validate`] then checks the
//! triple's internal consistency on a probe set instead of trusting it.
//! The conditions are stated on all of `(0, inf)`, which is untestable, so
//! validation is probe-based: monotonicity and signs on a log-spaced probe,
//! plus limit heuristics that compare values across a wide multiplicative
//! span. Custom pairs failing only the limit heuristics are usable
//! everywhere except the solver, which needs the full decreasing-family
//! limit behavior.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::roots::{solve_monotone_positive, BracketPolicy, RootError};

/// Shared positive scalar function. Must be pure: pairs are immutable and
/// used concurrently.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Error)]
pub enum PairError {
    #[error("power pair exponent must be nonzero (the log case is out of scope)")]
    ZeroExponent,
    #[error("radial addition inputs must be strictly positive (node {node})")]
    NonPositiveSample { node: usize },
    #[error("radial samples have mismatched lengths: {lhs} vs {rhs}")]
    LengthMismatch { lhs: usize, rhs: usize },
    #[error("defining equation could not be bracketed at node {node}: {source}")]
    BracketingFailure { node: usize, source: RootError },
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(f64),
    #[error("probe set must be nonempty, sorted, and strictly positive")]
    BadProbe,
    #[error("table pair: {0}")]
    BadTable(String),
    #[error("functions disagree on monotonicity direction")]
    MixedMonotonicity,
}

/// Family tag for the pair: `A_decreasing` has `varphi = -phi' t`,
/// `B_increasing` has `varphi = phi' t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairFamily {
    #[serde(rename = "A_decreasing")]
    ADecreasing,
    #[serde(rename = "B_increasing")]
    BIncreasing,
}

impl PairFamily {
    /// Sign `s` in `varphi(t) = s * phi'(t) * t`.
    fn relation_sign(&self) -> f64 {
        match self {
            PairFamily::ADecreasing => -1.0,
            PairFamily::BIncreasing => 1.0,
        }
    }
}

/// The function pair `(phi, phi', varphi)` with its family tag.
#[derive(Clone)]
pub struct OrliczPair {
    family: PairFamily,
    phi: ScalarFn,
    phi_prime: ScalarFn,
    varphi: ScalarFn,
    label: String,
    /// Degree `q` with `phi(s t) = s^q phi(t)` when the pair is known to be
    /// homogeneous (power pairs). Lets constraint rescaling skip the 1-D
    /// root find.
    homogeneity: Option<f64>,
}

impl fmt::Debug for OrliczPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrliczPair")
            .field("family", &self.family)
            .field("label", &self.label)
            .field("homogeneity", &self.homogeneity)
            .finish()
    }
}

impl OrliczPair {
    /// Power pair for exponent `q != 0`: `varphi(t) = t^q` with
    /// `phi(t) = -t^q/q` (family A) for `q < 0` and `phi(t) = t^q/q`
    /// (family B) for `q > 0`.
    pub fn power(q: f64) -> Result<Self, PairError> {
        if q == 0.0 || !q.is_finite() {
            return Err(PairError::ZeroExponent);
        }
        let family = if q < 0.0 { PairFamily::ADecreasing } else { PairFamily::BIncreasing };
        let phi: ScalarFn = Arc::new(move |t: f64| t.powf(q) / q.abs());
        let phi_prime: ScalarFn = Arc::new(move |t: f64| q.signum() * t.powf(q - 1.0));
        let varphi: ScalarFn = Arc::new(move |t: f64| t.powf(q));
        Ok(Self {
            family,
            phi,
            phi_prime,
            varphi,
            label: format!("power:{q}"),
            homogeneity: Some(q),
        })
    }

    /// Pair from an explicit `(phi, phi', varphi)` triple. Consistency of
    /// the triple is *not* assumed; run [`validate`](Self::validate).
    pub fn from_functions(
        family: PairFamily,
        phi: ScalarFn,
        phi_prime: ScalarFn,
        varphi: ScalarFn,
        label: impl Into<String>,
    ) -> Self {
        Self { family, phi, phi_prime, varphi, label: label.into(), homogeneity: None }
    }

    /// Pair from sampled rows `(t, phi(t), phi'(t))`, sorted by `t`.
    /// `varphi` is derived through the family relation and intermediate
    /// values come from monotone linear interpolation. Outside the sampled
    /// range the end values are held flat, so validation probes reaching
    /// the table edge flag both the monotonicity and the limit heuristics;
    /// a table cannot establish the `(0, inf)` limit behavior the solver
    /// needs.
    pub fn from_table(
        rows: &[(f64, f64, f64)],
        label: impl Into<String>,
    ) -> Result<Self, PairError> {
        if rows.len() < 2 {
            return Err(PairError::BadTable("need at least two rows".into()));
        }
        let ts: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let phis: Vec<f64> = rows.iter().map(|r| r.1).collect();
        let primes: Vec<f64> = rows.iter().map(|r| r.2).collect();
        if ts.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
            return Err(PairError::BadTable("abscissae must be positive and finite".into()));
        }
        if ts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PairError::BadTable("abscissae must be strictly increasing".into()));
        }
        if phis.iter().chain(primes.iter()).any(|v| !v.is_finite()) {
            return Err(PairError::BadTable("values must be finite".into()));
        }
        if phis.iter().any(|&p| !(p > 0.0)) {
            return Err(PairError::BadTable("phi samples must be positive".into()));
        }
        let family = if primes.iter().all(|&d| d < 0.0) {
            PairFamily::ADecreasing
        } else if primes.iter().all(|&d| d > 0.0) {
            PairFamily::BIncreasing
        } else {
            return Err(PairError::BadTable(
                "phi_prime samples must have a single strict sign".into(),
            ));
        };
        let sign = family.relation_sign();
        let (ts1, ts2) = (ts.clone(), ts);
        let phi: ScalarFn = Arc::new(move |t| interp(&ts1, &phis, t));
        let phi_prime: ScalarFn = Arc::new(move |t| interp(&ts2, &primes, t));
        let pp = phi_prime.clone();
        let varphi: ScalarFn = Arc::new(move |t| sign * pp(t) * t);
        Ok(Self { family, phi, phi_prime, varphi, label: label.into(), homogeneity: None })
    }

    pub fn family(&self) -> PairFamily {
        self.family
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn homogeneity(&self) -> Option<f64> {
        self.homogeneity
    }

    pub fn phi(&self, t: f64) -> f64 {
        (self.phi)(t)
    }

    pub fn phi_prime(&self, t: f64) -> f64 {
        (self.phi_prime)(t)
    }

    pub fn varphi(&self, t: f64) -> f64 {
        (self.varphi)(t)
    }

    /// Log-spaced probe over `[1e-3, 1e3]` used by default for validation.
    pub fn default_probe() -> Vec<f64> {
        let n = 61;
        (0..n)
            .map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / (n - 1) as f64))
            .collect()
    }

    /// Probe-based check of the family conditions. Non-finite values are
    /// reported in the result, not returned as an `Err`.
    pub fn validate(&self, probe: &[f64]) -> Result<ValidationReport, PairError> {
        if probe.is_empty()
            || probe.iter().any(|&t| !(t > 0.0) || !t.is_finite())
            || probe.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(PairError::BadProbe);
        }
        let sign = self.family.relation_sign();
        let decreasing = self.family == PairFamily::ADecreasing;

        let mut non_finite = Vec::new();
        let mut samples = Vec::with_capacity(probe.len());
        for &t in probe {
            let (p, dp, vp) = (self.phi(t), self.phi_prime(t), self.varphi(t));
            if !p.is_finite() || !dp.is_finite() || !vp.is_finite() {
                non_finite.push(t);
            }
            samples.push((t, p, dp, vp));
        }
        let finite = non_finite.is_empty();

        let mut conditions = Vec::new();

        let positive = finite && samples.iter().all(|&(_, p, _, vp)| p > 0.0 && vp > 0.0);
        conditions.push(ConditionCheck {
            name: "phi and varphi positive on probe",
            passed: positive,
            detail: String::new(),
        });

        let monotone = finite
            && samples.windows(2).all(|w| {
                let (p0, p1) = (w[0].1, w[1].1);
                if decreasing {
                    p0 > p1
                } else {
                    p0 < p1
                }
            });
        conditions.push(ConditionCheck {
            name: if decreasing {
                "phi strictly decreasing on probe"
            } else {
                "phi strictly increasing on probe"
            },
            passed: monotone,
            detail: String::new(),
        });

        let sign_ok = finite
            && samples
                .iter()
                .all(|&(_, _, dp, _)| if decreasing { dp < 0.0 } else { dp > 0.0 });
        conditions.push(ConditionCheck {
            name: if decreasing {
                "phi_prime strictly negative on probe"
            } else {
                "phi_prime strictly positive on probe"
            },
            passed: sign_ok,
            detail: String::new(),
        });

        let mut max_mismatch: f64 = 0.0;
        if finite {
            for &(t, _, dp, vp) in &samples {
                if vp.abs() > 0.0 {
                    let mismatch = (vp - sign * dp * t).abs() / vp.abs();
                    max_mismatch = max_mismatch.max(mismatch);
                }
            }
        } else {
            max_mismatch = f64::NAN;
        }
        let relation_ok = finite && max_mismatch <= 1e-8;
        conditions.push(ConditionCheck {
            name: "varphi matches the family relation phi_prime(t)*t",
            passed: relation_ok,
            detail: format!("max relative mismatch {max_mismatch:.3e}"),
        });

        // Limit heuristics: compare values across a 2^20 multiplicative span
        // beyond the probe. A factor-2 change is taken as evidence for the
        // required divergence/vanishing; tables clamp outside their range
        // and thus fail here by design.
        let t_min = probe[0];
        let t_max = probe[probe.len() - 1];
        let span = (2f64).powi(20);
        let (zero_ok, inf_ok) = if finite {
            let p_min = self.phi(t_min);
            let p_below = self.phi(t_min / span);
            let p_max = self.phi(t_max);
            let p_above = self.phi(t_max * span);
            if decreasing {
                (
                    p_below >= 2.0 * p_min || p_below.is_infinite(),
                    p_above.is_finite() && p_above <= 0.5 * p_max,
                )
            } else {
                (
                    p_below.is_finite() && p_below <= 0.5 * p_min,
                    p_above >= 2.0 * p_max || p_above.is_infinite(),
                )
            }
        } else {
            (false, false)
        };
        conditions.push(ConditionCheck {
            name: if decreasing {
                "limit heuristic: phi diverges at 0+"
            } else {
                "limit heuristic: phi vanishes at 0+"
            },
            passed: zero_ok,
            detail: String::new(),
        });
        conditions.push(ConditionCheck {
            name: if decreasing {
                "limit heuristic: phi vanishes at infinity"
            } else {
                "limit heuristic: phi diverges at infinity"
            },
            passed: inf_ok,
            detail: String::new(),
        });

        Ok(ValidationReport {
            family: self.family,
            conditions,
            max_relation_mismatch: max_mismatch,
            non_finite_probe_points: non_finite,
        })
    }

    /// Whether the pair may drive the Minkowski solver: decreasing family
    /// with every probe condition, including the limit heuristics, passing.
    pub fn solver_admissible(&self) -> bool {
        self.family == PairFamily::ADecreasing
            && self
                .validate(&Self::default_probe())
                .map(|r| r.all_passed())
                .unwrap_or(false)
    }
}

/// One named validation condition with its outcome.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of [`OrliczPair::validate`].
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub family: PairFamily,
    pub conditions: Vec<ConditionCheck>,
    pub max_relation_mismatch: f64,
    pub non_finite_probe_points: Vec<f64>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    /// Everything except the limit heuristics, which only produce warnings
    /// outside the solver.
    pub fn core_passed(&self) -> bool {
        self.conditions
            .iter()
            .filter(|c| !c.name.starts_with("limit heuristic"))
            .all(|c| c.passed)
    }

    pub fn limits_passed(&self) -> bool {
        self.conditions
            .iter()
            .filter(|c| c.name.starts_with("limit heuristic"))
            .all(|c| c.passed)
    }
}

/// Shared monotonicity direction of the two addition functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

/// The two strictly monotone functions and `epsilon` defining the linear
/// Orlicz radial addition `phi1(rho_K/rho) + eps phi2(rho_L/rho) = 1`.
#[derive(Clone)]
pub struct RadialAdditionSpec {
    phi1: ScalarFn,
    phi2: ScalarFn,
    monotonicity: Monotonicity,
    epsilon: f64,
}

impl fmt::Debug for RadialAdditionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialAdditionSpec")
            .field("monotonicity", &self.monotonicity)
            .field("epsilon", &self.epsilon)
            .finish()
    }
}

impl RadialAdditionSpec {
    pub fn new(
        phi1: ScalarFn,
        phi2: ScalarFn,
        monotonicity: Monotonicity,
        epsilon: f64,
    ) -> Result<Self, PairError> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(PairError::NonPositiveEpsilon(epsilon));
        }
        // Spot-check the declared shared direction on a coarse probe.
        let probe = [0.25, 0.5, 1.0, 2.0, 4.0];
        for f in [&phi1, &phi2] {
            let vals: Vec<f64> = probe.iter().map(|&t| f(t)).collect();
            let ok = match monotonicity {
                Monotonicity::Increasing => vals.windows(2).all(|w| w[0] < w[1]),
                Monotonicity::Decreasing => vals.windows(2).all(|w| w[0] > w[1]),
            };
            if !ok {
                return Err(PairError::MixedMonotonicity);
            }
        }
        Ok(Self { phi1, phi2, monotonicity, epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Per-node solution of the radial-addition defining equation
/// `phi1(rho_K/rho) + eps phi2(rho_L/rho) = 1`, by bracketing and bisection
/// to relative tolerance 1e-12. Uniqueness holds because the left side is
/// strictly monotone in `rho`.
pub fn radial_addition(
    rho_k: &[f64],
    rho_l: &[f64],
    spec: &RadialAdditionSpec,
) -> Result<Vec<f64>, PairError> {
    if rho_k.len() != rho_l.len() {
        return Err(PairError::LengthMismatch { lhs: rho_k.len(), rhs: rho_l.len() });
    }
    let mut out = Vec::with_capacity(rho_k.len());
    for (node, (&rk, &rl)) in rho_k.iter().zip(rho_l).enumerate() {
        if !(rk > 0.0) || !(rl > 0.0) || !rk.is_finite() || !rl.is_finite() {
            return Err(PairError::NonPositiveSample { node });
        }
        let eps = spec.epsilon;
        let f = |rho: f64| (spec.phi1)(rk / rho) + eps * (spec.phi2)(rl / rho);
        let lo = rk.min(rl) * 1e-6;
        let hi = rk.max(rl) * 1e6;
        let rho = solve_monotone_positive(f, 1.0, lo, hi, 1e-12, BracketPolicy::default())
            .map_err(|source| PairError::BracketingFailure { node, source })?;
        out.push(rho);
    }
    Ok(out)
}

fn interp(ts: &[f64], vs: &[f64], t: f64) -> f64 {
    if t <= ts[0] {
        return vs[0];
    }
    if t >= ts[ts.len() - 1] {
        return vs[vs.len() - 1];
    }
    let hi = ts.partition_point(|&x| x < t);
    let lo = hi - 1;
    let w = (t - ts[lo]) / (ts[hi] - ts[lo]);
    vs[lo] + w * (vs[hi] - vs[lo])
}
